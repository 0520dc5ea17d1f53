//! Exact structure-constant toolkit for Rota-Baxter operators on graded
//! associative, Lie, pre-Lie and L-dendriform superalgebras.

pub mod catalog;
pub mod constructions;
pub mod error;
pub mod exactmath;
pub mod format;
pub mod operators;
pub mod oracle;
pub mod solver;
pub mod structures;

pub use error::{Error, Result};
