use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Check failures are not errors: they are reported through
/// [`CheckReport`](crate::structures::CheckReport). These variants cover
/// malformed input, violated preconditions and resource caps.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivideByZero,
    #[error("denominator too close to zero at the sampled point ({0:e})")]
    NearZeroDenominator(f64),
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
    #[error("a nonzero weight requires the module to carry an internal product")]
    MissingInternalProduct,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("the commutator bracket does not satisfy super-Jacobi")]
    NotLieAdmissible,
    #[error("operators do not commute")]
    NotCommuting,
    #[error("free structure parameters must be pinned first: {0:?}")]
    UnpinnedParameters(Vec<String>),
    #[error("Groebner basis computation exceeded caps ({0})")]
    CapExceeded(String),
    #[error("nonvanishing constraint `{0}` fails at the fitted parameters")]
    ConstraintViolated(String),
    #[error("no family parameters reproduce the point")]
    NoMatch,
    #[error("unknown catalog id `{0}`")]
    UnknownId(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
