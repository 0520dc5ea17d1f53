//! Floating-point cross-check of exact Rota-Baxter verdicts.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::numeric::{sample_values, ORACLE_POINTS};
use crate::exactmath::{RatExpr, Sampler};
use crate::operators::{check_rb, rb_residual, OperatorFamily, Role};
use crate::structures::SuperAlgebra;

/// Exact-zero residuals must evaluate below this at every point.
pub const ZERO_TOL: f64 = 1e-8;
/// A nonzero residual must exceed this at one point at least.
pub const NONZERO_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub family: String,
    pub seed: u64,
    pub exact_passed: bool,
    /// Largest residual magnitude at each sampled point.
    pub point_max: Vec<f64>,
    /// Parameter values of each sampled point.
    pub points: Vec<BTreeMap<String, String>>,
    pub agree: bool,
}

impl OracleReport {
    pub fn numeric_max(&self) -> f64 {
        self.point_max.iter().cloned().fold(0.0, f64::max)
    }
}

/// Every coefficient the exact check requires to vanish: the odd part of the
/// map and the residual of each basis pair in each product.
pub fn residual_entries(alg: &SuperAlgebra, fam: &OperatorFamily) -> Result<Vec<RatExpr>> {
    if fam.role != Role::RotaBaxter {
        return Err(Error::Input(format!("the oracle handles Rota-Baxter families, `{}` is {}", fam.id, fam.role)));
    }
    if fam.map.rows() != alg.dim() || fam.map.cols() != alg.dim() {
        return Err(Error::DimensionMismatch(format!("family `{}` does not fit the algebra", fam.id)));
    }
    let mut out: Vec<RatExpr> = fam.map.parity_violations(0).into_iter().map(|(k, i)| fam.map.get(k, i).clone()).collect();
    let n = alg.dim();
    for which in 0..alg.tables.len() {
        for i in 0..n {
            for j in 0..n {
                out.extend(rb_residual(alg, which, &fam.map, &fam.weight, i, j).into_iter().filter(|e| !e.is_zero()));
            }
        }
    }
    Ok(out)
}

/// Compare the exact verdict with evaluations at five seeded random points.
///
/// An exact pass must give residuals below [`ZERO_TOL`] at every point; an
/// exact failure must show some residual above [`NONZERO_TOL`].
pub fn oracle_check(alg: &SuperAlgebra, fam: &OperatorFamily, seed: u64) -> Result<OracleReport> {
    let exact_passed = check_rb(alg, &fam.map, &fam.weight)?.passed();
    let entries = residual_entries(alg, fam)?;
    let mut exprs: Vec<&RatExpr> = entries.iter().collect();
    // keep the sampled points away from the poles of the family itself
    exprs.extend(fam.map.entries().iter());
    exprs.extend(fam.constraints.iter());
    let root = alg.field.embedding_root();
    let mut sampler = Sampler::new(seed);
    let mut point_max = Vec::new();
    let mut points = Vec::new();
    for _ in 0..ORACLE_POINTS {
        let (point, values) = sample_values(&exprs, root, &mut sampler)?;
        let worst = values[..entries.len()].iter().map(|z| z.norm()).fold(0.0, f64::max);
        point_max.push(worst);
        points.push(point.iter().map(|(s, q)| (s.name().to_string(), q.to_string())).collect());
    }
    let max = point_max.iter().cloned().fold(0.0, f64::max);
    let agree = if exact_passed { max < ZERO_TOL } else { max > NONZERO_TOL };
    Ok(OracleReport { family: fam.id.clone(), seed, exact_passed, point_max, points, agree })
}
