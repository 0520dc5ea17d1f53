use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::Symbol;
use super::ratexpr::RatExpr;
use crate::error::{Error, Result};

/// Number of random points used by the numeric oracle.
pub const ORACLE_POINTS: usize = 5;
/// Bound on numerator and denominator of sampled rationals.
pub const SAMPLE_BOUND: i64 = 50;
const MAX_RESAMPLES: usize = 1000;

/// Evaluate `e` at a complex assignment, embedding scalars via `root`.
pub fn eval_numeric(e: &RatExpr, assignment: &HashMap<Symbol, Complex64>, root: Complex64) -> Result<Complex64> {
    if let Some(missing) = e.symbols().into_iter().find(|s| !assignment.contains_key(s)) {
        return Err(Error::UnknownSymbol(missing.name().to_string()));
    }
    e.eval(assignment, root)
}

/// Seeded source of parameter assignments `p/q` with `p, q` in `[-50, 50]`, `q != 0`.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rational(&mut self) -> BigRational {
        let p = self.rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
        let mut q = 0;
        while q == 0 {
            q = self.rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
        }
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn point(&mut self, symbols: &BTreeSet<Symbol>) -> HashMap<Symbol, BigRational> {
        symbols.iter().map(|s| (s.clone(), self.rational())).collect()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

pub fn to_complex_point(point: &HashMap<Symbol, BigRational>) -> HashMap<Symbol, Complex64> {
    point.iter().map(|(s, q)| (s.clone(), Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0))).collect()
}

/// Draw points until every expression has a safely nonzero denominator,
/// then return the values of all expressions at that point.
pub fn sample_values(
    exprs: &[&RatExpr],
    root: Complex64,
    sampler: &mut Sampler,
) -> Result<(HashMap<Symbol, BigRational>, Vec<Complex64>)> {
    let mut symbols = BTreeSet::new();
    for e in exprs {
        symbols.extend(e.symbols());
    }
    for _ in 0..MAX_RESAMPLES {
        let point = sampler.point(&symbols);
        let cpoint = to_complex_point(&point);
        let values: Result<Vec<Complex64>> = exprs.iter().map(|e| e.eval(&cpoint, root)).collect();
        match values {
            Ok(v) => return Ok((point, v)),
            Err(Error::NearZeroDenominator(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Internal("could not find a sample point avoiding all poles".into()))
}
