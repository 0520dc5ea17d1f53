use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A number field `Q[t]/(m(t))` given by a monic minimal polynomial.
///
/// Coefficients are stored low degree first, so `t^2 + 1` is `[1, 0, 1]`.
/// `m(t) = t` models the rational field itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    generator: String,
    minpoly: Vec<BigRational>,
}

impl FieldSpec {
    pub fn new(generator: impl Into<String>, minpoly: Vec<BigRational>) -> Result<Self> {
        let mut minpoly = minpoly;
        upoly_trim(&mut minpoly);
        if minpoly.len() < 2 {
            return Err(Error::Input("minimal polynomial must have degree >= 1".into()));
        }
        if !minpoly.last().unwrap().is_one() {
            return Err(Error::Input("minimal polynomial must be monic".into()));
        }
        Ok(FieldSpec { generator: generator.into(), minpoly })
    }

    pub fn from_integers(generator: &str, coeffs: &[i64]) -> Result<Self> {
        Self::new(generator, coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// The rational numbers, modelled as `Q[t]/(t)`.
    pub fn rational() -> Self {
        Self::from_integers("t", &[0, 1]).unwrap()
    }

    /// Gaussian rationals `Q[t]/(t^2 + 1)`; `t` plays the role of `i`.
    pub fn gaussian() -> Self {
        Self::from_integers("t", &[1, 0, 1]).unwrap()
    }

    /// `Q[t]/(t^2 - t + 1)`; `t` is a primitive sixth root of unity, i.e. `(-1)^(1/3)`.
    pub fn sixth_roots() -> Self {
        Self::from_integers("t", &[1, -1, 1]).unwrap()
    }

    pub fn generator(&self) -> &str {
        &self.generator
    }

    pub fn minpoly(&self) -> &[BigRational] {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    /// `i` may stand for the generator when the field is `Q(i)`.
    pub fn is_gaussian(&self) -> bool {
        self.minpoly == FieldSpec::gaussian().minpoly
    }

    /// Reduce a polynomial in `t` modulo `m(t)`, returning exactly `degree()` coordinates.
    pub fn reduce(&self, mut p: Vec<BigRational>) -> Vec<BigRational> {
        let d = self.degree();
        while p.len() > d {
            let lead = p.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            let shift = p.len() - d;
            for (i, c) in self.minpoly[..d].iter().enumerate() {
                p[shift + i] -= &lead * c;
            }
        }
        p.resize(d, BigRational::zero());
        p
    }

    /// Inverse of a reduced element via the extended Euclidean algorithm on `m`.
    pub fn invert(&self, a: &[BigRational]) -> Result<Vec<BigRational>> {
        let mut a = a.to_vec();
        upoly_trim(&mut a);
        if a.is_empty() {
            return Err(Error::DivideByZero);
        }
        // Invariant: r0 = s0 * a (mod m), r1 = s1 * a (mod m).
        let mut r0 = self.minpoly.clone();
        let mut r1 = a;
        let mut s0: Vec<BigRational> = Vec::new();
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while r1.len() > 1 {
            let (q, r) = upoly_divrem(&r0, &r1);
            let s2 = upoly_sub(&s0, &upoly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            if r1.is_empty() {
                // gcd(a, m) has positive degree: m is not irreducible or a is a zero divisor
                return Err(Error::DivideByZero);
            }
        }
        let c = r1[0].clone();
        let inv: Vec<BigRational> = s1.iter().map(|x| x / &c).collect();
        Ok(self.reduce(inv))
    }

    /// All complex roots of `m(t)` (Durand-Kerner, polished with Newton steps).
    pub fn numeric_roots(&self) -> Vec<Complex64> {
        let coeffs: Vec<Complex64> = self
            .minpoly
            .iter()
            .map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
            .collect();
        let d = self.degree();
        if d == 1 {
            return vec![-coeffs[0]];
        }
        let eval = |z: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
        let seed = Complex64::new(0.4, 0.9);
        let mut roots: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32)).collect();
        for _ in 0..500 {
            let mut delta = 0.0f64;
            for i in 0..d {
                let mut denom = Complex64::new(1.0, 0.0);
                for j in 0..d {
                    if i != j {
                        denom *= roots[i] - roots[j];
                    }
                }
                let step = eval(roots[i]) / denom;
                roots[i] -= step;
                delta = delta.max(step.norm());
            }
            if delta < 1e-15 {
                break;
            }
        }
        let deriv: Vec<Complex64> = coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
        let eval_d = |z: Complex64| deriv.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
        for r in roots.iter_mut() {
            for _ in 0..3 {
                let dz = eval_d(*r);
                if dz.norm() > 0.0 {
                    *r -= eval(*r) / dz;
                }
            }
        }
        roots
    }

    /// The embedding used by the numeric oracle: the root with the largest
    /// imaginary part, ties broken by the largest real part.
    pub fn embedding_root(&self) -> Complex64 {
        let mut roots = self.numeric_roots();
        roots.sort_by(|a, b| {
            let key = |z: &Complex64| ((z.im * 1e9).round(), (z.re * 1e9).round());
            key(b).partial_cmp(&key(a)).unwrap_or(std::cmp::Ordering::Equal)
        });
        roots[0]
    }

    /// Residual `|m(root)|`, used to validate caller-supplied roots.
    pub fn root_residual(&self, root: Complex64) -> f64 {
        self.minpoly
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * root + c.to_f64().unwrap_or(f64::NAN))
            .norm()
    }
}

impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.minpoly.hash(state);
    }
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::gaussian()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.minpoly.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{}", mag)?,
                (1, true) => write!(f, "{}", self.generator)?,
                (1, false) => write!(f, "{}*{}", mag, self.generator)?,
                (_, true) => write!(f, "{}^{}", self.generator, k)?,
                (_, false) => write!(f, "{}*{}^{}", mag, self.generator, k)?,
            }
        }
        Ok(())
    }
}

// Dense univariate helpers over Q, low degree first. The zero polynomial is empty.

pub(crate) fn upoly_trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn upoly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    upoly_trim(&mut out);
    out
}

pub(crate) fn upoly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    upoly_trim(&mut out);
    out
}

pub(crate) fn upoly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    upoly_trim(&mut r);
    let db = b.len() - 1;
    let lb = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lb;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        q[shift] = c;
        r.pop();
        upoly_trim(&mut r);
    }
    upoly_trim(&mut q);
    (q, r)
}
