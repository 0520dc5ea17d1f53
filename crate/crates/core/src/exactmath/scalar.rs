use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::FieldSpec;
use crate::error::{Error, Result};

/// An element of a number field `Q[t]/(m(t))`.
///
/// Values that happen to be rational are stored without a field, so equality
/// is structural. Mixing two different non-rational fields is a programming
/// error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    coords: Vec<BigRational>,
    field: Option<Arc<FieldSpec>>,
}

impl Scalar {
    pub fn rational(q: BigRational) -> Self {
        Scalar { coords: vec![q], field: None }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    /// Build from coordinates `c0 + c1 t + ...`, reducing modulo `m`.
    pub fn from_coords(coords: Vec<BigRational>, field: &Arc<FieldSpec>) -> Self {
        if field.is_rational() {
            // Q[t]/(t - c): t evaluates to the root c
            let root = -field.minpoly()[0].clone();
            let v = coords.iter().rev().fold(BigRational::zero(), |acc, c| acc * &root + c);
            return Self::rational(v);
        }
        Self::normalized(field.reduce(coords), Some(field.clone()))
    }

    /// The generator `t` of a field.
    pub fn generator(field: &Arc<FieldSpec>) -> Self {
        Self::from_coords(vec![BigRational::zero(), BigRational::one()], field)
    }

    fn normalized(coords: Vec<BigRational>, field: Option<Arc<FieldSpec>>) -> Self {
        if coords.iter().skip(1).all(|c| c.is_zero()) {
            let c0 = coords.into_iter().next().unwrap_or_else(BigRational::zero);
            return Self::rational(c0);
        }
        Scalar { coords, field }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn field(&self) -> Option<&Arc<FieldSpec>> {
        self.field.as_ref()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.field.is_none() {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_none() && self.coords[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.field.is_none() && self.coords[0].is_one()
    }

    /// A rational scalar strictly below zero. Non-rational scalars are never negative.
    pub fn is_negative_rational(&self) -> bool {
        self.field.is_none() && self.coords[0].is_negative()
    }

    fn common_field(&self, other: &Scalar) -> Option<Arc<FieldSpec>> {
        match (&self.field, &other.field) {
            (None, None) => None,
            (Some(f), None) | (None, Some(f)) => Some(f.clone()),
            (Some(f), Some(g)) => {
                assert!(Arc::ptr_eq(f, g) || f == g, "scalars from different number fields: {} and {}", f, g);
                Some(f.clone())
            }
        }
    }

    fn padded(&self, d: usize) -> Vec<BigRational> {
        let mut v = self.coords.clone();
        v.resize(d, BigRational::zero());
        v
    }

    pub fn inverse(&self) -> Result<Scalar> {
        match &self.field {
            None => {
                if self.coords[0].is_zero() {
                    Err(Error::DivideByZero)
                } else {
                    Ok(Self::rational(self.coords[0].recip()))
                }
            }
            Some(f) => Ok(Self::normalized(f.invert(&self.coords)?, Some(f.clone()))),
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Complex value under the embedding `t -> root`.
    pub fn to_complex(&self, root: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coords.iter().rev() {
            acc = acc * root + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Complex value under the field's default embedding.
    pub fn to_complex_default(&self) -> Complex64 {
        match &self.field {
            None => self.to_complex(Complex64::new(0.0, 0.0)),
            Some(f) => self.to_complex(f.embedding_root()),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::rational(q)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match self.common_field(rhs) {
            None => Scalar::rational(&self.coords[0] + &rhs.coords[0]),
            Some(f) => {
                let d = f.degree();
                let v = self.padded(d).into_iter().zip(rhs.padded(d)).map(|(a, b)| a + b).collect();
                Scalar::normalized(v, Some(f))
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { coords: self.coords.iter().map(|c| -c).collect(), field: self.field.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.field.is_none() {
            let c = &self.coords[0];
            if c.is_zero() {
                return Scalar::zero();
            }
            return Scalar { coords: rhs.coords.iter().map(|x| x * c).collect(), field: rhs.field.clone() };
        }
        if rhs.field.is_none() {
            return rhs * self;
        }
        let f = self.common_field(rhs).unwrap();
        let mut prod = vec![BigRational::zero(); self.coords.len() + rhs.coords.len() - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        Scalar::normalized(f.reduce(prod), Some(f))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Renders rationals as `3`, `-1/2`; field elements as `(1/2 + t)` style sums.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(field) = &self.field else {
            return write!(f, "{}", self.coords[0]);
        };
        let g = field.generator();
        write!(f, "(")?;
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let power = match k {
                0 => String::new(),
                1 => g.to_string(),
                _ => format!("{}^{}", g, k),
            };
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{}", mag)?,
                (_, true) => write!(f, "{}", power)?,
                (_, false) => write!(f, "{}*{}", mag, power)?,
            }
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> Arc<FieldSpec> {
        Arc::new(FieldSpec::gaussian())
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = Scalar::generator(&gauss());
        assert_eq!(&i * &i, Scalar::int(-1));
    }

    #[test]
    fn sixth_root_squares_to_t_minus_one() {
        let f = Arc::new(FieldSpec::sixth_roots());
        let t = Scalar::generator(&f);
        assert_eq!(&t * &t, &t - &Scalar::one());
        // t^3 = -1
        assert_eq!(t.pow(3), Scalar::int(-1));
    }

    #[test]
    fn halves_add_to_one() {
        assert_eq!(Scalar::ratio(1, 2) + Scalar::ratio(1, 2), Scalar::one());
    }

    #[test]
    fn inverse_round_trip_on_small_elements() {
        for field in [gauss(), Arc::new(FieldSpec::sixth_roots())] {
            let t = Scalar::generator(&field);
            for a in -3..=3 {
                for b in -3..=3 {
                    let x = Scalar::int(a) + Scalar::int(b) * &t;
                    if x.is_zero() {
                        assert_eq!(x.inverse(), Err(Error::DivideByZero));
                        continue;
                    }
                    assert_eq!(&x * &x.inverse().unwrap(), Scalar::one());
                }
            }
        }
    }

    #[test]
    fn degree_one_field_collapses_to_rational() {
        let f = Arc::new(FieldSpec::from_integers("t", &[-3, 1]).unwrap());
        assert_eq!(Scalar::generator(&f), Scalar::int(3));
    }

    #[test]
    fn display() {
        let i = Scalar::generator(&gauss());
        assert_eq!((Scalar::ratio(1, 2) - &i).to_string(), "(1/2 - t)");
        assert_eq!(Scalar::ratio(-3, 4).to_string(), "-3/4");
    }
}
