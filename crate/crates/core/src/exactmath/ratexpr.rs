use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::poly::{Monomial, PolyExpr, Symbol};
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// A quotient of polynomials. No multivariate gcd is taken; instead the
/// representation is kept small by stripping monomial content, trying exact
/// division, and making the denominator's leading coefficient 1.
#[derive(Clone, Debug)]
pub struct RatExpr {
    num: PolyExpr,
    den: PolyExpr,
}

impl RatExpr {
    pub fn zero() -> Self {
        RatExpr { num: PolyExpr::zero(), den: PolyExpr::one() }
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn int(n: i64) -> Self {
        Self::from_poly(PolyExpr::int(n))
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_poly(PolyExpr::constant(c))
    }

    pub fn var(name: &str) -> Self {
        Self::from_poly(PolyExpr::var(Symbol::new(name)))
    }

    pub fn from_poly(p: PolyExpr) -> Self {
        RatExpr { num: p, den: PolyExpr::one() }
    }

    pub fn new(num: PolyExpr, den: PolyExpr) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivideByZero);
        }
        Ok(Self::normalize(num, den))
    }

    pub fn num(&self) -> &PolyExpr {
        &self.num
    }

    pub fn den(&self) -> &PolyExpr {
        &self.den
    }

    fn normalize(num: PolyExpr, den: PolyExpr) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.as_constant() {
            let inv = c.inverse().expect("zero denominator");
            return RatExpr { num: num.scale(&inv), den: PolyExpr::one() };
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        let (mut num, mut den) = if g.is_one() { (num, den) } else { (num.div_monomial(&g), den.div_monomial(&g)) };
        if let Some(q) = num.exact_div(&den) {
            return RatExpr { num: q, den: PolyExpr::one() };
        }
        let lc = den.leading_coeff();
        if !lc.is_one() {
            let inv = lc.inverse().expect("nonzero leading coefficient");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatExpr { num, den }
    }

    /// True iff the numerator expands to the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn as_poly(&self) -> Option<&PolyExpr> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut s = self.num.symbols();
        s.extend(self.den.symbols());
        s
    }

    pub fn scale(&self, c: &Scalar) -> RatExpr {
        if c.is_zero() {
            return RatExpr::zero();
        }
        RatExpr { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn checked_div(&self, other: &RatExpr) -> Result<RatExpr> {
        if other.num.is_zero() {
            return Err(Error::DivideByZero);
        }
        let inv = RatExpr::normalize(other.den.clone(), other.num.clone());
        Ok(self * &inv)
    }

    pub fn pow(&self, e: u32) -> RatExpr {
        RatExpr::normalize(self.num.pow(e), self.den.pow(e))
    }

    /// Substitute rational expressions for symbols.
    pub fn substitute(&self, map: &HashMap<Symbol, RatExpr>) -> Result<RatExpr> {
        if !self.symbols().iter().any(|s| map.contains_key(s)) {
            return Ok(self.clone());
        }
        let n = subst_poly(&self.num, map);
        let d = subst_poly(&self.den, map);
        n.checked_div(&d)
    }

    /// Floating evaluation of `num / den`.
    pub fn eval(&self, values: &HashMap<Symbol, Complex64>, root: Complex64) -> Result<Complex64> {
        let d = self.den.eval(values, root);
        if !(d.norm() > 1e-9) {
            return Err(Error::NearZeroDenominator(d.norm()));
        }
        Ok(self.num.eval(values, root) / d)
    }
}

fn subst_poly(p: &PolyExpr, map: &HashMap<Symbol, RatExpr>) -> RatExpr {
    let mut acc = RatExpr::zero();
    for (m, c) in p.terms() {
        let mut t = RatExpr::constant(c.clone());
        let mut kept = Vec::new();
        for (s, e) in m.pairs() {
            match map.get(s) {
                Some(r) => t = &t * &r.pow(*e),
                None => kept.push((s.clone(), *e)),
            }
        }
        if !kept.is_empty() {
            t = &t * &RatExpr::from_poly(PolyExpr::term(Scalar::one(), Monomial::from_pairs(kept)));
        }
        acc = &acc + &t;
    }
    acc
}

impl Default for RatExpr {
    fn default() -> Self {
        RatExpr::zero()
    }
}

impl From<PolyExpr> for RatExpr {
    fn from(p: PolyExpr) -> Self {
        RatExpr::from_poly(p)
    }
}

impl From<Scalar> for RatExpr {
    fn from(c: Scalar) -> Self {
        RatExpr::constant(c)
    }
}

impl From<i64> for RatExpr {
    fn from(n: i64) -> Self {
        RatExpr::int(n)
    }
}

/// Semantic equality: `a == b` iff `a - b` has zero numerator.
impl PartialEq for RatExpr {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        (&self.num * &other.den - &other.num * &self.den).is_zero()
    }
}

impl Eq for RatExpr {}

impl<'a> Add<&'a RatExpr> for &'a RatExpr {
    type Output = RatExpr;
    fn add(self, rhs: &RatExpr) -> RatExpr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatExpr::normalize(&self.num + &rhs.num, self.den.clone());
        }
        if let Some(q) = rhs.den.exact_div(&self.den) {
            return RatExpr::normalize(&(&self.num * &q) + &rhs.num, rhs.den.clone());
        }
        if let Some(q) = self.den.exact_div(&rhs.den) {
            return RatExpr::normalize(&self.num + &(&rhs.num * &q), self.den.clone());
        }
        RatExpr::normalize(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a RatExpr> for &'a RatExpr {
    type Output = RatExpr;
    fn sub(self, rhs: &RatExpr) -> RatExpr {
        self + &(-rhs)
    }
}

impl Neg for &RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        RatExpr { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        -&self
    }
}

impl<'a> Mul<&'a RatExpr> for &'a RatExpr {
    type Output = RatExpr;
    fn mul(self, rhs: &RatExpr) -> RatExpr {
        if self.is_zero() || rhs.is_zero() {
            return RatExpr::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatExpr::from_poly(&self.num * &rhs.num);
        }
        // cancel across before multiplying out
        let (mut n1, mut d2) = (self.num.clone(), rhs.den.clone());
        if let Some(q) = n1.exact_div(&d2) {
            n1 = q;
            d2 = PolyExpr::one();
        }
        let (mut n2, mut d1) = (rhs.num.clone(), self.den.clone());
        if let Some(q) = n2.exact_div(&d1) {
            n2 = q;
            d1 = PolyExpr::one();
        }
        RatExpr::normalize(&n1 * &n2, &d1 * &d2)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RatExpr> for RatExpr {
            type Output = RatExpr;
            fn $m(self, rhs: RatExpr) -> RatExpr {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a RatExpr> for RatExpr {
            type Output = RatExpr;
            fn $m(self, rhs: &RatExpr) -> RatExpr {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// `num` alone when the denominator is 1, otherwise `(num)/(den)`.
impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
