use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use super::scalar::Scalar;

/// A parameter or unknown name. Ordered naturally, so `a2 < a10`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    fn split(&self) -> (&str, Option<u64>) {
        let s: &str = &self.0;
        let cut = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        if cut == s.len() {
            (s, None)
        } else {
            (&s[..cut], s[cut..].parse().ok())
        }
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        let (pa, na) = self.split();
        let (pb, nb) = other.split();
        pa.cmp(pb).then(na.cmp(&nb)).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

/// A power product, stored sparsely as `(symbol, exponent)` pairs sorted by symbol.
///
/// `Ord` is degree reverse lexicographic with `x1 > x2 > ...` in symbol order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: Symbol) -> Self {
        Monomial(vec![(s, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(Symbol, u32)>) -> Self {
        pairs.retain(|(_, e)| *e > 0);
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Symbol, u32)> = Vec::with_capacity(pairs.len());
        for (s, e) in pairs {
            match out.last_mut() {
                Some((t, f)) if *t == s => *f += e,
                _ => out.push((s, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, s: &Symbol) -> u32 {
        self.0.binary_search_by(|(t, _)| t.cmp(s)).map(|i| self.0[i].1).unwrap_or(0)
    }

    pub fn pairs(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.0.iter().map(|(s, _)| s)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|(s, e)| other.exponent(s) >= *e)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(
            other
                .0
                .iter()
                .filter_map(|(s, e)| {
                    let r = e - self.exponent(s);
                    (r > 0).then(|| (s.clone(), r))
                })
                .collect(),
        )
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|(s, e)| {
                    let m = (*e).min(other.exponent(s));
                    (m > 0).then(|| (s.clone(), m))
                })
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut pairs = self.0.clone();
        for (s, e) in &other.0 {
            match pairs.iter_mut().find(|(t, _)| t == s) {
                Some((_, f)) => *f = (*f).max(*e),
                None => pairs.push((s.clone(), *e)),
            }
        }
        Monomial::from_pairs(pairs)
    }

    /// Drop the given symbol, returning its exponent and the remaining monomial.
    pub fn split_off(&self, s: &Symbol) -> (u32, Monomial) {
        let e = self.exponent(s);
        (e, Monomial(self.0.iter().filter(|(t, _)| t != s).cloned().collect()))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.degree().cmp(&other.degree());
        if d != Ordering::Equal {
            return d;
        }
        // Walk from the smallest variable (largest symbol) upwards; the
        // first difference decides, smaller exponent ranks higher.
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (a.len(), b.len());
        while i > 0 || j > 0 {
            let sa = if i > 0 { Some(&a[i - 1]) } else { None };
            let sb = if j > 0 { Some(&b[j - 1]) } else { None };
            let (ea, eb) = match (sa, sb) {
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Ordering::Equal => {
                        i -= 1;
                        j -= 1;
                        (x.1, y.1)
                    }
                    Ordering::Greater => {
                        i -= 1;
                        (x.1, 0)
                    }
                    Ordering::Less => {
                        j -= 1;
                        (0, y.1)
                    }
                },
                (Some(x), None) => {
                    i -= 1;
                    (x.1, 0)
                }
                (None, Some(y)) => {
                    j -= 1;
                    (0, y.1)
                }
                (None, None) => unreachable!(),
            };
            if ea != eb {
                return eb.cmp(&ea);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (s, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{}", s)?;
            } else {
                write!(f, "{}^{}", s, e)?;
            }
        }
        Ok(())
    }
}

/// A multivariate polynomial with number-field coefficients.
/// Terms are kept in degrevlex order; the leading term is the last entry.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct PolyExpr {
    terms: BTreeMap<Monomial, Scalar>,
}

impl PolyExpr {
    pub fn zero() -> Self {
        PolyExpr { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Scalar::int(n))
    }

    pub fn var(s: Symbol) -> Self {
        Self::term(Scalar::one(), Monomial::var(s))
    }

    pub fn term(c: Scalar, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        PolyExpr { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = PolyExpr::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_default()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, s: &Symbol) -> u32 {
        self.terms.keys().map(|m| m.exponent(s)).max().unwrap_or(0)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms.keys().flat_map(|m| m.symbols().cloned()).collect()
    }

    pub fn scale(&self, c: &Scalar) -> PolyExpr {
        if c.is_zero() {
            return PolyExpr::zero();
        }
        PolyExpr { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_term(&self, c: &Scalar, mono: &Monomial) -> PolyExpr {
        if c.is_zero() {
            return PolyExpr::zero();
        }
        PolyExpr { terms: self.terms.iter().map(|(m, x)| (m.mul(mono), x * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> PolyExpr {
        let mut acc = PolyExpr::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The monomial gcd of all terms (`1` for the zero polynomial).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    /// Divide every term by a monomial that divides all of them.
    pub fn div_monomial(&self, d: &Monomial) -> PolyExpr {
        PolyExpr { terms: self.terms.iter().map(|(m, c)| (d.quotient_of(m), c.clone())).collect() }
    }

    /// Exact quotient `self / q` if `q` divides `self`, else `None`.
    pub fn exact_div(&self, q: &PolyExpr) -> Option<PolyExpr> {
        let (lm_q, lc_q) = q.leading()?;
        let lc_inv = lc_q.inverse().ok()?;
        let mut rem = self.clone();
        let mut quot = PolyExpr::zero();
        while let Some((lm, lc)) = rem.leading() {
            if !lm_q.divides(lm) {
                return None;
            }
            let m = lm_q.quotient_of(lm);
            let c = lc * &lc_inv;
            rem = &rem - &q.mul_term(&c, &m);
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// Substitute polynomials for symbols; symbols missing from the map are kept.
    pub fn substitute(&self, map: &HashMap<Symbol, PolyExpr>) -> PolyExpr {
        let mut out = PolyExpr::zero();
        let mut cache: HashMap<(Symbol, u32), PolyExpr> = HashMap::new();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut acc = PolyExpr::constant(c.clone());
            for (s, e) in m.pairs() {
                match map.get(s) {
                    Some(p) => {
                        let pw = cache.entry((s.clone(), *e)).or_insert_with(|| p.pow(*e));
                        acc = &acc * &*pw;
                    }
                    None => kept.push((s.clone(), *e)),
                }
            }
            let acc = acc.mul_term(&Scalar::one(), &Monomial::from_pairs(kept));
            out = &out + &acc;
        }
        out
    }

    /// View as a polynomial in `s` with coefficients free of `s`, indexed by power.
    pub fn coefficients_in(&self, s: &Symbol) -> BTreeMap<u32, PolyExpr> {
        let mut out: BTreeMap<u32, PolyExpr> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(s);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Floating evaluation; scalars are embedded through `root`.
    /// Symbols missing from `values` evaluate to NaN.
    pub fn eval(&self, values: &HashMap<Symbol, Complex64>, root: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex(root);
            for (s, e) in m.pairs() {
                let v = values.get(s).copied().unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                t *= v.powu(*e);
            }
            acc += t;
        }
        acc
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> PolyExpr {
        PolyExpr::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

impl<'a> Add<&'a PolyExpr> for &'a PolyExpr {
    type Output = PolyExpr;
    fn add(self, rhs: &PolyExpr) -> PolyExpr {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a PolyExpr> for &'a PolyExpr {
    type Output = PolyExpr;
    fn sub(self, rhs: &PolyExpr) -> PolyExpr {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &PolyExpr {
    type Output = PolyExpr;
    fn neg(self) -> PolyExpr {
        PolyExpr { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl<'a> Mul<&'a PolyExpr> for &'a PolyExpr {
    type Output = PolyExpr;
    fn mul(self, rhs: &PolyExpr) -> PolyExpr {
        let mut out = PolyExpr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<PolyExpr> for PolyExpr {
            type Output = PolyExpr;
            fn $m(self, rhs: PolyExpr) -> PolyExpr {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PolyExpr {
    type Output = PolyExpr;
    fn neg(self) -> PolyExpr {
        -&self
    }
}

/// Canonical rendering: terms in descending degrevlex order, `*` between factors.
impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative_rational();
            let mag = if negative { -c } else { c.clone() };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            match (m.is_one(), mag.is_one()) {
                (true, _) => write!(f, "{}", mag)?,
                (false, true) => write!(f, "{}", m)?,
                (false, false) => write!(f, "{}*{}", mag, m)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> PolyExpr {
        PolyExpr::var(Symbol::new(s))
    }

    #[test]
    fn natural_symbol_order() {
        assert!(Symbol::new("a2") < Symbol::new("a10"));
        assert!(Symbol::new("a10") < Symbol::new("b1"));
        assert!(Symbol::new("h") < Symbol::new("k"));
    }

    #[test]
    fn degrevlex_order() {
        let m = |p: &[(&str, u32)]| Monomial::from_pairs(p.iter().map(|(s, e)| (Symbol::new(s), *e)).collect());
        // x1 > x2 > x3
        assert!(m(&[("x1", 1)]) > m(&[("x2", 1)]));
        assert!(m(&[("x1", 2)]) > m(&[("x1", 1), ("x2", 1)]));
        assert!(m(&[("x1", 1), ("x2", 1)]) > m(&[("x2", 2)]));
        // degrevlex, not lex: x2^2 > x1 x3
        assert!(m(&[("x2", 2)]) > m(&[("x1", 1), ("x3", 1)]));
        assert!(m(&[("x3", 1)]) > m(&[]));
    }

    #[test]
    fn commutativity_cancels() {
        let a1 = v("a1");
        let a2 = v("a2");
        assert!((&(&a1 * &a2) - &(&a2 * &a1)).is_zero());
        assert!(!(&(&a1 * &a1) - &(&a2 * &a2)).is_zero());
    }

    #[test]
    fn exact_division() {
        let a1 = v("a1");
        let a2 = v("a2");
        let p = &(&a1 + &a2) * &(&a1 - &a2);
        assert_eq!(p.exact_div(&(&a1 + &a2)), Some(&a1 - &a2));
        assert_eq!(p.exact_div(&(&a1 + &PolyExpr::int(1))), None);
    }

    #[test]
    fn rendering() {
        let a1 = v("a1");
        let a2 = v("a2");
        let p = &(&(&a1 * &a1) - &PolyExpr::int(2).mul_term(&Scalar::one(), &Monomial::var(Symbol::new("a2")))) + &PolyExpr::int(3);
        assert_eq!(p.to_string(), "a1^2 - 2*a2 + 3");
        assert_eq!((-&(&a1 * &a2)).to_string(), "-a1*a2");
    }
}
