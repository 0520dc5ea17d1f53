//! Buchberger's algorithm over the number field, degrevlex order.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exactmath::{Monomial, PolyExpr, Symbol};

/// Resource limits for [`buchberger`].
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub max_basis: usize,
    pub max_degree: u32,
    /// Branches explored when splitting a solution set into components.
    pub max_branches: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_basis: 500, max_degree: 12, max_branches: 64 }
    }
}

fn monic(p: &PolyExpr) -> PolyExpr {
    match p.leading() {
        Some((_, c)) if !c.is_one() => p.scale(&c.inverse().expect("nonzero leading coefficient")),
        _ => p.clone(),
    }
}

fn lm(p: &PolyExpr) -> &Monomial {
    p.leading().expect("nonzero polynomial").0
}

/// Full reduction of `p` modulo `basis`.
pub fn normal_form(p: &PolyExpr, basis: &[PolyExpr]) -> PolyExpr {
    let mut p = p.clone();
    let mut rem = PolyExpr::zero();
    while let Some((m, c)) = p.leading() {
        let (m, c) = (m.clone(), c.clone());
        match basis.iter().find(|g| lm(g).divides(&m)) {
            Some(g) => {
                let (gm, gc) = g.leading().unwrap();
                let q = gm.quotient_of(&m);
                let f = c.checked_div(gc).expect("nonzero leading coefficient");
                p = &p - &g.mul_term(&f, &q);
            }
            None => {
                rem.add_term(m.clone(), c.clone());
                p = &p - &PolyExpr::term(c, m);
            }
        }
    }
    rem
}

fn s_poly(f: &PolyExpr, g: &PolyExpr) -> PolyExpr {
    let (fm, fc) = f.leading().unwrap();
    let (gm, gc) = g.leading().unwrap();
    let l = fm.lcm(gm);
    let a = f.mul_term(&gc.clone(), &fm.quotient_of(&l));
    let b = g.mul_term(&fc.clone(), &gm.quotient_of(&l));
    &a - &b
}

/// Reduced Gröbner basis, monic and sorted by leading monomial.
///
/// Deterministic for a given input order. Returns `CapExceeded` when the
/// intermediate basis grows beyond `caps.max_basis` or an S-polynomial beyond
/// `caps.max_degree`.
pub fn buchberger(polys: &[PolyExpr], caps: Caps) -> Result<Vec<PolyExpr>> {
    let mut g: Vec<PolyExpr> = Vec::new();
    for p in polys {
        let r = normal_form(p, &g);
        if !r.is_zero() {
            g.push(monic(&r));
        }
    }
    // pending pairs, smallest lcm first (normal selection strategy)
    let mut queue: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
    let mut pending: Vec<Vec<bool>> = Vec::new();
    let add_pairs = |g: &[PolyExpr], queue: &mut BTreeSet<(Monomial, usize, usize)>, pending: &mut Vec<Vec<bool>>| {
        let n = g.len() - 1;
        for row in pending.iter_mut() {
            row.push(false);
        }
        pending.push(vec![false; n + 1]);
        for k in 0..n {
            queue.insert((lm(&g[k]).lcm(lm(&g[n])), k, n));
            pending[k][n] = true;
            pending[n][k] = true;
        }
    };
    let seeds = std::mem::take(&mut g);
    for p in seeds {
        g.push(p);
        add_pairs(&g, &mut queue, &mut pending);
    }
    while let Some((l, i, j)) = queue.pop_first() {
        pending[i][j] = false;
        pending[j][i] = false;
        let (mi, mj) = (lm(&g[i]), lm(&g[j]));
        if mi.gcd(mj).is_one() {
            continue;
        }
        if (0..g.len()).any(|k| k != i && k != j && !pending[i][k] && !pending[j][k] && lm(&g[k]).divides(&l)) {
            continue;
        }
        if l.degree() > caps.max_degree {
            return Err(Error::CapExceeded(format!("degree {} above {} with {} basis elements", l.degree(), caps.max_degree, g.len())));
        }
        let r = normal_form(&s_poly(&g[i], &g[j]), &g);
        if r.is_zero() {
            continue;
        }
        if g.len() >= caps.max_basis {
            return Err(Error::CapExceeded(format!("basis size above {}", caps.max_basis)));
        }
        let r = monic(&r);
        if r.total_degree() == 0 {
            return Ok(vec![PolyExpr::one()]);
        }
        g.push(r);
        add_pairs(&g, &mut queue, &mut pending);
    }
    Ok(reduce_basis(g))
}

/// Minimal and inter-reduced form of a Gröbner basis.
fn reduce_basis(g: Vec<PolyExpr>) -> Vec<PolyExpr> {
    let mut min: Vec<PolyExpr> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let redundant = g.iter().enumerate().any(|(j, q)| {
            j != i && lm(q).divides(lm(p)) && (lm(q) != lm(p) || j < i)
        });
        if !redundant {
            min.push(p.clone());
        }
    }
    let mut out = Vec::new();
    for i in 0..min.len() {
        let others: Vec<PolyExpr> = min.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        let (m, c) = min[i].leading().unwrap();
        let tail = &min[i] - &PolyExpr::term(c.clone(), m.clone());
        let mut r = normal_form(&tail, &others);
        r.add_term(m.clone(), c.clone());
        out.push(monic(&r));
    }
    out.sort_by(|a, b| lm(a).cmp(lm(b)));
    out
}

/// Whether `p` lies in the ideal with Gröbner basis `basis`.
pub fn contains(basis: &[PolyExpr], p: &PolyExpr) -> bool {
    normal_form(p, basis).is_zero()
}

/// Whether the basis generates the unit ideal.
pub fn is_unit(basis: &[PolyExpr]) -> bool {
    basis.iter().any(|p| p.total_degree() == 0 && !p.is_zero())
}

/// Krull dimension of the ideal: the largest set of unknowns containing no
/// leading monomial of the basis.
pub fn dimension(basis: &[PolyExpr], unknowns: &[Symbol]) -> Option<usize> {
    if is_unit(basis) {
        return None;
    }
    let n = unknowns.len();
    let leads: Vec<u64> = basis
        .iter()
        .map(|p| {
            lm(p).symbols().fold(0u64, |acc, s| acc | unknowns.iter().position(|u| u == s).map(|i| 1u64 << i).unwrap_or(0))
        })
        .collect();
    let mut best = 0;
    for mask in 0u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if size > best && leads.iter().all(|l| l & !mask != 0) {
            best = size;
        }
    }
    Some(best)
}

/// Whether every term has degree at most one.
pub fn is_linear(p: &PolyExpr) -> bool {
    p.terms().all(|(m, _)| m.degree() <= 1)
}

/// Two polynomials whose common zeros with the rest of the ideal cover the
/// zeros of `p`, when visible: `x` and `p / x^e` for a monomial content `x^e`,
/// or the two factors when a variable enters linearly and its coefficient
/// divides the rest. The second part is constant when `p = x^e`.
pub fn split_factor(p: &PolyExpr) -> Option<(PolyExpr, PolyExpr)> {
    let content = p.monomial_content();
    if let Some((s, e)) = content.pairs().first() {
        let x = PolyExpr::var(s.clone());
        let rest = p.div_monomial(&Monomial::from_pairs(vec![(s.clone(), *e)]));
        return Some((x, rest));
    }
    for s in p.symbols() {
        if p.degree_in(&s) != 1 {
            continue;
        }
        let coeffs = p.coefficients_in(&s);
        let (Some(lin), Some(rest)) = (coeffs.get(&1), coeffs.get(&0)) else { continue };
        if lin.total_degree() == 0 {
            continue;
        }
        if let Some(m) = rest.exact_div(lin) {
            let other = &PolyExpr::var(s.clone()) + &m;
            return Some((lin.clone(), other));
        }
    }
    None
}
