//! Weight-0 Rota-Baxter operators as solutions of a quadratic system in the
//! entries of an unknown even map.

mod groebner;
mod newton;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{eval_numeric, FieldSpec, PolyExpr, RatExpr, Sampler, Scalar, Symbol};
use crate::operators::{check_rb, rb_residual, EvenMap, LinearMap, OperatorFamily, Role};
use crate::structures::{GradedBasis, SuperAlgebra};

pub use groebner::{buchberger, contains, dimension, is_linear, is_unit, normal_form, split_factor, Caps};
pub use newton::{numeric_solve, NewtonOptions};

/// Deviation and constraint tolerance used when matching points to families.
pub const MATCH_TOL: f64 = 1e-6;

/// The coefficientwise RB identity in the unknown entries `r1..rq` of an even map.
#[derive(Clone, Debug)]
pub struct PolySystem {
    pub unknowns: Vec<Symbol>,
    /// Matrix cell `(row, column)` of each unknown.
    pub cells: Vec<(usize, usize)>,
    pub equations: Vec<PolyExpr>,
    pub basis: GradedBasis,
    pub field: Arc<FieldSpec>,
}

/// Even-block cells first, then odd-block cells, each block row-major.
pub fn unknown_layout(basis: &GradedBasis) -> Vec<(usize, usize)> {
    let mut cells = Vec::new();
    for parity in [0u8, 1] {
        let idx: Vec<usize> = (0..basis.dim()).filter(|&i| basis.parity(i) == parity).collect();
        for &k in &idx {
            for &i in &idx {
                cells.push((k, i));
            }
        }
    }
    cells
}

fn as_polynomial(e: &RatExpr) -> Option<PolyExpr> {
    let den = e.den().as_constant()?;
    Some(e.num().scale(&den.inverse().ok()?))
}

fn monic(p: &PolyExpr) -> PolyExpr {
    match p.leading() {
        Some((_, c)) if !c.is_one() => p.scale(&c.inverse().expect("nonzero")),
        _ => p.clone(),
    }
}

/// Assemble the weight-0 system, one equation per residual coefficient.
///
/// Identical equations (up to scaling) are kept once and zero equations dropped.
pub fn assemble_rb_system(alg: &SuperAlgebra) -> Result<PolySystem> {
    if !alg.parameters.is_empty() {
        return Err(Error::UnpinnedParameters(alg.parameters.iter().map(|s| s.name().to_string()).collect()));
    }
    let cells = unknown_layout(&alg.basis);
    let unknowns: Vec<Symbol> = (1..=cells.len()).map(|q| Symbol::new(&format!("r{}", q))).collect();
    let mut sys = PolySystem { unknowns, cells, equations: Vec::new(), basis: alg.basis.clone(), field: alg.field.clone() };
    let r = sys.generic_map();
    let mut seen = BTreeSet::new();
    let n = alg.dim();
    for which in 0..alg.tables.len() {
        for i in 0..n {
            for j in 0..n {
                for e in rb_residual(alg, which, &r, &Scalar::zero(), i, j) {
                    if e.is_zero() {
                        continue;
                    }
                    let p = as_polynomial(&e).ok_or_else(|| {
                        Error::UnpinnedParameters(e.symbols().iter().map(|s| s.name().to_string()).collect())
                    })?;
                    if let Some(s) = p.symbols().into_iter().find(|s| !sys.unknowns.contains(s)) {
                        return Err(Error::UnpinnedParameters(vec![s.name().to_string()]));
                    }
                    let m = monic(&p);
                    if seen.insert(m.to_string()) {
                        sys.equations.push(m);
                    }
                }
            }
        }
    }
    Ok(sys)
}

impl PolySystem {
    /// The even map whose free entries are the unknowns.
    pub fn generic_map(&self) -> EvenMap {
        let mut m = LinearMap::zero(&self.basis, &self.basis);
        for (s, &(k, i)) in self.unknowns.iter().zip(&self.cells) {
            m.set(k, i, RatExpr::var(s.name()));
        }
        m
    }

    /// The map with each unknown replaced by the given expression.
    pub fn map_with(&self, values: &[RatExpr]) -> EvenMap {
        let mut m = LinearMap::zero(&self.basis, &self.basis);
        for (v, &(k, i)) in values.iter().zip(&self.cells) {
            m.set(k, i, v.clone());
        }
        m
    }

    /// Full matrix of a numeric point, zero outside the even blocks.
    pub fn numeric_matrix(&self, point: &[Complex64]) -> Vec<Vec<Complex64>> {
        let n = self.basis.dim();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for (v, &(k, i)) in point.iter().zip(&self.cells) {
            m[k][i] = *v;
        }
        m
    }
}

/// A piece of the solution variety.
#[derive(Clone, Debug, Serialize)]
pub struct Component {
    /// Reduced Gröbner basis of the component's ideal, as text.
    pub basis: Vec<String>,
    pub dimension: usize,
    /// Unknowns left free by a linear component.
    pub free: Vec<String>,
    /// Entry of each unknown in terms of the free ones, for linear components.
    pub parametrization: Option<Vec<String>>,
    /// Whether the parametrized map passed the exact RB check.
    pub verified: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Description {
    /// Finitely many exact points.
    Points,
    /// Positive-dimensional, given by a Gröbner basis and components.
    Variety,
    /// Numeric samples only.
    Samples,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolutionSet {
    pub description: Description,
    pub unknowns: Vec<String>,
    #[serde(serialize_with = "ser_points")]
    pub points: Vec<Vec<Scalar>>,
    pub basis: Vec<String>,
    pub dimension: Option<usize>,
    pub components: Vec<Component>,
    /// False when splitting into components hit the branch cap.
    pub decomposed: bool,
    #[serde(serialize_with = "ser_samples")]
    pub samples: Vec<Vec<Complex64>>,
    /// Set when the system is empty and samples are arbitrary points.
    pub unconstrained: bool,
}

fn ser_points<S: serde::Serializer>(p: &[Vec<Scalar>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<String>> = p.iter().map(|pt| pt.iter().map(|c| c.to_string()).collect()).collect();
    serde::Serialize::serialize(&v, s)
}

fn ser_samples<S: serde::Serializer>(p: &[Vec<Complex64>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<[f64; 2]>> = p.iter().map(|pt| pt.iter().map(|c| [c.re, c.im]).collect()).collect();
    serde::Serialize::serialize(&v, s)
}

/// Split the variety along visible factors of basis elements into
/// components, each returned as a reduced Gröbner basis.
fn decompose(
    basis: Vec<PolyExpr>,
    caps: Caps,
    seen: &mut HashSet<Vec<String>>,
    out: &mut Vec<Vec<PolyExpr>>,
) -> Result<()> {
    if is_unit(&basis) || !seen.insert(basis.iter().map(|p| p.to_string()).collect()) {
        return Ok(());
    }
    // already inside a component found earlier
    if out.iter().any(|c| c.iter().all(|g| contains(&basis, g))) {
        return Ok(());
    }
    if seen.len() > caps.max_branches {
        return Err(Error::CapExceeded(format!("more than {} branches while splitting components", caps.max_branches)));
    }
    let extend = |f: &PolyExpr| -> Result<Vec<PolyExpr>> {
        let mut gens = basis.clone();
        gens.push(f.clone());
        buchberger(&gens, caps)
    };
    for p in &basis {
        let Some((a, b)) = split_factor(p) else { continue };
        let ga = extend(&a)?;
        if b.total_degree() == 0 {
            // p is a power of a
            if ga != basis {
                return decompose(ga, caps, seen, out);
            }
            continue;
        }
        let gb = extend(&b)?;
        if ga == basis || gb == basis {
            continue;
        }
        decompose(ga, caps, seen, out)?;
        decompose(gb, caps, seen, out)?;
        return Ok(());
    }
    out.push(basis);
    Ok(())
}

/// Drop components contained in another one.
fn prune(mut comps: Vec<Vec<PolyExpr>>) -> Vec<Vec<PolyExpr>> {
    let mut i = 0;
    while i < comps.len() {
        // V(I_i) is inside V(I_j) when I_j is inside I_i
        let inside = (0..comps.len()).any(|j| {
            j != i && comps[j].iter().all(|g| contains(&comps[i], g)) && {
                let equal = comps[i].iter().all(|g| contains(&comps[j], g));
                !equal || j < i
            }
        });
        if inside {
            comps.remove(i);
        } else {
            i += 1;
        }
    }
    comps
}

/// Exact parametrization of a linear component: each leading unknown equals
/// minus the tail of its basis element; the rest are free.
fn parametrize(sys: &PolySystem, basis: &[PolyExpr]) -> (Vec<Symbol>, Vec<RatExpr>) {
    let mut values: Vec<RatExpr> = sys.unknowns.iter().map(|s| RatExpr::var(s.name())).collect();
    let mut leads = BTreeSet::new();
    for g in basis {
        let (m, c) = g.leading().expect("nonzero");
        let s = m.pairs()[0].0.clone();
        let tail = &PolyExpr::term(c.clone(), m.clone()) - g;
        let pos = sys.unknowns.iter().position(|u| *u == s).expect("unknown");
        values[pos] = RatExpr::from_poly(tail);
        leads.insert(s);
    }
    let free = sys.unknowns.iter().filter(|s| !leads.contains(*s)).cloned().collect();
    (free, values)
}

/// Exact solution set with numeric samples for positive-dimensional pieces.
pub fn solve_system(sys: &PolySystem, alg: &SuperAlgebra, caps: Caps, seed: u64) -> Result<SolutionSet> {
    let basis = buchberger(&sys.equations, caps)?;
    let dim = dimension(&basis, &sys.unknowns);
    // splitting is best effort: past the branch cap only the basis is reported
    let mut pieces = Vec::new();
    let decomposed = match decompose(basis.clone(), caps, &mut HashSet::new(), &mut pieces) {
        Ok(()) => true,
        Err(Error::CapExceeded(_)) => false,
        Err(e) => return Err(e),
    };
    let pieces = if decomposed { prune(pieces) } else { Vec::new() };
    let mut sampler = Sampler::new(seed);
    let root = sys.field.embedding_root();
    let mut components = Vec::new();
    let mut points = Vec::new();
    let mut samples = Vec::new();
    let mut all_exact = decomposed;
    for piece in &pieces {
        let pdim = dimension(piece, &sys.unknowns).unwrap_or(0);
        let mut comp = Component {
            basis: piece.iter().map(|p| p.to_string()).collect(),
            dimension: pdim,
            free: Vec::new(),
            parametrization: None,
            verified: None,
        };
        if piece.iter().all(is_linear) {
            let (free, values) = parametrize(sys, piece);
            let map = sys.map_with(&values);
            let ok = check_rb(alg, &map, &Scalar::zero())?.passed();
            if !ok {
                return Err(Error::Internal(format!("component {:?} fails the exact check", comp.basis)));
            }
            comp.verified = Some(ok);
            comp.free = free.iter().map(|s| s.name().to_string()).collect();
            comp.parametrization = Some(values.iter().map(|v| v.to_string()).collect());
            if free.is_empty() {
                let pt: Vec<Scalar> = values.iter().map(|v| v.as_constant().expect("constant")).collect();
                points.push(pt);
            } else {
                let set: BTreeSet<Symbol> = free.iter().cloned().collect();
                for _ in 0..3 {
                    let at = crate::exactmath::numeric::to_complex_point(&sampler.point(&set));
                    let v: Result<Vec<Complex64>> = values.iter().map(|e| eval_numeric(e, &at, root)).collect();
                    samples.push(v?);
                }
            }
        } else {
            all_exact = false;
        }
        components.push(comp);
    }
    if !all_exact {
        let opts = NewtonOptions { restarts: 20, seed, ..NewtonOptions::default() };
        samples.extend(numeric_solve(sys, &opts).samples);
    }
    let description = if all_exact && dim == Some(0) { Description::Points } else { Description::Variety };
    if description != Description::Points {
        points.clear();
    }
    Ok(SolutionSet {
        description,
        unknowns: sys.unknowns.iter().map(|s| s.name().to_string()).collect(),
        points,
        basis: basis.iter().map(|p| p.to_string()).collect(),
        dimension: dim,
        components,
        decomposed,
        samples,
        unconstrained: sys.equations.is_empty(),
    })
}

/// Outcome of matching a point to a family.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyMatch {
    pub family: String,
    #[serde(serialize_with = "ser_params")]
    pub parameters: Vec<(Symbol, Complex64)>,
    /// Largest entrywise deviation between the point and the family matrix.
    pub deviation: f64,
}

fn ser_params<S: serde::Serializer>(p: &[(Symbol, Complex64)], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<(String, [f64; 2])> = p.iter().map(|(k, c)| (k.name().to_string(), [c.re, c.im])).collect();
    serde::Serialize::serialize(&v, s)
}

/// Substitute structure-parameter pins into a family.
pub fn pin_family(fam: &OperatorFamily, pins: &HashMap<Symbol, RatExpr>) -> Result<OperatorFamily> {
    let mut out = fam.clone();
    out.map = fam.map.substitute(pins)?;
    out.constraints = fam.constraints.iter().map(|c| c.substitute(pins)).collect::<Result<_>>()?;
    out.parameters.retain(|p| !pins.contains_key(p));
    out.pivots.retain(|(p, _)| !pins.contains_key(p));
    Ok(out)
}

fn deviation(fam: &OperatorFamily, target: &[Vec<Complex64>], at: &HashMap<Symbol, Complex64>, root: Complex64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (k, row) in target.iter().enumerate() {
        for (i, t) in row.iter().enumerate() {
            let v = eval_numeric(fam.map.get(k, i), at, root)?;
            worst = worst.max((v - t).norm());
        }
    }
    Ok(worst)
}

/// Fit parameters without a pivot cell by Gauss-Newton on the entry deviations.
fn fit_uncovered(
    fam: &OperatorFamily,
    target: &[Vec<Complex64>],
    at: &mut HashMap<Symbol, Complex64>,
    free: &[Symbol],
    root: Complex64,
) {
    use nalgebra::{DMatrix, DVector};
    let cells: Vec<(usize, usize)> =
        (0..target.len()).flat_map(|k| (0..target.len()).map(move |i| (k, i))).collect();
    let resid = |at: &HashMap<Symbol, Complex64>| -> Option<DVector<Complex64>> {
        let v: Result<Vec<Complex64>> =
            cells.iter().map(|&(k, i)| eval_numeric(fam.map.get(k, i), at, root).map(|x| x - target[k][i])).collect();
        v.ok().map(DVector::from_vec)
    };
    let mut best: Option<(f64, HashMap<Symbol, Complex64>)> = None;
    for start in [1.0, -1.0, 0.5, 2.0, 0.0] {
        let mut cur = at.clone();
        for s in free {
            cur.insert(s.clone(), Complex64::new(start, 0.0));
        }
        for _ in 0..100 {
            let Some(f) = resid(&cur) else { break };
            if f.norm() < 1e-14 {
                break;
            }
            let h = 1e-7;
            let mut jac = DMatrix::zeros(cells.len(), free.len());
            for (c, s) in free.iter().enumerate() {
                let mut shifted = cur.clone();
                *shifted.get_mut(s).unwrap() += h;
                let Some(g) = resid(&shifted) else { break };
                jac.set_column(c, &((g - &f) / Complex64::new(h, 0.0)));
            }
            let Ok(pinv) = jac.pseudo_inverse(1e-12) else { break };
            let step = pinv * &f;
            for (c, s) in free.iter().enumerate() {
                *cur.get_mut(s).unwrap() -= step[c];
            }
            if step.norm() < 1e-15 {
                break;
            }
        }
        if let Ok(d) = deviation(fam, target, &cur, root) {
            if best.as_ref().map_or(true, |(b, _)| d < *b) {
                best = Some((d, cur));
            }
        }
    }
    if let Some((_, cur)) = best {
        *at = cur;
    }
}

/// Read the family parameters off the pivot cells of a numeric point and
/// compare the family matrix with the point.
///
/// `fam` must be a weight-0 RB family with structure parameters pinned.
pub fn match_family(sys: &PolySystem, point: &[Complex64], fam: &OperatorFamily) -> Result<FamilyMatch> {
    if fam.role != Role::RotaBaxter || !fam.weight.is_zero() {
        return Err(Error::Input(format!("family `{}` is not a weight-0 Rota-Baxter family", fam.id)));
    }
    if fam.map.rows() != sys.basis.dim() || fam.map.cols() != sys.basis.dim() {
        return Err(Error::DimensionMismatch(format!("family `{}` has the wrong size", fam.id)));
    }
    let root = sys.field.embedding_root();
    let target = sys.numeric_matrix(point);
    let mut at: HashMap<Symbol, Complex64> = HashMap::new();
    for (p, (k, i)) in &fam.pivots {
        let entry = fam.map.get(*k, *i).as_poly().ok_or(Error::NoMatch)?;
        let scale = entry.coefficients_in(p).get(&1).cloned().ok_or(Error::NoMatch)?;
        let s = eval_numeric(&RatExpr::from_poly(scale), &HashMap::new(), root)?;
        if s.norm() < MATCH_TOL {
            return Err(Error::NoMatch);
        }
        at.insert(p.clone(), target[*k][*i] / s);
    }
    let free: Vec<Symbol> = fam.parameters.iter().filter(|p| !at.contains_key(*p)).cloned().collect();
    if !free.is_empty() {
        for s in &free {
            at.insert(s.clone(), Complex64::new(1.0, 0.0));
        }
        fit_uncovered(fam, &target, &mut at, &free, root);
    }
    let dev = match deviation(fam, &target, &at, root) {
        Ok(d) => d,
        Err(Error::NearZeroDenominator(_)) => return Err(Error::NoMatch),
        Err(e) => return Err(e),
    };
    if !(dev < MATCH_TOL) {
        return Err(Error::NoMatch);
    }
    for c in &fam.constraints {
        let v = match eval_numeric(c, &at, root) {
            Ok(v) => v,
            Err(Error::NearZeroDenominator(_)) => return Err(Error::ConstraintViolated(c.to_string())),
            Err(e) => return Err(e),
        };
        if v.norm() <= MATCH_TOL {
            return Err(Error::ConstraintViolated(c.to_string()));
        }
    }
    let mut parameters: Vec<(Symbol, Complex64)> = at.into_iter().collect();
    parameters.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(FamilyMatch { family: fam.id.clone(), parameters, deviation: dev })
}

/// Every family of the list reproducing the point.
pub fn matching_families(sys: &PolySystem, point: &[Complex64], families: &[OperatorFamily]) -> Result<Vec<FamilyMatch>> {
    let mut out = Vec::new();
    for fam in families {
        match match_family(sys, point, fam) {
            Ok(m) => out.push(m),
            Err(Error::NoMatch) | Err(Error::ConstraintViolated(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog_get;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn abelian_system_is_empty() {
        let e = catalog_get("B_3_1").unwrap();
        let sys = assemble_rb_system(e.algebra()).unwrap();
        assert_eq!(sys.unknowns.len(), 2);
        assert!(sys.equations.is_empty());
        let e = catalog_get("A_hat_4_1").unwrap();
        let sys = assemble_rb_system(e.algebra()).unwrap();
        assert_eq!(sys.unknowns.len(), 5);
        assert!(sys.equations.is_empty());
        let sol = solve_system(&sys, e.algebra(), Caps::default(), 0).unwrap();
        assert_eq!(sol.dimension, Some(5));
        assert!(sol.unconstrained);
    }

    #[test]
    fn unpinned_parameters_are_refused() {
        let e = catalog_get("B_1_3").unwrap();
        if !e.algebra().parameters.is_empty() {
            assert!(matches!(assemble_rb_system(e.algebra()), Err(Error::UnpinnedParameters(_))));
        }
    }

    #[test]
    fn b21_has_two_lines() {
        let e = catalog_get("B_2_1").unwrap();
        let sys = assemble_rb_system(e.algebra()).unwrap();
        assert_eq!(sys.equations.len(), 1);
        let sol = solve_system(&sys, e.algebra(), Caps::default(), 0).unwrap();
        assert_eq!(sol.description, Description::Variety);
        assert_eq!(sol.dimension, Some(1));
        let mut bases: Vec<Vec<String>> = sol.components.iter().map(|c| c.basis.clone()).collect();
        bases.sort();
        assert_eq!(bases.len(), 2);
        assert!(bases.contains(&vec!["r2".to_string()]));
        assert!(sol.components.iter().all(|c| c.verified == Some(true)));
    }

    #[test]
    fn only_zero_operator() {
        for id in ["B_3_3", "B_2_2"] {
            let e = catalog_get(id).unwrap();
            let sys = assemble_rb_system(e.algebra()).unwrap();
            let sol = solve_system(&sys, e.algebra(), Caps::default(), 0).unwrap();
            assert_eq!(sol.description, Description::Points, "{}", id);
            assert_eq!(sol.points.len(), 1);
            assert!(sol.points[0].iter().all(|s| s.is_zero()));
        }
    }

    #[test]
    fn matching_b21_points() {
        let e = catalog_get("B_2_1").unwrap();
        let sys = assemble_rb_system(e.algebra()).unwrap();
        let r2 = e.families.iter().find(|f| f.id == "R2").unwrap();
        let m = match_family(&sys, &[c(3.0), c(6.0)], r2).unwrap();
        assert!((m.parameters[0].1 - c(3.0)).norm() < 1e-12);
        assert!(matching_families(&sys, &[c(3.0), c(5.0)], &e.families).unwrap().is_empty());
        for f in &e.families {
            assert!(matches!(match_family(&sys, &[c(3.0), c(5.0)], f), Err(Error::NoMatch)));
        }
    }

    #[test]
    fn origin_matches_zero_family() {
        let e = catalog_get("B_3_3").unwrap();
        let sys = assemble_rb_system(e.algebra()).unwrap();
        let found = matching_families(&sys, &[c(0.0), c(0.0)], &e.families).unwrap();
        assert!(!found.is_empty());
    }
}
