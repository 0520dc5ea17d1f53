use std::time::Instant;

use super::*;
use crate::structures::{semidirect, vec_add, vec_sub, ModuleData};

fn label(alg: &SuperAlgebra, base: &str, which: usize) -> String {
    match alg.kind {
        Kind::LDendriform => format!("{}[{}]", base, if which == 0 { "right" } else { "left" }),
        _ => base.to_string(),
    }
}

/// `R(x) R(y) - R(R(x) y + x R(y) + λ x y)` for basis elements, in product table `which`.
///
/// For Lie brackets this is the Lie form of the identity, since
/// `[x, R(y)] = -(-1)^{|x||y|} [R(y), x]`.
pub fn rb_residual(alg: &SuperAlgebra, which: usize, r: &LinearMap, lambda: &Scalar, i: usize, j: usize) -> Vector {
    let t = &alg.tables[which];
    let (ei, ej) = (alg.unit(i), alg.unit(j));
    let (ri, rj) = (r.column(i), r.column(j));
    let lhs = t.apply(&ri, &rj);
    let mut inner = vec_add(&t.apply(&ri, &ej), &t.apply(&ei, &rj));
    if !lambda.is_zero() {
        let l = RatExpr::constant(lambda.clone());
        inner = vec_add(&inner, &crate::structures::vec_scale(t.column(i, j), &l));
    }
    vec_sub(&lhs, &r.apply(&inner))
}

/// The Rota-Baxter identity of weight `λ` on the pairs accepted by `keep`, for every product table.
pub fn check_rb_tables(
    alg: &SuperAlgebra,
    r: &LinearMap,
    lambda: &Scalar,
    base: &str,
    keep: impl Fn(usize, usize) -> Option<String>,
) -> CheckReport {
    let start = Instant::now();
    let mut rep = ReportBuilder::new();
    let n = alg.dim();
    for which in 0..alg.tables.len() {
        for i in 0..n {
            for j in 0..n {
                let Some(tag) = keep(i, j) else { continue };
                rep.count();
                let res = rb_residual(alg, which, r, lambda, i, j);
                if !vec_is_zero(&res) {
                    rep.fail(format!("{}{}", label(alg, base, which), tag), vec![i + 1, j + 1], alg.render(&res));
                }
            }
        }
    }
    rep.finish(start.elapsed())
}

fn check_shape(map: &LinearMap, dom: usize, cod: usize, what: &str) -> Result<()> {
    if map.cols() != dom || map.rows() != cod {
        return Err(Error::DimensionMismatch(format!(
            "{} is {}x{}, expected {}x{}",
            what,
            map.rows(),
            map.cols(),
            cod,
            dom
        )));
    }
    Ok(())
}

/// Rota-Baxter identity of weight `λ` on all basis pairs (both products for L-dendriform).
pub fn check_rb(alg: &SuperAlgebra, r: &EvenMap, lambda: &Scalar) -> Result<CheckReport> {
    check_shape(r, alg.dim(), alg.dim(), "operator")?;
    let even = r.check_even();
    if !even.passed() {
        return Ok(even);
    }
    Ok(check_rb_tables(alg, r, lambda, "rb", |_, _| Some(String::new())))
}

/// `T(u) T(v) = T(T(u) v + u T(v) + λ u v)` for `u, v` in the module, with the
/// mixed products given by the actions.
pub fn check_o_operator(alg: &SuperAlgebra, module: &ModuleData, t: &EvenMap, lambda: &Scalar) -> Result<CheckReport> {
    if !lambda.is_zero() && module.internal.is_none() {
        return Err(Error::MissingInternalProduct);
    }
    check_shape(t, module.dim(), alg.dim(), "O-operator")?;
    let even = t.check_even();
    if !even.passed() {
        return Ok(even);
    }
    let sd = semidirect(alg, module)?;
    let n = alg.dim();
    let that = t.lift_into_sum(&alg.basis, &sd_module_basis(&sd, n));
    let mut rep = check_rb_tables(&sd, &that, lambda, "o-operator", |i, j| (i >= n && j >= n).then(String::new));
    shift_module_indices(&mut rep, n);
    Ok(rep)
}

fn sd_module_basis(sd: &SuperAlgebra, n: usize) -> GradedBasis {
    let names = sd.basis.names()[n..].to_vec();
    let par = sd.basis.parities()[n..].to_vec();
    GradedBasis::new(names, par).expect("module basis")
}

/// Witness indices on module-only tuples are reported in module numbering.
fn shift_module_indices(rep: &mut CheckReport, n: usize) {
    for w in &mut rep.witnesses {
        if w.indices.iter().all(|&i| i > n) {
            for i in &mut w.indices {
                *i -= n;
            }
        }
    }
}

/// Extended O-operator `(T, T')` of weight `λ` on an associative bimodule:
/// `λ (T'(u) v - u T'(v)) = 0` and `T(u) T(v) = T(T(u) v + u T(v)) + λ T'(u) T'(v)`,
/// where `u x = (-1)^{|u||x|} r(x) u`.
pub fn check_extended_o_operator(
    alg: &SuperAlgebra,
    module: &ModuleData,
    t: &EvenMap,
    t_mod: &EvenMap,
    lambda: &Scalar,
) -> Result<CheckReport> {
    if alg.kind != Kind::Associative {
        return Err(Error::KindMismatch("extended O-operators are defined for associative superalgebras".into()));
    }
    check_shape(t, module.dim(), alg.dim(), "T")?;
    check_shape(t_mod, module.dim(), alg.dim(), "T'")?;
    for m in [t, t_mod] {
        let even = m.check_even();
        if !even.passed() {
            return Ok(even);
        }
    }
    let start = Instant::now();
    let sd = semidirect(alg, &module.clone().without_product())?;
    let n = alg.dim();
    let m = module.dim();
    let vb = sd_module_basis(&sd, n);
    let that = t.lift_into_sum(&alg.basis, &vb);
    let tmod = t_mod.lift_into_sum(&alg.basis, &vb);
    let table = sd.table();
    let l = RatExpr::constant(lambda.clone());
    let mut rep = ReportBuilder::new();
    for a in 0..m {
        for b in 0..m {
            let (u, v) = (sd.unit(n + a), sd.unit(n + b));
            rep.count();
            if !lambda.is_zero() {
                let bal = vec_sub(&table.apply(&tmod.apply(&u), &v), &table.apply(&u, &tmod.apply(&v)));
                let bal = crate::structures::vec_scale(&bal, &l);
                if !vec_is_zero(&bal) {
                    rep.fail("extended-balance", vec![a + 1, b + 1], sd.render(&bal));
                }
            }
            rep.count();
            let (tu, tv) = (that.apply(&u), that.apply(&v));
            let lhs = table.apply(&tu, &tv);
            let inner = vec_add(&table.apply(&tu, &v), &table.apply(&u, &tv));
            let mut rhs = that.apply(&inner);
            if !lambda.is_zero() {
                let corr = table.apply(&tmod.apply(&u), &tmod.apply(&v));
                rhs = vec_add(&rhs, &crate::structures::vec_scale(&corr, &l));
            }
            let res = vec_sub(&lhs, &rhs);
            if !vec_is_zero(&res) {
                rep.fail("extended-o-operator", vec![a + 1, b + 1], sd.render(&res));
            }
        }
    }
    Ok(rep.finish(start.elapsed()))
}

/// Rota-Baxter operator `R_V` on a module relative to a weight-zero operator `R`:
/// the weight-zero identity for `R ⊕ R_V` on pairs with exactly one module entry.
pub fn check_rb_on_module(alg: &SuperAlgebra, r: &EvenMap, module: &ModuleData, r_v: &EvenMap) -> Result<CheckReport> {
    if module.kind != alg.kind {
        return Err(Error::KindMismatch(format!("module is {}, algebra is {}", module.kind, alg.kind)));
    }
    check_shape(r_v, module.dim(), module.dim(), "module operator")?;
    let base = check_rb(alg, r, &Scalar::zero())?;
    if !base.passed() {
        return Ok(base);
    }
    let even = r_v.check_even();
    if !even.passed() {
        return Ok(even);
    }
    let sd = semidirect(alg, &module.clone().without_product())?;
    let n = alg.dim();
    let mut rv = r_v.clone();
    rv.dom = sd_module_basis(&sd, n);
    rv.cod = rv.dom.clone();
    let rhat = r.direct_sum(&rv);
    Ok(check_rb_tables(&sd, &rhat, &Scalar::zero(), "rb-module", |i, j| match (i >= n, j >= n) {
        (false, true) => Some("[AV]".into()),
        (true, false) => Some("[VA]".into()),
        _ => None,
    }))
}

/// `f(x y) = f(x) f(y)'` on all basis pairs and `f ∘ R = R' ∘ f`.
pub fn check_rb_morphism(
    f: &LinearMap,
    src: (&SuperAlgebra, &EvenMap),
    dst: (&SuperAlgebra, &EvenMap),
) -> Result<CheckReport> {
    let (a, r) = src;
    let (b, r2) = dst;
    if a.kind != b.kind {
        return Err(Error::KindMismatch(format!("{} vs {}", a.kind, b.kind)));
    }
    check_shape(f, a.dim(), b.dim(), "morphism")?;
    check_shape(r, a.dim(), a.dim(), "source operator")?;
    check_shape(r2, b.dim(), b.dim(), "target operator")?;
    let start = Instant::now();
    let mut rep = ReportBuilder::new();
    for which in 0..a.tables.len() {
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                rep.count();
                let lhs = f.apply(a.tables[which].column(i, j));
                let rhs = b.tables[which].apply(&f.column(i), &f.column(j));
                let res = vec_sub(&lhs, &rhs);
                if !vec_is_zero(&res) {
                    rep.fail(label(a, "homomorphism", which), vec![i + 1, j + 1], b.render(&res));
                }
            }
        }
    }
    let d = f.compose(r)?.sub(&r2.compose(f)?)?;
    for i in 0..a.dim() {
        rep.count();
        let col = d.column(i);
        if !vec_is_zero(&col) {
            rep.fail("commutes", vec![i + 1], b.render(&col));
        }
    }
    Ok(rep.finish(start.elapsed()))
}

/// Dispatch on the family's role. Families needing a module take it from `module`
/// (the regular module when `None`).
pub fn verify_family(alg: &SuperAlgebra, fam: &OperatorFamily, module: Option<&ModuleData>) -> Result<CheckReport> {
    let regular;
    let module = match module {
        Some(m) => m,
        None => {
            regular = ModuleData::regular(alg);
            &regular
        }
    };
    match fam.role {
        Role::RotaBaxter => check_rb(alg, &fam.map, &fam.weight),
        Role::OOperator => check_o_operator(alg, module, &fam.map, &fam.weight),
        Role::ExtendedOOperator => {
            let t_mod = fam
                .modification
                .as_ref()
                .ok_or_else(|| Error::Input("extended O-operator without modification".into()))?;
            check_extended_o_operator(alg, module, &fam.map, t_mod, &fam.weight)
        }
        Role::ModuleRb => {
            let r_v = fam.module_map.as_ref().ok_or_else(|| Error::Input("module Rota-Baxter operator without R_V".into()))?;
            check_rb_on_module(alg, &fam.map, module, r_v)
        }
        Role::Morphism => Err(Error::Input("morphism checks need a source and a target operator".into())),
    }
}
