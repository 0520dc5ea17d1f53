use std::time::Instant;

use super::*;

/// Which basis triples an identity is evaluated on. For the semidirect algebra
/// `A + V` the first `split` indices span `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slots {
    All,
    /// Triples with at least `min` and at most `max` entries from `V`.
    Module { split: usize, min: usize, max: usize },
}

impl Slots {
    fn pattern(self, idx: &[usize]) -> Option<String> {
        match self {
            Slots::All => Some(String::new()),
            Slots::Module { split, min, max } => {
                let count = idx.iter().filter(|&&i| i >= split).count();
                if count < min || count > max {
                    return None;
                }
                let p: String = idx.iter().map(|&i| if i >= split { 'V' } else { 'A' }).collect();
                Some(format!("[{}]", p))
            }
        }
    }
}

/// Grading consistency of every table, and super skew-symmetry for Lie brackets.
pub fn validate(alg: &SuperAlgebra) -> CheckReport {
    let start = Instant::now();
    let mut rep = ReportBuilder::new();
    let n = alg.dim();
    for (t, table) in alg.tables.iter().enumerate() {
        let label = if alg.tables.len() > 1 { format!("grading[{}]", table_name(alg.kind, t)) } else { "grading".into() };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    rep.count();
                    let c = table.get(i, j, k);
                    if (alg.parity(i) + alg.parity(j) + alg.parity(k)) % 2 != 0 && !c.is_zero() {
                        rep.fail(label.clone(), vec![i + 1, j + 1, k + 1], format!("{} {}", c, alg.basis.names()[k]));
                    }
                }
            }
        }
    }
    if alg.kind == Kind::Lie {
        let t = alg.table();
        for i in 0..n {
            for j in i..n {
                rep.count();
                let s = sign(alg.parity(i), alg.parity(j));
                let r = vec_add(t.column(i, j), &vec_signed(t.column(j, i), s));
                if !vec_is_zero(&r) {
                    rep.fail("skew-symmetry", vec![i + 1, j + 1], alg.render(&r));
                }
            }
        }
    }
    rep.finish(start.elapsed())
}

fn table_name(kind: Kind, t: usize) -> &'static str {
    match (kind, t) {
        (Kind::LDendriform, 0) => "right",
        (Kind::LDendriform, _) => "left",
        _ => "product",
    }
}

/// `(x y) z - x (y z)` for basis elements.
pub fn associator(alg: &SuperAlgebra, which: usize, i: usize, j: usize, k: usize) -> Vector {
    let t = &alg.tables[which];
    let ek = alg.unit(k);
    let ei = alg.unit(i);
    let left = t.apply(t.column(i, j), &ek);
    let right = t.apply(&ei, t.column(j, k));
    vec_sub(&left, &right)
}

/// Identity labels checked for a given algebra.
fn identities(alg: &SuperAlgebra) -> Vec<&'static str> {
    match alg.kind {
        Kind::Associative if alg.lie_admissible_only => vec!["lie-admissible"],
        Kind::Associative => vec!["associativity"],
        Kind::Lie => vec!["super-jacobi"],
        Kind::PreLie if alg.also_associative => vec!["pre-lie", "associativity"],
        Kind::PreLie => vec!["pre-lie"],
        Kind::LDendriform => vec!["ldend1", "ldend2"],
    }
}

/// Residual of a named identity on basis elements `(i, j, k)`.
pub fn identity_residual(alg: &SuperAlgebra, identity: &str, i: usize, j: usize, k: usize) -> Vector {
    let (pi, pj, pk) = (alg.parity(i), alg.parity(j), alg.parity(k));
    let (ei, ej, ek) = (alg.unit(i), alg.unit(j), alg.unit(k));
    let sxy = sign(pi, pj);
    match identity {
        "associativity" => associator(alg, 0, i, j, k),
        "pre-lie" => vec_sub(&associator(alg, 0, i, j, k), &vec_signed(&associator(alg, 0, j, i, k), sxy)),
        "super-jacobi" => {
            // [x,[y,z]] - [[x,y],z] - (-1)^{xy} [y,[x,z]]
            let t = alg.table();
            let a = t.apply(&ei, t.column(j, k));
            let b = t.apply(t.column(i, j), &ek);
            let c = t.apply(&ej, t.column(i, k));
            vec_sub(&vec_sub(&a, &b), &vec_signed(&c, sxy))
        }
        "lie-admissible" => {
            let t = alg.table();
            let br = |x: &[RatExpr], y: &[RatExpr], px: u8, py: u8| vec_sub(&t.apply(x, y), &vec_signed(&t.apply(y, x), sign(px, py)));
            let a = br(&ei, &br(&ej, &ek, pj, pk), pi, (pj + pk) % 2);
            let b = br(&br(&ei, &ej, pi, pj), &ek, (pi + pj) % 2, pk);
            let c = br(&ej, &br(&ei, &ek, pi, pk), pj, (pi + pk) % 2);
            vec_sub(&vec_sub(&a, &b), &vec_signed(&c, sxy))
        }
        "ldend1" => {
            // x▷(y▷z) - (x▷y)▷z - (x◁y)▷z - s y▷(x▷z) + s (y◁x)▷z + s (y▷x)▷z
            let (r, l) = (&alg.tables[0], &alg.tables[1]);
            let pos = vec_sub(
                &vec_sub(&vec_sub(&r.apply(&ei, r.column(j, k)), &r.apply(r.column(i, j), &ek)), &r.apply(l.column(i, j), &ek)),
                &vec_signed(&r.apply(&ej, r.column(i, k)), sxy),
            );
            let tail = vec_add(&r.apply(l.column(j, i), &ek), &r.apply(r.column(j, i), &ek));
            vec_add(&pos, &vec_signed(&tail, sxy))
        }
        "ldend2" => {
            // x▷(y◁z) - (x▷y)◁z - s y◁(x▷z) - s y◁(x◁z) + s (y◁x)◁z
            let (r, l) = (&alg.tables[0], &alg.tables[1]);
            let head = vec_sub(&r.apply(&ei, l.column(j, k)), &l.apply(r.column(i, j), &ek));
            let tail = vec_sub(&l.apply(l.column(j, i), &ek), &vec_add(&l.apply(&ej, r.column(i, k)), &l.apply(&ej, l.column(i, k))));
            vec_add(&head, &vec_signed(&tail, sxy))
        }
        other => panic!("unknown identity {}", other),
    }
}

fn check_identities(alg: &SuperAlgebra, slots: Slots) -> CheckReport {
    let start = Instant::now();
    let mut rep = ReportBuilder::new();
    let n = alg.dim();
    for id in identities(alg) {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let Some(pattern) = slots.pattern(&[i, j, k]) else {
                        continue;
                    };
                    rep.count();
                    let r = identity_residual(alg, id, i, j, k);
                    if !vec_is_zero(&r) {
                        rep.fail(format!("{}{}", id, pattern), vec![i + 1, j + 1, k + 1], alg.render(&r));
                    }
                }
            }
        }
    }
    rep.finish(start.elapsed())
}

/// Structural gates, then every defining identity of the kind on all basis triples.
pub fn check_axioms(alg: &SuperAlgebra) -> CheckReport {
    let v = validate(alg);
    if !v.passed() {
        return v;
    }
    CheckReport::merge([v, check_identities(alg, Slots::All)])
}

/// The algebra `A + V` whose products restrict to the algebra on `A`, to the
/// actions on mixed pairs and to the internal product (or zero) on `V`.
pub fn semidirect(alg: &SuperAlgebra, module: &ModuleData) -> Result<SuperAlgebra> {
    if module.kind != alg.kind {
        return Err(Error::KindMismatch(format!("module is {}, algebra is {}", module.kind, alg.kind)));
    }
    let n = alg.dim();
    let m = module.dim();
    let arity = alg.kind.arity();
    let expected_right = if alg.kind == Kind::Lie { 0 } else { arity };
    if module.left.len() != arity || module.right.len() != expected_right {
        return Err(Error::Input(format!(
            "{} modules need {} left and {} right action tables",
            alg.kind, arity, expected_right
        )));
    }
    for t in module.left.iter().chain(&module.right) {
        if t.algebra_dim() != n || t.module_dim() != m {
            return Err(Error::DimensionMismatch("action table dimensions".into()));
        }
    }
    if let Some(internal) = &module.internal {
        if internal.len() != arity || internal.iter().any(|t| t.dim() != m) {
            return Err(Error::DimensionMismatch("internal product dimensions".into()));
        }
    }
    let mut vnames = module.basis.clone();
    if module.basis.names().iter().any(|v| alg.basis.index_of(v).is_some()) {
        let names = (1..=m).map(|a| format!("v{}", a)).collect();
        vnames = GradedBasis::new(names, module.basis.parities().to_vec())?;
    }
    let basis = alg.basis.concat(&vnames);
    let mut tables = Vec::new();
    for t in 0..arity {
        let mut st = StructureTable::zero(n + m);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    st.set(i, j, k, alg.tables[t].get(i, j, k).clone());
                }
            }
        }
        for i in 0..n {
            for a in 0..m {
                let s = sign(alg.parity(i), module.parity(a));
                for b in 0..m {
                    st.set(i, n + a, n + b, module.left[t].get(i, a, b).clone());
                    let right = if alg.kind == Kind::Lie {
                        -module.left[t].get(i, a, b)
                    } else {
                        module.right[t].get(i, a, b).clone()
                    };
                    st.set(n + a, i, n + b, if s == 1 { right } else { -right });
                }
            }
        }
        if let Some(internal) = &module.internal {
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        st.set(n + a, n + b, n + c, internal[t].get(a, b, c).clone());
                    }
                }
            }
        }
        tables.push(st);
    }
    let mut out = SuperAlgebra::new(&format!("{}+{}", alg.name, module.name), alg.kind, basis, tables)?;
    out.field = alg.field.clone();
    out.parameters = alg.parameters.clone();
    out.constraints = alg.constraints.clone();
    Ok(out)
}

/// Module axioms of the algebra's kind: the defining identities of the
/// semidirect algebra on triples with one module slot, and, when an internal
/// product is present, on triples with two module slots.
pub fn check_module(alg: &SuperAlgebra, module: &ModuleData) -> Result<CheckReport> {
    let start = Instant::now();
    let sd = semidirect(alg, module)?;
    let mut base = sd.clone();
    base.also_associative = false;
    let v = validate(&sd);
    if !v.passed() {
        return Ok(v);
    }
    let max = if module.internal.is_some() { 2 } else { 1 };
    let mut r = check_identities(&base, Slots::Module { split: alg.dim(), min: 1, max });
    r.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(CheckReport::merge([v, r]))
}
