//! One pass/fail line per acceptance criterion. Exits nonzero if any fails.

mod props;

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use rbsuper::catalog::{catalog_get, catalog_verify_all, ids, perturbed, VerifySummary};
use rbsuper::constructions::{commutator_lie, ldend_to_lie, ldend_to_prelie, lie_oop_to_prelie_on_module, prelie_rb_to_prelie, rb_to_ldend, Associated};
use rbsuper::exactmath::{parse_expr, RatExpr, Scalar};
use rbsuper::operators::{OperatorFamily, Role};
use rbsuper::oracle::{oracle_check, NONZERO_TOL, ZERO_TOL};
use rbsuper::solver::{
    assemble_rb_system, buchberger, matching_families, numeric_solve, pin_family, solve_system, Caps, Description, NewtonOptions,
    MATCH_TOL,
};
use rbsuper::structures::{check_axioms, sign, vec_sub, Kind, ModuleData, StructureTable, SuperAlgebra};

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

/// Every failed family and every failing algebra has an errata record with a witness and a residual.
fn errata_complete(sum: &VerifySummary) -> bool {
    sum.entries.iter().all(|e| {
        let has = |fam: &str| {
            sum.errata.iter().any(|r| r.entry == e.entry && r.family == fam && !r.witness.is_empty() && !r.residual.is_empty())
        };
        (e.algebra_passed || has("algebra")) && e.families.iter().filter(|f| !f.passed).all(|f| has(&f.family))
    })
}

fn b_tables() -> Verdict {
    let sum = match catalog_verify_all("B_*", None) {
        Ok(s) => s,
        Err(e) => return verdict(false, e.to_string()),
    };
    let count = |p: &str| sum.entries.iter().filter(|e| e.entry.starts_with(p)).count();
    let shape = (count("B_1_"), count("B_2_"), count("B_3_"));
    let ok = shape == (5, 2, 3) && sum.failed == 0 && sum.algebras_passed == sum.algebras && sum.checked > 0;
    verdict(ok, format!("{} algebras {:?}, {}/{} families exact", sum.algebras, shape, sum.passed, sum.checked))
}

fn c_and_a_hat_tables() -> Verdict {
    let (a, c) = match (catalog_verify_all("A_hat_*", None), catalog_verify_all("C_*", None)) {
        (Ok(a), Ok(c)) => (a, c),
        (Err(e), _) | (_, Err(e)) => return verdict(false, e.to_string()),
    };
    let a_ok = a.failed == 0 && a.algebras_passed == a.algebras;
    let rate = c.passed as f64 / c.checked.max(1) as f64;
    let c_ok = rate >= 0.9 && errata_complete(&c);
    verdict(
        a_ok && c_ok,
        format!(
            "A_hat {}/{} families, {}/{} algebras (0 failures required); C {}/{} = {:.1}% (90% required), {} errata records, complete: {}",
            a.passed,
            a.checked,
            a.algebras_passed,
            a.algebras,
            c.passed,
            c.checked,
            100.0 * rate,
            c.errata.len(),
            errata_complete(&c)
        ),
    )
}

/// `x∘y = [R(x), y]` tabulated directly from the bracket.
fn bracket_product(alg: &SuperAlgebra, r: &rbsuper::operators::EvenMap) -> StructureTable {
    let n = alg.dim();
    let mut t = StructureTable::zero(n);
    for i in 0..n {
        for j in 0..n {
            t.set_column(i, j, &alg.table().apply(&r.column(i), &alg.unit(j)));
        }
    }
    t
}

fn osp() -> Verdict {
    let sum = match catalog_verify_all("osp12", None) {
        Ok(s) => s,
        Err(e) => return verdict(false, e.to_string()),
    };
    let entry = catalog_get("osp12").expect("osp12 entry");
    let alg = entry.algebra();
    let jacobi = check_axioms(alg).passed();
    let rate = sum.passed as f64 / sum.checked.max(1) as f64;
    let regular = ModuleData::regular(alg);
    let mut derived_ok = 0;
    let mut derived_bad = Vec::new();
    for fam in &entry.families {
        if !sum.verdict("osp12", &fam.id).is_some_and(|v| v.passed) {
            continue;
        }
        let direct = SuperAlgebra::new("direct", Kind::PreLie, alg.basis.clone(), vec![bracket_product(alg, &fam.map)]).unwrap();
        let ok = match lie_oop_to_prelie_on_module(alg, &regular, &fam.map) {
            Ok(d) => d.algebra.tables == direct.tables && check_axioms(&direct).passed() && check_axioms(&d.algebra).passed(),
            Err(_) => false,
        };
        if ok {
            derived_ok += 1;
        } else {
            derived_bad.push(fam.id.clone());
        }
    }
    let ok = jacobi && sum.checked == 31 && rate >= 0.9 && errata_complete(&sum) && derived_bad.is_empty();
    verdict(
        ok,
        format!(
            "super-Jacobi {}, {}/{} families ({:.1}%), {} errata records, derived pre-Lie {}/{}{}",
            if jacobi { "holds" } else { "FAILS" },
            sum.passed,
            sum.checked,
            100.0 * rate,
            sum.errata.len(),
            derived_ok,
            derived_ok + derived_bad.len(),
            if derived_bad.is_empty() { String::new() } else { format!(" (failing: {})", derived_bad.join(", ")) }
        ),
    )
}

fn lie_table(alg: &SuperAlgebra) -> StructureTable {
    let n = alg.dim();
    let mut t = StructureTable::zero(n);
    for i in 0..n {
        for j in 0..n {
            let s = sign(alg.parity(i), alg.parity(j));
            let v = vec_sub(alg.table().column(i, j), &rbsuper::structures::vec_signed(alg.table().column(j, i), s));
            t.set_column(i, j, &v);
        }
    }
    t
}

/// `R(x)∘y + x∘R(y)` tabulated directly.
fn sum_product(alg: &SuperAlgebra, r: &rbsuper::operators::EvenMap) -> StructureTable {
    let n = alg.dim();
    let t = alg.table();
    let mut out = StructureTable::zero(n);
    for i in 0..n {
        for j in 0..n {
            let v = rbsuper::structures::vec_add(&t.apply(&r.column(i), &alg.unit(j)), &t.apply(&alg.unit(i), &r.column(j)));
            out.set_column(i, j, &v);
        }
    }
    out
}

const STEPS: [&str; 6] = [
    "L-dendriform identities",
    "vertical = prelie_rb_to_prelie",
    "horizontal pre-Lie identity",
    "sub-adjacent super-Jacobi",
    "vertical/horizontal commutators agree",
    "construction error",
];

/// The L-dendriform pipeline for one operator: the indices of the failing steps,
/// and whether the vertical product is `R(x)∘y + x∘R(y)` and the horizontal one
/// is `prelie_rb_to_prelie`.
fn closure(alg: &SuperAlgebra, fam: &OperatorFamily) -> (Vec<usize>, bool, bool) {
    let run = || -> rbsuper::Result<(Vec<usize>, bool, bool)> {
        let mut failed = Vec::new();
        let ld = rb_to_ldend(alg, &fam.map)?;
        if !check_axioms(&ld.algebra).passed() {
            failed.push(0);
        }
        let vertical = ldend_to_prelie(&ld.algebra, Associated::Vertical)?;
        let star = prelie_rb_to_prelie(alg, &fam.map)?;
        if vertical.algebra.tables != star.algebra.tables {
            failed.push(1);
        }
        let horizontal = ldend_to_prelie(&ld.algebra, Associated::Horizontal)?;
        if !check_axioms(&horizontal.algebra).passed() {
            failed.push(2);
        }
        let lie = ldend_to_lie(&ld.algebra)?;
        if !check_axioms(&lie.algebra).passed() {
            failed.push(3);
        }
        let from_v = commutator_lie(&vertical.algebra)?;
        let from_h = commutator_lie(&horizontal.algebra)?;
        let direct = lie_table(&vertical.algebra);
        if from_v.algebra.tables != from_h.algebra.tables || from_v.algebra.tables[0] != lie.algebra.tables[0] || direct != lie.algebra.tables[0] {
            failed.push(4);
        }
        let v_is_sum = vertical.algebra.tables[0] == sum_product(alg, &fam.map);
        let h_is_star = horizontal.algebra.tables == star.algebra.tables;
        Ok((failed, v_is_sum, h_is_star))
    };
    run().unwrap_or((vec![5], false, false))
}

fn construction_closure() -> Verdict {
    let mut done = 0;
    let mut skipped_kind = 0;
    let mut per_step = [0usize; 6];
    let mut first: Option<String> = None;
    let (mut v_sum, mut h_star) = (0, 0);
    for id in ids() {
        let entry = catalog_get(id).expect("catalog entry");
        let alg = entry.algebra();
        if !matches!(alg.kind, Kind::PreLie | Kind::Associative) {
            skipped_kind += entry.families.len();
            continue;
        }
        if !check_axioms(alg).passed() {
            continue;
        }
        for fam in &entry.families {
            if fam.role != Role::RotaBaxter || !fam.weight.is_zero() {
                continue;
            }
            if !rbsuper::operators::check_rb(alg, &fam.map, &Scalar::zero()).map(|r| r.passed()).unwrap_or(false) {
                continue;
            }
            done += 1;
            let (failed, vs, hs) = closure(alg, fam);
            v_sum += vs as usize;
            h_star += hs as usize;
            for &k in &failed {
                per_step[k] += 1;
            }
            if first.is_none() && !failed.is_empty() {
                first = Some(format!("{} {}: {}", id, fam.id, STEPS[failed[0]]));
            }
        }
    }
    let steps: Vec<String> = STEPS.iter().zip(per_step).map(|(s, n)| format!("{} {}/{}", s, done - n, done)).collect();
    let detail = format!(
        "{} passing weight-0 families ({} Lie families not applicable); {}; vertical = R(x)y + xR(y) on {}/{}, horizontal = prelie_rb_to_prelie on {}/{}{}",
        done,
        skipped_kind,
        steps.join(", "),
        v_sum,
        done,
        h_star,
        done,
        first.map(|b| format!("; first failure: {}", b)).unwrap_or_default()
    );
    verdict(done > 0 && per_step.iter().all(|&n| n == 0), detail)
}

/// Pins every structure parameter to 3, 4, ... in order.
fn pinned(alg: &SuperAlgebra) -> HashMap<rbsuper::exactmath::Symbol, RatExpr> {
    alg.parameters.iter().enumerate().map(|(n, p)| (p.clone(), RatExpr::int(3 + n as i64))).collect()
}

fn solver_cross_check() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    let caps = Caps::default();
    let solve = |id: &str| {
        let e = catalog_get(id).unwrap();
        let sys = assemble_rb_system(e.algebra()).unwrap();
        let sol = solve_system(&sys, e.algebra(), caps, 0).unwrap();
        (sys, sol)
    };

    let (sys, sol) = solve("B_2_1");
    let expected: BTreeSet<Vec<String>> = ["r2", "r2 - 2*r1"]
        .iter()
        .map(|s| {
            let p = parse_expr(s, &sys.unknowns, &sys.field).unwrap().as_poly().unwrap().clone();
            buchberger(&[p], caps).unwrap().iter().map(|g| g.to_string()).collect()
        })
        .collect();
    let got: BTreeSet<Vec<String>> = sol.components.iter().map(|c| c.basis.clone()).collect();
    let b21 = sol.decomposed && got == expected;
    ok &= b21;
    notes.push(format!("B_2_1 two lines {}", if b21 { "ok" } else { "WRONG" }));

    for id in ["B_2_2", "B_3_3"] {
        let (_, sol) = solve(id);
        let zero = sol.description == Description::Points && sol.points.len() == 1 && sol.points[0].iter().all(|c| c.is_zero());
        ok &= zero;
        notes.push(format!("{} only 0 {}", id, if zero { "ok" } else { "WRONG" }));
    }
    for (id, d) in [("B_3_1", 2), ("A_hat_4_1", 5)] {
        let (sys, sol) = solve(id);
        let full = sys.unknowns.len() == d && sol.dimension == Some(d) && sol.basis.is_empty();
        ok &= full;
        notes.push(format!("{} dim {} {}", id, d, if full { "ok" } else { "WRONG" }));
    }

    let mut points = 0;
    let mut unmatched = Vec::new();
    for id in ids().into_iter().filter(|i| i.starts_with("B_")) {
        let e = catalog_get(id).unwrap();
        let pins = pinned(e.algebra());
        let alg = e.algebra().pinned(&pins).unwrap();
        let sys = assemble_rb_system(&alg).unwrap();
        if sys.unknowns.len() != 2 {
            continue;
        }
        let fams: Vec<OperatorFamily> = e.families.iter().map(|f| pin_family(f, &pins).unwrap()).collect();
        let sol = numeric_solve(&sys, &NewtonOptions { restarts: 200, seed: 0, ..NewtonOptions::default() });
        for p in &sol.samples {
            points += 1;
            if matching_families(&sys, p, &fams).map(|m| m.is_empty()).unwrap_or(true) {
                unmatched.push(id);
            }
        }
    }
    ok &= unmatched.is_empty() && points > 0;
    notes.push(format!("{} numeric points on the 2-dim algebras, {} unmatched at {:e}", points, unmatched.len(), MATCH_TOL));
    verdict(ok, notes.join("; "))
}

fn oracle_agreement() -> Verdict {
    let (mut checks, mut bad) = (0, Vec::new());
    let (mut worst_pass, mut least_fail) = (0.0f64, f64::INFINITY);
    for id in ids() {
        let entry = catalog_get(id).unwrap();
        for fam in entry.families.iter().filter(|f| f.role == Role::RotaBaxter) {
            let broken = match perturbed(entry.algebra(), fam) {
                Ok(b) => b,
                Err(e) => {
                    bad.push(format!("{} {}: {}", id, fam.id, e));
                    continue;
                }
            };
            for (f, injected) in [(fam, false), (&broken, true)] {
                checks += 1;
                match oracle_check(entry.algebra(), f, 0) {
                    Ok(r) => {
                        let max = r.numeric_max();
                        if r.exact_passed {
                            worst_pass = worst_pass.max(max);
                        } else {
                            least_fail = least_fail.min(max);
                        }
                        let ok = if injected { !r.exact_passed && max > NONZERO_TOL } else { r.agree };
                        if !ok {
                            bad.push(format!("{} {}", id, f.id));
                        }
                    }
                    Err(e) => bad.push(format!("{} {}: {}", id, f.id, e)),
                }
            }
        }
    }
    verdict(
        bad.is_empty() && checks > 0,
        format!(
            "{} checks (families and perturbed copies), {} disagreements; largest passing residual {:.1e} (< {:e}), smallest failing {:.1e} (> {:e}){}",
            checks,
            bad.len(),
            worst_pass,
            ZERO_TOL,
            least_fail,
            NONZERO_TOL,
            bad.first().map(|b| format!("; first: {}", b)).unwrap_or_default()
        ),
    )
}

fn property_suites() -> Verdict {
    let mut failed = Vec::new();
    for (name, suite) in props::SUITES {
        if let Err(e) = suite() {
            failed.push(format!("{}: {}", name, e));
        }
    }
    verdict(failed.is_empty(), if failed.is_empty() { format!("{} suites green", props::SUITES.len()) } else { failed.join("; ") })
}

fn main() {
    let criteria: [(u32, &str, Option<Duration>, fn() -> Verdict); 7] = [
        (1, "B tables verify exactly", Some(Duration::from_secs(1)), b_tables),
        (2, "A_hat tables exact, C tables >= 90% with errata", Some(Duration::from_secs(10)), c_and_a_hat_tables),
        (3, "osp(1,2) axioms, families and derived pre-Lie products", Some(Duration::from_secs(60)), osp),
        (4, "construction closure", None, construction_closure),
        (5, "solver cross-check", Some(Duration::from_secs(30)), solver_cross_check),
        (6, "oracle agreement", None, oracle_agreement),
        (7, "property suites", None, property_suites),
    ];
    let mut passed = 0;
    for (n, name, limit, run) in criteria {
        let start = Instant::now();
        let v = run();
        let t = start.elapsed();
        let in_time = limit.is_none_or(|l| t < l);
        let ok = v.passed && in_time;
        if ok {
            passed += 1;
        }
        let limit = limit.map(|l| format!(", limit {} s", l.as_secs())).unwrap_or_default();
        println!("criterion {} [{}] {}: {} ({:.2} s{})", n, if ok { "PASS" } else { "FAIL" }, name, v.detail, t.as_secs_f64(), limit);
    }
    println!("acceptance: {}/{} criteria pass", passed, criteria.len());
    if passed != criteria.len() {
        std::process::exit(1);
    }
}
