use std::collections::HashMap;
use std::path::Path;

use rbsuper::catalog::{self, catalog_list as list_entries, catalog_verify_all};
use rbsuper::constructions::{self, ConstructionId};
use rbsuper::exactmath::Complex64;
use rbsuper::format::{parse_operator_file, parse_pin_list, render_algebra, AlgebraFile};
use rbsuper::operators::{verify_family, OperatorFamily, Role};
use rbsuper::oracle::oracle_check;
use rbsuper::solver::{assemble_rb_system, matching_families, numeric_solve, pin_family, solve_system, Caps, NewtonOptions};
use rbsuper::structures::{check_axioms, check_module, CheckReport, ModuleData, SuperAlgebra};
use rbsuper::{Error, Result};
use serde_json::{json, Value};

use crate::{Method, Outcome};

/// Contents of a path, or of an embedded entry written `catalog:ID`.
fn read(path: &str) -> Result<String> {
    match path.strip_prefix("catalog:") {
        Some(id) => catalog::source(id).map(str::to_string).ok_or_else(|| Error::UnknownId(id.to_string())),
        None => std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {}", path, e))),
    }
}

fn load(path: &str) -> Result<AlgebraFile> {
    AlgebraFile::parse(&read(path)?)
}

/// Operators from a separate file if given, else those stored with the algebra.
fn load_operators(file: &AlgebraFile, path: Option<&str>, module: Option<&ModuleData>) -> Result<Vec<OperatorFamily>> {
    let ops = match path {
        Some(p) => parse_operator_file(&read(p)?, &file.algebra, module)?,
        None => file.operators()?,
    };
    if ops.is_empty() {
        return Err(Error::Input("no operators given".into()));
    }
    Ok(ops)
}

fn witnesses(rep: &CheckReport, family: Option<&str>) -> Vec<Value> {
    rep.witnesses
        .iter()
        .map(|w| {
            let mut v = json!({ "identity": w.identity, "indices": w.indices, "residual": w.residual });
            if let Some(f) = family {
                v["family"] = json!(f);
            }
            v
        })
        .collect()
}

fn witness_lines(rep: &CheckReport, indent: &str) -> Vec<String> {
    let mut out: Vec<String> =
        rep.witnesses.iter().map(|w| format!("{}{} at {:?}: {}", indent, w.identity, w.indices, w.residual)).collect();
    if rep.failures > rep.witnesses.len() {
        out.push(format!("{}... {} failures in total", indent, rep.failures));
    }
    out
}

pub fn check(path: &str) -> Result<Outcome> {
    let file = load(path)?;
    let alg = &file.algebra;
    let mut parts = vec![check_axioms(alg)];
    if let Some(m) = &file.module {
        parts.push(check_module(alg, m)?);
    }
    let rep = CheckReport::merge(parts);
    let mut out = Outcome::new(rep.passed());
    out.lines.push(format!(
        "{} ({}, {}|{}): {} instances checked, {} failing",
        alg.name,
        alg.kind,
        alg.basis.even_dim(),
        alg.basis.odd_dim(),
        rep.checked,
        rep.failures
    ));
    out.lines.extend(witness_lines(&rep, "  "));
    out.witnesses = witnesses(&rep, None);
    out.details.insert("algebra".into(), json!(alg.name));
    out.details.insert("checked".into(), json!(rep.checked));
    out.details.insert("failures".into(), json!(rep.failures));
    Ok(out)
}

pub fn verify_rb(path: &str, ops: Option<&str>) -> Result<Outcome> {
    let file = load(path)?;
    let alg = &file.algebra;
    let module = file.module.as_ref();
    let families = load_operators(&file, ops, module)?;
    let mut out = Outcome::new(true);
    let mut rows = Vec::new();
    for fam in &families {
        let rep = verify_family(alg, fam, module)?;
        let status = if rep.passed() { "pass" } else { "fail" };
        out.passed &= rep.passed();
        out.lines.push(format!("{} [{}, weight {}]: {}", fam.id, fam.role, fam.weight, status));
        out.lines.extend(witness_lines(&rep, "  "));
        out.witnesses.extend(witnesses(&rep, Some(&fam.id)));
        rows.push(json!({ "family": fam.id, "role": fam.role.name(), "status": status, "failures": rep.failures }));
    }
    out.details.insert("families".into(), Value::Array(rows));
    Ok(out)
}

pub fn derive(
    construction: &str,
    path: &str,
    rb: Option<&str>,
    module_path: Option<&str>,
    family: Option<&str>,
    output: Option<&Path>,
) -> Result<Outcome> {
    let id: ConstructionId = construction.parse()?;
    let file = load(path)?;
    let alg = &file.algebra;
    let module = match module_path {
        Some(p) => Some(load(p)?.module.ok_or_else(|| Error::Input(format!("{} has no [module] section", p)))?),
        None => file.module.clone(),
    };
    let (need_op, _) = constructions::needs(id);
    let op = if need_op {
        let ops = load_operators(&file, rb, module.as_ref())?;
        let chosen = match family {
            Some(f) => ops.into_iter().find(|o| o.id == f).ok_or_else(|| Error::UnknownId(f.to_string()))?,
            None => ops.into_iter().next().expect("nonempty"),
        };
        Some(chosen)
    } else {
        None
    };
    let derived = constructions::derive(id, alg, op.as_ref(), module.as_ref())?;
    let text = render_algebra(&derived.algebra, derived.module.as_ref());
    let mut out = Outcome::new(derived.report.passed());
    match output {
        Some(p) => {
            std::fs::write(p, &text).map_err(|e| Error::Io(format!("{}: {}", p.display(), e)))?;
            out.lines.push(format!("{} written to {}", derived.algebra.name, p.display()));
        }
        None => out.lines.push(text.trim_end().to_string()),
    }
    out.lines.push(format!("{} identity instances re-checked, {} failing", derived.report.checked, derived.report.failures));
    out.witnesses = witnesses(&derived.report, None);
    out.details.insert("construction".into(), json!(id.name()));
    out.details.insert("algebra".into(), json!(derived.algebra.name));
    if let Some(f) = &op {
        out.details.insert("family".into(), json!(f.id));
    }
    if output.is_none() {
        out.details.insert("output".into(), json!(text));
    }
    Ok(out)
}

fn fmt_point(p: &[Complex64]) -> String {
    let parts: Vec<String> = p
        .iter()
        .map(|z| {
            let r = |x: f64| if x.abs() < 5e-10 { 0.0 } else { x };
            let (re, im) = (r(z.re), r(z.im));
            if im == 0.0 {
                format!("{:.6}", re)
            } else {
                format!("{:.6}{:+.6}i", re, im)
            }
        })
        .collect();
    format!("({})", parts.join(", "))
}

pub fn solve_rb(path: &str, method: Method, restarts: usize, pin: Option<&str>, caps: Caps, seed: u64) -> Result<Outcome> {
    let file = load(path)?;
    let mut alg: SuperAlgebra = file.algebra.clone();
    let pins: HashMap<_, _> = match pin {
        Some(text) => parse_pin_list(text, &alg.field, &alg.parameters)?.into_iter().collect(),
        None => HashMap::new(),
    };
    if !pins.is_empty() {
        alg = alg.pinned(&pins)?;
    }
    let sys = assemble_rb_system(&alg)?;
    let families: Vec<OperatorFamily> = file
        .operators()?
        .iter()
        .filter(|f| f.role == Role::RotaBaxter && f.weight.is_zero())
        .map(|f| pin_family(f, &pins))
        .collect::<Result<_>>()?;
    let mut out = Outcome::new(true);
    out.seeded = true;
    out.lines.push(format!("{} equations in {} unknowns ({})", sys.equations.len(), sys.unknowns.len(), sys.unknowns.iter().map(|s| s.name()).collect::<Vec<_>>().join(", ")));
    out.details.insert("unknowns".into(), json!(sys.unknowns.iter().map(|s| s.name()).collect::<Vec<_>>()));
    out.details.insert("equations".into(), json!(sys.equations.iter().map(|p| p.to_string()).collect::<Vec<_>>()));

    let mut points: Vec<Vec<Complex64>> = Vec::new();
    if method != Method::Numeric {
        let sol = solve_system(&sys, &alg, caps, seed)?;
        out.lines.push(format!(
            "exact: {:?}, dimension {}, {} basis elements, {} components",
            sol.description,
            sol.dimension.map(|d| d.to_string()).unwrap_or_else(|| "empty".into()),
            sol.basis.len(),
            sol.components.len()
        ));
        for c in &sol.components {
            match &c.parametrization {
                Some(p) => out.lines.push(format!("  dim {}: ({})", c.dimension, p.join(", "))),
                None => out.lines.push(format!("  dim {}: {}", c.dimension, c.basis.join(", "))),
            }
        }
        if !sol.decomposed {
            out.lines.push("  (not split into components)".into());
        }
        let root = sys.field.embedding_root();
        points.extend(sol.points.iter().map(|p| p.iter().map(|c| c.to_complex(root)).collect::<Vec<_>>()));
        points.extend(sol.samples.iter().cloned());
        out.details.insert("exact".into(), serde_json::to_value(&sol).map_err(|e| Error::Internal(e.to_string()))?);
    }
    if method != Method::Groebner {
        let sol = numeric_solve(&sys, &NewtonOptions { restarts, seed, ..NewtonOptions::default() });
        out.lines.push(format!("numeric: {} distinct points from {} restarts", sol.samples.len(), restarts));
        points.extend(sol.samples.iter().cloned());
        out.details.insert("numeric".into(), serde_json::to_value(&sol).map_err(|e| Error::Internal(e.to_string()))?);
    }

    if !families.is_empty() && !sys.equations.is_empty() {
        let mut unmatched = 0;
        let mut rows = Vec::new();
        for p in &points {
            let found = matching_families(&sys, p, &families)?;
            if found.is_empty() {
                unmatched += 1;
                out.lines.push(format!("  unmatched {}", fmt_point(p)));
                out.witnesses.push(json!({ "identity": "unmatched point", "point": p.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>() }));
            }
            rows.push(json!(found.iter().map(|m| m.family.clone()).collect::<Vec<_>>()));
        }
        out.passed = unmatched == 0;
        out.lines.push(format!("matched {} of {} points against {} families", points.len() - unmatched, points.len(), families.len()));
        out.details.insert("matches".into(), Value::Array(rows));
    }
    Ok(out)
}

pub fn catalog_list() -> Result<Outcome> {
    let entries = list_entries()?;
    let mut out = Outcome::new(true);
    for e in &entries {
        out.lines.push(format!("{:<20} {:<13} {}|{}  {} families", e.id, e.kind, e.even, e.odd, e.families));
    }
    out.details.insert("entries".into(), serde_json::to_value(&entries).map_err(|e| Error::Internal(e.to_string()))?);
    Ok(out)
}

pub fn catalog_show(id: &str) -> Result<Outcome> {
    let text = catalog::source(id).ok_or_else(|| Error::UnknownId(id.to_string()))?;
    let entry = catalog::catalog_get(id)?;
    let mut out = Outcome::new(true);
    out.lines.push(text.trim_end().to_string());
    out.details.insert("id".into(), json!(id));
    out.details.insert("families".into(), json!(entry.families.iter().map(|f| f.id.clone()).collect::<Vec<_>>()));
    out.details.insert("source".into(), json!(text));
    Ok(out)
}

pub fn catalog_verify(filter: &str, errata: Option<&Path>) -> Result<Outcome> {
    let sum = catalog_verify_all(filter, errata)?;
    let mut out = Outcome::new(sum.failed == 0 && sum.algebras_passed == sum.algebras);
    for e in &sum.entries {
        let passed = e.families.iter().filter(|f| f.passed).count();
        let alg = if e.algebra_passed { "" } else { "  algebra FAILS its axioms" };
        out.lines.push(format!("{:<20} {}/{}{}", e.entry, passed, e.families.len(), alg));
        for f in e.families.iter().filter(|f| !f.passed) {
            out.lines.push(format!("  {} fails ({} instances)", f.family, f.failures));
        }
    }
    out.lines.push(format!(
        "{} algebras ({} pass their axioms), {} families: {} pass, {} fail",
        sum.algebras, sum.algebras_passed, sum.checked, sum.passed, sum.failed
    ));
    out.witnesses = sum
        .errata
        .iter()
        .map(|r| json!({ "entry": r.entry, "family": r.family, "identity": r.identity, "indices": r.witness, "residual": r.residual, "note": r.note }))
        .collect();
    out.details.insert("summary".into(), serde_json::to_value(&sum).map_err(|e| Error::Internal(e.to_string()))?);
    Ok(out)
}

pub fn oracle(path: &str, ops: Option<&str>, seed: u64) -> Result<Outcome> {
    let file = load(path)?;
    let alg = &file.algebra;
    let families = load_operators(&file, ops, file.module.as_ref())?;
    let rb: Vec<&OperatorFamily> = families.iter().filter(|f| f.role == Role::RotaBaxter).collect();
    if rb.is_empty() {
        return Err(Error::Input("the oracle handles Rota-Baxter operators only".into()));
    }
    let mut out = Outcome::new(true);
    out.seeded = true;
    let mut rows = Vec::new();
    for fam in rb {
        let rep = oracle_check(alg, fam, seed)?;
        out.passed &= rep.agree;
        out.lines.push(format!(
            "{}: exact {}, numeric max {:.3e}, {}",
            fam.id,
            if rep.exact_passed { "pass" } else { "fail" },
            rep.numeric_max(),
            if rep.agree { "agree" } else { "DISAGREE" }
        ));
        if !rep.agree {
            out.witnesses.push(json!({ "family": fam.id, "identity": "oracle", "exact_passed": rep.exact_passed, "numeric_max": rep.numeric_max() }));
        }
        rows.push(serde_json::to_value(&rep).map_err(|e| Error::Internal(e.to_string()))?);
    }
    out.details.insert("families".into(), Value::Array(rows));
    Ok(out)
}
