//! Line-oriented text format for algebras, modules and operators.
//!
//! ```text
//! [field]
//! m = t^2+1
//! [algebra]
//! name = B_2_1
//! kind = pre-lie
//! basis = e1:even, e2:odd
//! parameters = k
//! constraints = k, k-1
//! [products]
//! e2 * e2 = 1/2 e1
//! [operator]
//! id = R2
//! role = rota-baxter
//! weight = 0
//! R(e1) = a1 e1
//! R(e2) = 2 a1 e2
//! ```
//!
//! L-dendriform tables go in `[products.right]` (▷) and `[products.left]` (◁).
//! Modules use `[module]` with `basis` (or `dim` and `parities`), action sections
//! `[actions.l]`, `[actions.r]`, `[actions.rho]` (suffixed `.right`/`.left` for
//! L-dendriform) with lines `e_i * v_a = ...` meaning `action(e_i) v_a`, and an
//! optional `[module.products]`. Omitted products are zero.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactmath::{parse_with, FieldSpec, Monomial, PolyExpr, RatExpr, Scalar, Symbol};
use crate::operators::{LinearMap, OperatorFamily, Role};
use crate::structures::{render_vector, ActionTable, GradedBasis, Kind, ModuleData, StructureTable, SuperAlgebra, Vector};

#[derive(Clone, Debug)]
enum Line {
    Key(String, String),
    Product(String, String, String),
    Map(String, String),
}

#[derive(Clone, Debug)]
struct Section {
    name: String,
    lines: Vec<(usize, Line)>,
}

fn at(line: usize, e: Error) -> Error {
    match e {
        Error::Input(m) => Error::Input(format!("line {}: {}", line, m)),
        Error::Syntax { offset, message } => Error::Input(format!("line {}, column {}: {}", line, offset + 1, message)),
        Error::UnknownSymbol(s) => Error::Input(format!("line {}: unknown symbol `{}`", line, s)),
        other => other,
    }
}

fn split_sections(text: &str) -> Result<Vec<Section>> {
    let mut out: Vec<Section> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let no = no + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| Error::Input(format!("line {}: unterminated section header", no)))?;
            out.push(Section { name: name.trim().to_string(), lines: Vec::new() });
            continue;
        }
        let sec = out.last_mut().ok_or_else(|| Error::Input(format!("line {}: content before any section", no)))?;
        let (lhs, rhs) = line
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("line {}: expected `=`", no)))?;
        let (lhs, rhs) = (lhs.trim(), rhs.trim().to_string());
        let parsed = if let Some((_, arg)) = lhs.split_once('(') {
            let arg = arg
                .strip_suffix(')')
                .ok_or_else(|| Error::Input(format!("line {}: expected `)`", no)))?;
            Line::Map(arg.trim().to_string(), rhs)
        } else if let Some((a, b)) = lhs.split_once('*') {
            Line::Product(a.trim().to_string(), b.trim().to_string(), rhs)
        } else {
            Line::Key(lhs.to_string(), rhs)
        };
        sec.lines.push((no, parsed));
    }
    Ok(out)
}

fn keys(sec: &Section) -> HashMap<String, (usize, String)> {
    sec.lines
        .iter()
        .filter_map(|(no, l)| match l {
            Line::Key(k, v) => Some((k.clone(), (*no, v.clone()))),
            _ => None,
        })
        .collect()
}

fn list(v: &str) -> Vec<String> {
    v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn parse_field(sec: Option<&Section>) -> Result<Arc<FieldSpec>> {
    let Some(sec) = sec else {
        return Ok(Arc::new(FieldSpec::default()));
    };
    let k = keys(sec);
    let Some((no, m)) = k.get("m") else {
        return Ok(Arc::new(FieldSpec::default()));
    };
    let q = Arc::new(FieldSpec::rational());
    let e = parse_with(m, &q, |name| name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')).map_err(|e| at(*no, e))?;
    let syms = e.symbols();
    if syms.len() > 1 {
        return Err(Error::Input(format!("line {}: minimal polynomial must be univariate", no)));
    }
    let gen = syms.iter().next().map(|s| s.name().to_string()).unwrap_or_else(|| "t".to_string());
    let poly = e.as_poly().ok_or_else(|| Error::Input(format!("line {}: minimal polynomial has a denominator", no)))?;
    let s = Symbol::new(&gen);
    let coeffs = poly.coefficients_in(&s);
    let deg = *coeffs.keys().max().unwrap_or(&0) as usize;
    let mut v = vec![crate::exactmath::Rational::from_integer(0.into()); deg + 1];
    for (d, c) in coeffs {
        let c = c.as_constant().and_then(|c| c.as_rational().cloned()).ok_or_else(|| Error::Input(format!("line {}: coefficients must be rational", no)))?;
        v[d as usize] = c;
    }
    FieldSpec::new(gen, v).map(Arc::new).map_err(|e| at(*no, e))
}

fn parse_basis(no: usize, v: &str) -> Result<GradedBasis> {
    let mut names = Vec::new();
    let mut par = Vec::new();
    for item in list(v) {
        let (n, p) = item.split_once(':').ok_or_else(|| Error::Input(format!("line {}: basis item `{}` needs a parity", no, item)))?;
        names.push(n.trim().to_string());
        par.push(match p.trim() {
            "even" | "0" => 0,
            "odd" | "1" => 1,
            other => return Err(Error::Input(format!("line {}: bad parity `{}`", no, other))),
        });
    }
    GradedBasis::new(names, par).map_err(|e| at(no, e))
}

/// Parse a linear combination of `basis` with coefficients in `params`.
pub fn parse_linear(text: &str, basis: &GradedBasis, params: &[Symbol], field: &Arc<FieldSpec>) -> Result<Vector> {
    let names = basis.names();
    let e = parse_with(text, field, |n| names.iter().any(|b| b == n) || params.iter().any(|p| p.name() == n))?;
    let bsyms = basis.symbols();
    if e.den().symbols().iter().any(|s| bsyms.contains(s)) {
        return Err(Error::Input(format!("basis element in a denominator: `{}`", text)));
    }
    let mut parts: Vec<PolyExpr> = vec![PolyExpr::zero(); basis.dim()];
    for (m, c) in e.num().terms() {
        let found: Vec<(usize, u32)> = m
            .pairs()
            .iter()
            .filter_map(|(s, x)| bsyms.iter().position(|b| b == s).map(|i| (i, *x)))
            .collect();
        match found.as_slice() {
            [(i, 1)] => {
                let rest = m.split_off(&bsyms[*i]).1;
                parts[*i].add_term(rest, c.clone());
            }
            _ => return Err(Error::Input(format!("not linear in the basis: `{}`", text))),
        }
    }
    parts.into_iter().map(|p| RatExpr::new(p, e.den().clone())).collect()
}

fn index(basis: &GradedBasis, name: &str, no: usize) -> Result<usize> {
    basis
        .index_of(name)
        .ok_or_else(|| Error::Input(format!("line {}: `{}` is not a basis element", no, name)))
}

fn parse_pins(no: usize, v: &str, field: &Arc<FieldSpec>, params: &[Symbol]) -> Result<Vec<(Symbol, RatExpr)>> {
    let mut out = Vec::new();
    for item in list(v) {
        let (n, e) = item.split_once('=').ok_or_else(|| Error::Input(format!("line {}: pin `{}` needs `=`", no, item)))?;
        let s = Symbol::new(n.trim());
        if !params.contains(&s) {
            return Err(Error::Input(format!("line {}: `{}` is not a parameter", no, s)));
        }
        let val = parse_with(e, field, |n| params.iter().any(|p| p.name() == n)).map_err(|e| at(no, e))?;
        out.push((s, val));
    }
    Ok(out)
}

/// Parse `name=value,...` pins against the given parameters.
pub fn parse_pin_list(text: &str, field: &Arc<FieldSpec>, params: &[Symbol]) -> Result<Vec<(Symbol, RatExpr)>> {
    parse_pins(0, text, field, params)
}

/// Everything an algebra file can hold.
#[derive(Clone, Debug)]
pub struct AlgebraFile {
    /// The algebra as used everywhere: pins applied, transcription convention resolved.
    pub algebra: SuperAlgebra,
    /// The table exactly as written (pins applied).
    pub verbatim: SuperAlgebra,
    pub module: Option<ModuleData>,
    pub pins: Vec<(Symbol, RatExpr)>,
    /// The file gave the product in the mirrored (right-symmetric) convention.
    pub transcribed_right: bool,
    /// Basis relabelling applied to put even elements first (`perm[new] = old`), if any.
    pub permutation: Option<Vec<usize>>,
    /// Free-form `[entry]` keys.
    pub entry: HashMap<String, String>,
    sections: Vec<Section>,
}

impl AlgebraFile {
    pub fn parse(text: &str) -> Result<AlgebraFile> {
        let sections = split_sections(text)?;
        let find = |n: &str| sections.iter().find(|s| s.name == n);
        let field = parse_field(find("field"))?;
        let asec = find("algebra").ok_or_else(|| Error::Input("missing [algebra] section".into()))?;
        let k = keys(asec);
        let get = |key: &str| k.get(key).cloned();
        let name = get("name").map(|v| v.1).unwrap_or_else(|| "algebra".into());
        let kind: Kind = match get("kind") {
            Some((no, v)) => v.parse().map_err(|e| at(no, e))?,
            None => return Err(Error::Input("missing `kind`".into())),
        };
        let (bno, bv) = get("basis").ok_or_else(|| Error::Input("missing `basis`".into()))?;
        let basis = parse_basis(bno, &bv)?;
        let parameters: Vec<Symbol> = get("parameters").map(|(_, v)| list(&v).iter().map(|s| Symbol::new(s)).collect()).unwrap_or_default();
        for p in &parameters {
            if basis.index_of(p.name()).is_some() {
                return Err(Error::Input(format!("`{}` is both a parameter and a basis element", p)));
            }
        }
        let known = |n: &str| parameters.iter().any(|p| p.name() == n);
        let constraints: Vec<RatExpr> = match get("constraints") {
            Some((no, v)) => list(&v).iter().map(|c| parse_with(c, &field, known).map_err(|e| at(no, e))).collect::<Result<_>>()?,
            None => Vec::new(),
        };
        let flag = |key: &str| get(key).is_some_and(|(_, v)| v == "true");
        let transcribed_right = get("transcribed").is_some_and(|(_, v)| v == "right");
        let pins = match get("pins") {
            Some((no, v)) => parse_pins(no, &v, &field, &parameters)?,
            None => Vec::new(),
        };

        let table_names: Vec<&str> = match kind {
            Kind::LDendriform => vec!["products.right", "products.left"],
            _ => vec!["products"],
        };
        let mut tables = Vec::new();
        for tn in &table_names {
            tables.push(parse_table(find(tn), &basis, &basis, &basis, &parameters, &field)?);
        }
        let mut alg = SuperAlgebra::new(&name, kind, basis.clone(), tables)?
            .with_field(field.clone())
            .with_parameters(parameters.clone(), constraints);
        alg.also_associative = flag("also_associative");
        alg.lie_admissible_only = flag("lie_admissible_only");

        let module = match find("module") {
            Some(msec) => Some(parse_module(msec, &sections, &alg)?),
            None => None,
        };

        let pin_map: HashMap<Symbol, RatExpr> = pins.iter().cloned().collect();
        if !pin_map.is_empty() {
            alg = alg.pinned(&pin_map)?;
        }
        let verbatim = alg.clone();
        if transcribed_right {
            if kind != Kind::PreLie {
                return Err(Error::Input("`transcribed = right` applies to pre-Lie tables only".into()));
            }
            alg.tables = vec![alg.table().graded_opposite(alg.basis.parities())];
        }
        let mut permutation = None;
        if !alg.basis.is_normalized() {
            let perm = alg.basis.normalizing_permutation();
            alg.basis = alg.basis.permuted(&perm);
            alg.tables = alg.tables.iter().map(|t| t.permuted(&perm)).collect();
            permutation = Some(perm);
        }
        let entry = find("entry").map(|s| keys(s).into_iter().map(|(k, (_, v))| (k, v)).collect()).unwrap_or_default();
        Ok(AlgebraFile { algebra: alg, verbatim, module, pins, transcribed_right, permutation, entry, sections })
    }

    /// All `[operator]` records in the file, in order.
    pub fn operators(&self) -> Result<Vec<OperatorFamily>> {
        parse_operator_sections(&self.sections, &self.algebra, self.module.as_ref(), &self.pins, self.permutation.as_deref())
    }
}

fn parse_table(
    sec: Option<&Section>,
    left: &GradedBasis,
    right: &GradedBasis,
    out: &GradedBasis,
    params: &[Symbol],
    field: &Arc<FieldSpec>,
) -> Result<StructureTable> {
    let mut t = StructureTable::zero(out.dim());
    let Some(sec) = sec else { return Ok(t) };
    let mut seen = std::collections::HashSet::new();
    for (no, line) in &sec.lines {
        let Line::Product(a, b, rhs) = line else {
            return Err(Error::Input(format!("line {}: expected a product line in [{}]", no, sec.name)));
        };
        let (i, j) = (index(left, a, *no)?, index(right, b, *no)?);
        if !seen.insert((i, j)) {
            return Err(Error::Input(format!("line {}: product `{} * {}` given twice", no, a, b)));
        }
        let v = parse_linear(rhs, out, params, field).map_err(|e| at(*no, e))?;
        t.set_column(i, j, &v);
    }
    Ok(t)
}

fn parse_action(sec: Option<&Section>, alg: &SuperAlgebra, basis: &GradedBasis) -> Result<ActionTable> {
    let mut t = ActionTable::zero(alg.dim(), basis.dim());
    let Some(sec) = sec else { return Ok(t) };
    for (no, line) in &sec.lines {
        let Line::Product(a, b, rhs) = line else {
            return Err(Error::Input(format!("line {}: expected `e_i * v_a = ...` in [{}]", no, sec.name)));
        };
        let (i, x) = (index(&alg.basis, a, *no)?, index(basis, b, *no)?);
        let v = parse_linear(rhs, basis, &alg.parameters, &alg.field).map_err(|e| at(*no, e))?;
        for (y, c) in v.into_iter().enumerate() {
            t.set(i, x, y, c);
        }
    }
    Ok(t)
}

fn parse_module(msec: &Section, sections: &[Section], alg: &SuperAlgebra) -> Result<ModuleData> {
    let k = keys(msec);
    let find = |n: &str| sections.iter().find(|s| s.name == n);
    let basis = if let Some((no, v)) = k.get("basis") {
        parse_basis(*no, v)?
    } else {
        let (no, pv) = k.get("parities").ok_or_else(|| Error::Input("[module] needs `basis` or `parities`".into()))?;
        let par: Vec<u8> = list(pv).iter().map(|p| p.parse::<u8>().map_err(|_| Error::Input(format!("line {}: bad parity", no)))).collect::<Result<_>>()?;
        if let Some((dno, d)) = k.get("dim") {
            if d.parse::<usize>().ok() != Some(par.len()) {
                return Err(Error::Input(format!("line {}: dim disagrees with parities", dno)));
            }
        }
        let names = (1..=par.len()).map(|a| format!("v{}", a)).collect();
        GradedBasis::new(names, par)?
    };
    let name = k.get("name").map(|v| v.1.clone()).unwrap_or_else(|| "module".into());
    let (left_names, right_names, internal_names): (Vec<&str>, Vec<&str>, Vec<&str>) = match alg.kind {
        Kind::Lie => (vec!["actions.rho"], vec![], vec!["module.products"]),
        Kind::LDendriform => (
            vec!["actions.l.right", "actions.l.left"],
            vec!["actions.r.right", "actions.r.left"],
            vec!["module.products.right", "module.products.left"],
        ),
        _ => (vec!["actions.l"], vec!["actions.r"], vec!["module.products"]),
    };
    let left = left_names.iter().map(|n| parse_action(find(n), alg, &basis)).collect::<Result<_>>()?;
    let right = right_names.iter().map(|n| parse_action(find(n), alg, &basis)).collect::<Result<_>>()?;
    let internal = if internal_names.iter().any(|n| find(n).is_some()) {
        Some(
            internal_names
                .iter()
                .map(|n| parse_table(find(n), &basis, &basis, &basis, &alg.parameters, &alg.field))
                .collect::<Result<_>>()?,
        )
    } else {
        None
    };
    Ok(ModuleData { name, kind: alg.kind, basis, left, right, internal })
}

fn parse_map_lines(sec: &Section, dom: &GradedBasis, cod: &GradedBasis, params: &[Symbol], field: &Arc<FieldSpec>) -> Result<LinearMap> {
    let mut m = LinearMap::zero(dom, cod);
    for (no, line) in &sec.lines {
        let Line::Map(arg, rhs) = line else { continue };
        let i = index(dom, arg, *no)?;
        let v = parse_linear(rhs, cod, params, field).map_err(|e| at(*no, e))?;
        for (k, c) in v.into_iter().enumerate() {
            m.set(k, i, c);
        }
    }
    Ok(m)
}

fn permute_map(m: &LinearMap, perm: Option<&[usize]>, rows: bool, cols: bool) -> LinearMap {
    let Some(perm) = perm else { return m.clone() };
    let mut out = m.clone();
    if rows {
        out.cod = m.cod.permuted(perm);
    }
    if cols {
        out.dom = m.dom.permuted(perm);
    }
    for k in 0..m.rows() {
        for i in 0..m.cols() {
            let (ok, oi) = (if rows { perm[k] } else { k }, if cols { perm[i] } else { i });
            out.set(k, i, m.get(ok, oi).clone());
        }
    }
    out
}

fn parse_operator_sections(
    sections: &[Section],
    alg: &SuperAlgebra,
    module: Option<&ModuleData>,
    pins: &[(Symbol, RatExpr)],
    perm: Option<&[usize]>,
) -> Result<Vec<OperatorFamily>> {
    let pin_map: HashMap<Symbol, RatExpr> = pins.iter().cloned().collect();
    // operators are written against the basis as listed in the file
    let file_basis = match perm {
        Some(p) => {
            let mut inv = vec![0; p.len()];
            for (new, &old) in p.iter().enumerate() {
                inv[old] = new;
            }
            alg.basis.permuted(&inv)
        }
        None => alg.basis.clone(),
    };
    let mut out = Vec::new();
    let mut idx = 0;
    while idx < sections.len() {
        if sections[idx].name != "operator" {
            idx += 1;
            continue;
        }
        let sec = &sections[idx];
        let mut extra: HashMap<&str, &Section> = HashMap::new();
        let mut j = idx + 1;
        while j < sections.len() && sections[j].name.starts_with("operator.") {
            extra.insert(&sections[j].name["operator.".len()..], &sections[j]);
            j += 1;
        }
        let k = keys(sec);
        let get = |key: &str| k.get(key).cloned();
        let role: Role = match get("role") {
            Some((no, v)) => v.parse().map_err(|e| at(no, e))?,
            None => Role::RotaBaxter,
        };
        let mut params: Vec<Symbol> = alg.parameters.clone();
        let fam_params: Vec<Symbol> = match get("parameters") {
            Some((_, v)) => list(&v).iter().map(|s| Symbol::new(s)).collect(),
            None => infer_parameters(sec, &extra, alg, module, pins)?,
        };
        params.extend(fam_params.iter().cloned());
        params.extend(pins.iter().map(|(s, _)| s.clone()));
        let known = |n: &str| params.iter().any(|p| p.name() == n);
        let weight = match get("weight") {
            Some((no, v)) => {
                let w = parse_with(&v, &alg.field, known).map_err(|e| at(no, e))?;
                w.as_constant().ok_or_else(|| Error::Input(format!("line {}: weight must be a constant", no)))?
            }
            None => Scalar::zero(),
        };
        let constraints: Vec<RatExpr> = match get("constraints") {
            Some((no, v)) => list(&v).iter().map(|c| parse_with(c, &alg.field, known).map_err(|e| at(no, e))).collect::<Result<_>>()?,
            None => Vec::new(),
        };
        let dom = match (role, module) {
            (Role::OOperator | Role::ExtendedOOperator, Some(m)) => m.basis.clone(),
            (Role::OOperator | Role::ExtendedOOperator, None) => {
                return Err(Error::Input(format!("operator `{}` needs a [module]", get("id").map(|v| v.1).unwrap_or_default())))
            }
            _ => file_basis.clone(),
        };
        let map = parse_map_lines(sec, &dom, &file_basis, &params, &alg.field)?;
        let domain_is_algebra = !matches!(role, Role::OOperator | Role::ExtendedOOperator);
        let map = permute_map(&map, perm, true, domain_is_algebra);
        let modification = match extra.get("modification") {
            Some(s) => Some(permute_map(&parse_map_lines(s, &dom, &file_basis, &params, &alg.field)?, perm, true, false)),
            None => None,
        };
        let module_map = match (extra.get("module_map"), module) {
            (Some(s), Some(m)) => Some(parse_map_lines(s, &m.basis, &m.basis, &params, &alg.field)?),
            (Some(_), None) => return Err(Error::Input("[operator.module_map] needs a [module]".into())),
            _ => None,
        };
        let subst = |m: LinearMap| if pin_map.is_empty() { Ok(m) } else { m.substitute(&pin_map) };
        let mut fam = OperatorFamily {
            id: get("id").map(|v| v.1).unwrap_or_else(|| format!("R{}", out.len() + 1)),
            algebra: alg.name.clone(),
            role,
            weight,
            map: subst(map)?,
            modification: modification.map(subst).transpose()?,
            module_map: module_map.map(subst).transpose()?,
            parameters: fam_params,
            constraints: constraints
                .iter()
                .map(|c| c.substitute(&pin_map))
                .collect::<Result<_>>()?,
            pivots: Vec::new(),
            note: get("note").map(|v| v.1).unwrap_or_default(),
        };
        fam.pivots = match get("pivots") {
            Some((no, v)) => parse_pivots(no, &v, &fam.parameters)?,
            None => fam.derive_pivots(&alg.parameters),
        };
        out.push(fam);
        idx = j;
    }
    Ok(out)
}

/// Symbols on right-hand sides that are neither basis elements nor structure parameters.
fn infer_parameters(
    sec: &Section,
    extra: &HashMap<&str, &Section>,
    alg: &SuperAlgebra,
    module: Option<&ModuleData>,
    pins: &[(Symbol, RatExpr)],
) -> Result<Vec<Symbol>> {
    let mut names: Vec<String> = alg.basis.names().to_vec();
    if let Some(m) = module {
        names.extend(m.basis.names().iter().cloned());
    }
    let mut found = std::collections::BTreeSet::new();
    for s in std::iter::once(sec).chain(extra.values().copied()) {
        for (no, line) in &s.lines {
            let Line::Map(_, rhs) = line else { continue };
            let e = parse_with(rhs, &alg.field, |_| true).map_err(|e| at(*no, e))?;
            found.extend(e.symbols());
        }
    }
    Ok(found
        .into_iter()
        .filter(|s| !names.iter().any(|n| n == s.name()) && !alg.parameters.contains(s) && !pins.iter().any(|(p, _)| p == s))
        .collect())
}

fn parse_pivots(no: usize, v: &str, params: &[Symbol]) -> Result<Vec<(Symbol, (usize, usize))>> {
    let mut out = Vec::new();
    for item in list(v) {
        let bad = || Error::Input(format!("line {}: pivot `{}` should look like `a1:R[1][1]`", no, item));
        let (p, cell) = item.split_once(':').ok_or_else(bad)?;
        let s = Symbol::new(p.trim());
        if !params.contains(&s) {
            return Err(Error::Input(format!("line {}: pivot for unknown parameter `{}`", no, s)));
        }
        let cell = cell.trim().strip_prefix("R[").ok_or_else(bad)?;
        let (r, c) = cell.split_once("][").ok_or_else(bad)?;
        let c = c.strip_suffix(']').ok_or_else(bad)?;
        let r: usize = r.parse().map_err(|_| bad())?;
        let c: usize = c.parse().map_err(|_| bad())?;
        if r == 0 || c == 0 {
            return Err(bad());
        }
        out.push((s, (r - 1, c - 1)));
    }
    Ok(out)
}

/// Parse a stand-alone operator file against an algebra (and module, for O-operators).
pub fn parse_operator_file(text: &str, alg: &SuperAlgebra, module: Option<&ModuleData>) -> Result<Vec<OperatorFamily>> {
    let sections = split_sections(text)?;
    let ops = parse_operator_sections(&sections, alg, module, &[], None)?;
    if ops.is_empty() {
        return Err(Error::Input("no [operator] section".into()));
    }
    Ok(ops)
}

fn render_params(ps: &[Symbol]) -> String {
    ps.iter().map(|p| p.name().to_string()).collect::<Vec<_>>().join(", ")
}

fn render_basis(b: &GradedBasis) -> String {
    b.names()
        .iter()
        .zip(b.parities())
        .map(|(n, p)| format!("{}:{}", n, if *p == 0 { "even" } else { "odd" }))
        .collect::<Vec<_>>()
        .join(", ")
}

fn render_table(out: &mut String, header: &str, t: &StructureTable, left: &GradedBasis, right: &GradedBasis, res: &GradedBasis) {
    out.push_str(&format!("[{}]\n", header));
    for i in 0..left.dim() {
        for j in 0..right.dim() {
            let col = t.column(i, j);
            if col.iter().any(|c| !c.is_zero()) {
                out.push_str(&format!("{} * {} = {}\n", left.names()[i], right.names()[j], render_vector(col, res.names())));
            }
        }
    }
}

fn render_action(out: &mut String, header: &str, t: &ActionTable, alg: &GradedBasis, m: &GradedBasis) {
    out.push_str(&format!("[{}]\n", header));
    for i in 0..alg.dim() {
        for a in 0..m.dim() {
            let col = t.column(i, a);
            if col.iter().any(|c| !c.is_zero()) {
                out.push_str(&format!("{} * {} = {}\n", alg.names()[i], m.names()[a], render_vector(col, m.names())));
            }
        }
    }
}

/// Render an algebra (and optional module) in the file format.
pub fn render_algebra(alg: &SuperAlgebra, module: Option<&ModuleData>) -> String {
    let mut out = String::new();
    out.push_str(&format!("[field]\nm = {}\n", alg.field));
    out.push_str(&format!("[algebra]\nname = {}\nkind = {}\nbasis = {}\n", alg.name, alg.kind, render_basis(&alg.basis)));
    if !alg.parameters.is_empty() {
        out.push_str(&format!("parameters = {}\n", render_params(&alg.parameters)));
    }
    if !alg.constraints.is_empty() {
        out.push_str(&format!("constraints = {}\n", alg.constraints.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")));
    }
    if alg.also_associative {
        out.push_str("also_associative = true\n");
    }
    if alg.lie_admissible_only {
        out.push_str("lie_admissible_only = true\n");
    }
    let names: &[&str] = if alg.kind == Kind::LDendriform { &["products.right", "products.left"] } else { &["products"] };
    for (t, name) in alg.tables.iter().zip(names) {
        render_table(&mut out, name, t, &alg.basis, &alg.basis, &alg.basis);
    }
    if let Some(m) = module {
        out.push_str(&format!("[module]\nname = {}\nbasis = {}\n", m.name, render_basis(&m.basis)));
        let (ln, rn, inn): (Vec<&str>, Vec<&str>, Vec<&str>) = match alg.kind {
            Kind::Lie => (vec!["actions.rho"], vec![], vec!["module.products"]),
            Kind::LDendriform => (
                vec!["actions.l.right", "actions.l.left"],
                vec!["actions.r.right", "actions.r.left"],
                vec!["module.products.right", "module.products.left"],
            ),
            _ => (vec!["actions.l"], vec!["actions.r"], vec!["module.products"]),
        };
        for (t, n) in m.left.iter().zip(&ln) {
            render_action(&mut out, n, t, &alg.basis, &m.basis);
        }
        for (t, n) in m.right.iter().zip(&rn) {
            render_action(&mut out, n, t, &alg.basis, &m.basis);
        }
        if let Some(internal) = &m.internal {
            for (t, n) in internal.iter().zip(&inn) {
                render_table(&mut out, n, t, &m.basis, &m.basis, &m.basis);
            }
        }
    }
    out
}

fn render_map(out: &mut String, f: &str, m: &LinearMap) {
    for i in 0..m.cols() {
        out.push_str(&format!("{}({}) = {}\n", f, m.dom.names()[i], render_vector(&m.column(i), m.cod.names())));
    }
}

/// Render an operator family in the file format.
pub fn render_operator(fam: &OperatorFamily) -> String {
    let mut out = String::new();
    out.push_str(&format!("[operator]\nid = {}\nalgebra = {}\nrole = {}\nweight = {}\n", fam.id, fam.algebra, fam.role, fam.weight));
    if !fam.parameters.is_empty() {
        out.push_str(&format!("parameters = {}\n", render_params(&fam.parameters)));
    }
    if !fam.constraints.is_empty() {
        out.push_str(&format!("constraints = {}\n", fam.constraints.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")));
    }
    if !fam.pivots.is_empty() {
        let pv: Vec<String> = fam.pivots.iter().map(|(p, (r, c))| format!("{}:R[{}][{}]", p, r + 1, c + 1)).collect();
        out.push_str(&format!("pivots = {}\n", pv.join(", ")));
    }
    if !fam.note.is_empty() {
        out.push_str(&format!("note = {}\n", fam.note.replace('\n', " ")));
    }
    render_map(&mut out, "R", &fam.map);
    if let Some(m) = &fam.modification {
        out.push_str("[operator.modification]\n");
        render_map(&mut out, "T'", m);
    }
    if let Some(m) = &fam.module_map {
        out.push_str("[operator.module_map]\n");
        render_map(&mut out, "R_V", m);
    }
    out
}

/// Monomial helper used by callers building expressions programmatically.
pub fn monomial(name: &str) -> RatExpr {
    RatExpr::from_poly(PolyExpr::term(Scalar::one(), Monomial::var(Symbol::new(name))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::check_axioms;

    const B21: &str = "
[algebra]
name = B_2_1
kind = pre-lie
basis = e1:even, e2:odd
[products]
e2 * e2 = 1/2 e1
[operator]
id = R2
parameters = a1
R(e1) = a1 e1
R(e2) = 2a1 e2
";

    #[test]
    fn parses_algebra_and_operator() {
        let f = AlgebraFile::parse(B21).unwrap();
        assert_eq!(f.algebra.table().get(1, 1, 0), &RatExpr::constant(Scalar::ratio(1, 2)));
        assert!(check_axioms(&f.algebra).passed());
        let ops = f.operators().unwrap();
        assert_eq!(ops.len(), 1);
        assert_eq!(ops[0].map.get(1, 1), &RatExpr::var("a1").scale(&Scalar::int(2)));
        assert_eq!(ops[0].pivots, vec![(Symbol::new("a1"), (0, 0))]);
    }

    #[test]
    fn round_trip() {
        let f = AlgebraFile::parse(B21).unwrap();
        let ops = f.operators().unwrap();
        let text = format!("{}{}", render_algebra(&f.algebra, None), render_operator(&ops[0]));
        let g = AlgebraFile::parse(&text).unwrap();
        assert_eq!(g.algebra.tables, f.algebra.tables);
        assert_eq!(g.operators().unwrap()[0].map, ops[0].map);
    }

    #[test]
    fn nonlinear_right_hand_side_is_rejected() {
        let text = B21.replace("1/2 e1", "e1*e1");
        assert!(matches!(AlgebraFile::parse(&text), Err(Error::Input(_))));
    }

    #[test]
    fn unknown_symbol_reports_line() {
        let text = B21.replace("1/2 e1", "q e1");
        let err = AlgebraFile::parse(&text).unwrap_err();
        assert!(err.to_string().contains("line 7"), "{}", err);
    }

    #[test]
    fn field_line() {
        let text = format!("[field]\nm = t^2 - t + 1\n{}", B21);
        let f = AlgebraFile::parse(&text).unwrap();
        assert_eq!(*f.algebra.field, FieldSpec::sixth_roots());
    }
}
