//! Graded algebras and modules given by structure constants, and the
//! axiom checkers for the four algebra kinds.

mod check;
mod report;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{FieldSpec, RatExpr, Symbol};

pub use check::{associator, check_axioms, check_module, identity_residual, semidirect, validate, Slots};
pub use report::{CheckReport, ReportBuilder, Status, Witness, WITNESS_CAP};

/// A coefficient vector in some basis.
pub type Vector = Vec<RatExpr>;

/// `(-1)^(p q)` as `+1` or `-1`.
pub fn sign(p: u8, q: u8) -> i64 {
    if p & q & 1 == 1 {
        -1
    } else {
        1
    }
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = vec![RatExpr::zero(); n];
    v[i] = RatExpr::one();
    v
}

pub fn vec_add(a: &[RatExpr], b: &[RatExpr]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[RatExpr], b: &[RatExpr]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[RatExpr], c: &RatExpr) -> Vector {
    if c.is_zero() {
        return vec![RatExpr::zero(); a.len()];
    }
    a.iter().map(|x| x * c).collect()
}

pub fn vec_signed(a: &[RatExpr], s: i64) -> Vector {
    if s == 1 {
        a.to_vec()
    } else {
        a.iter().map(|x| -x).collect()
    }
}

pub fn vec_is_zero(a: &[RatExpr]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Render `sum c_k e_k` with the given basis names.
pub fn render_vector(v: &[RatExpr], names: &[String]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (c, name) in v.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let cs = c.to_string();
        let term = if c.is_one() {
            name.clone()
        } else if cs == "-1" {
            format!("-{}", name)
        } else if c.as_poly().is_some_and(|p| p.len() == 1) {
            format!("{} {}", cs, name)
        } else {
            format!("({}) {}", cs, name)
        };
        parts.push(term);
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        match p.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Associative,
    Lie,
    PreLie,
    LDendriform,
}

impl Kind {
    /// Number of structure tables of this kind.
    pub fn arity(self) -> usize {
        match self {
            Kind::LDendriform => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Associative => "associative",
            Kind::Lie => "lie",
            Kind::PreLie => "pre-lie",
            Kind::LDendriform => "l-dendriform",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Kind> {
        match s.trim().to_ascii_lowercase().as_str() {
            "associative" => Ok(Kind::Associative),
            "lie" => Ok(Kind::Lie),
            "pre-lie" | "prelie" => Ok(Kind::PreLie),
            "l-dendriform" | "ldendriform" => Ok(Kind::LDendriform),
            other => Err(Error::Input(format!("unknown kind `{}`", other))),
        }
    }
}

/// Ordered basis names with parities (0 even, 1 odd).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    names: Vec<String>,
    parity: Vec<u8>,
}

impl GradedBasis {
    pub fn new(names: Vec<String>, parity: Vec<u8>) -> Result<Self> {
        if names.len() != parity.len() {
            return Err(Error::DimensionMismatch("names and parities differ in length".into()));
        }
        if parity.iter().any(|p| *p > 1) {
            return Err(Error::Input("parity must be 0 or 1".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Input(format!("duplicate basis name `{}`", n)));
            }
        }
        Ok(GradedBasis { names, parity })
    }

    /// Basis `prefix1, ..., prefix(p+q)` with `p` even elements first.
    pub fn standard(prefix: &str, even: usize, odd: usize) -> Self {
        let names = (1..=even + odd).map(|i| format!("{}{}", prefix, i)).collect();
        let parity = (0..even + odd).map(|i| u8::from(i >= even)).collect();
        GradedBasis { names, parity }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.parity[i]
    }

    pub fn parities(&self) -> &[u8] {
        &self.parity
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn even_dim(&self) -> usize {
        self.parity.iter().filter(|p| **p == 0).count()
    }

    pub fn odd_dim(&self) -> usize {
        self.dim() - self.even_dim()
    }

    pub fn is_normalized(&self) -> bool {
        self.parity.windows(2).all(|w| w[0] <= w[1])
    }

    /// Stable permutation putting even elements first: `perm[new] = old`.
    pub fn normalizing_permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.dim()).collect();
        perm.sort_by_key(|&i| self.parity[i]);
        perm
    }

    pub fn permuted(&self, perm: &[usize]) -> GradedBasis {
        GradedBasis {
            names: perm.iter().map(|&i| self.names[i].clone()).collect(),
            parity: perm.iter().map(|&i| self.parity[i]).collect(),
        }
    }

    /// Concatenation, as for the basis of `A + V`.
    pub fn concat(&self, other: &GradedBasis) -> GradedBasis {
        let mut names = self.names.clone();
        names.extend(other.names.iter().cloned());
        let mut parity = self.parity.clone();
        parity.extend(other.parity.iter().copied());
        GradedBasis { names, parity }
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        self.names.iter().map(|n| Symbol::new(n)).collect()
    }
}

/// Structure constants `c[i][j][k]`: the coefficient of `e_k` in `e_i * e_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureTable {
    n: usize,
    c: Vec<RatExpr>,
}

impl StructureTable {
    pub fn zero(n: usize) -> Self {
        StructureTable { n, c: vec![RatExpr::zero(); n * n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &RatExpr {
        &self.c[(i * self.n + j) * self.n + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: RatExpr) {
        self.c[(i * self.n + j) * self.n + k] = v;
    }

    /// The product `e_i * e_j` as a vector.
    pub fn column(&self, i: usize, j: usize) -> &[RatExpr] {
        let start = (i * self.n + j) * self.n;
        &self.c[start..start + self.n]
    }

    pub fn set_column(&mut self, i: usize, j: usize, v: &[RatExpr]) {
        let start = (i * self.n + j) * self.n;
        self.c[start..start + self.n].clone_from_slice(v);
    }

    /// Bilinear extension to coefficient vectors.
    pub fn apply(&self, x: &[RatExpr], y: &[RatExpr]) -> Vector {
        let mut out = vec![RatExpr::zero(); self.n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let col = self.column(i, j);
                if vec_is_zero(col) {
                    continue;
                }
                let c = xi * yj;
                for (k, ck) in col.iter().enumerate() {
                    if !ck.is_zero() {
                        out[k] = &out[k] + &(&c * ck);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        vec_is_zero(&self.c)
    }

    pub fn entries(&self) -> &[RatExpr] {
        &self.c
    }

    pub fn map(&self, f: impl Fn(&RatExpr) -> Result<RatExpr>) -> Result<StructureTable> {
        Ok(StructureTable { n: self.n, c: self.c.iter().map(f).collect::<Result<_>>()? })
    }

    /// Relabel the basis: `perm[new] = old`.
    pub fn permuted(&self, perm: &[usize]) -> StructureTable {
        let mut out = StructureTable::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..self.n {
                    out.set(i, j, k, self.get(perm[i], perm[j], perm[k]).clone());
                }
            }
        }
        out
    }

    /// The graded opposite `x *' y = (-1)^{|x||y|} y * x`.
    pub fn graded_opposite(&self, parity: &[u8]) -> StructureTable {
        let mut out = StructureTable::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let col = vec_signed(self.column(j, i), sign(parity[i], parity[j]));
                out.set_column(i, j, &col);
            }
        }
        out
    }
}

/// A finite-dimensional superalgebra. L-dendriform algebras store the right
/// product (▷) first and the left product (◁) second.
#[derive(Clone, Debug)]
pub struct SuperAlgebra {
    pub name: String,
    pub kind: Kind,
    pub field: Arc<FieldSpec>,
    pub basis: GradedBasis,
    pub tables: Vec<StructureTable>,
    pub parameters: Vec<Symbol>,
    /// Expressions asserted to be nonzero.
    pub constraints: Vec<RatExpr>,
    /// Also run the associativity check (pre-Lie tables that are associative).
    pub also_associative: bool,
    /// For associative-kind tables: assert only Lie-admissibility.
    pub lie_admissible_only: bool,
}

impl SuperAlgebra {
    pub fn new(name: &str, kind: Kind, basis: GradedBasis, tables: Vec<StructureTable>) -> Result<Self> {
        let n = basis.dim();
        if tables.len() != kind.arity() {
            return Err(Error::Input(format!("{} algebras need {} table(s), got {}", kind, kind.arity(), tables.len())));
        }
        if tables.iter().any(|t| t.dim() != n) {
            return Err(Error::DimensionMismatch(format!("table dimension differs from basis dimension {}", n)));
        }
        Ok(SuperAlgebra {
            name: name.to_string(),
            kind,
            field: Arc::new(FieldSpec::default()),
            basis,
            tables,
            parameters: Vec::new(),
            constraints: Vec::new(),
            also_associative: false,
            lie_admissible_only: false,
        })
    }

    pub fn with_field(mut self, field: Arc<FieldSpec>) -> Self {
        self.field = field;
        self
    }

    pub fn with_parameters(mut self, parameters: Vec<Symbol>, constraints: Vec<RatExpr>) -> Self {
        self.parameters = parameters;
        self.constraints = constraints;
        self
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.basis.parity(i)
    }

    pub fn table(&self) -> &StructureTable {
        &self.tables[0]
    }

    pub fn product(&self, which: usize, x: &[RatExpr], y: &[RatExpr]) -> Vector {
        self.tables[which].apply(x, y)
    }

    pub fn unit(&self, i: usize) -> Vector {
        unit_vector(self.dim(), i)
    }

    pub fn render(&self, v: &[RatExpr]) -> String {
        render_vector(v, self.basis.names())
    }

    pub fn is_abelian(&self) -> bool {
        self.tables.iter().all(|t| t.is_zero())
    }

    /// Substitute values for structure parameters (e.g. `k = 2`), dropping them from the parameter list.
    pub fn pinned(&self, pins: &std::collections::HashMap<Symbol, RatExpr>) -> Result<SuperAlgebra> {
        let mut out = self.clone();
        out.tables = self.tables.iter().map(|t| t.map(|e| e.substitute(pins))).collect::<Result<_>>()?;
        out.parameters.retain(|p| !pins.contains_key(p));
        out.constraints = self.constraints.iter().map(|c| c.substitute(pins)).collect::<Result<_>>()?;
        for c in &out.constraints {
            if c.is_zero() {
                return Err(Error::ConstraintViolated(c.to_string()));
            }
        }
        Ok(out)
    }
}

/// A graded module over a superalgebra.
///
/// Action tables store `a[i][α][β]`, the coefficient of `v_β` in `action(e_i) v_α`.
/// Associative and pre-Lie bimodules carry `l` and `r` (one each); Lie modules carry
/// only `ρ` in `left`; L-dendriform bimodules carry `left = [l▷, l◁]` and
/// `right = [r▷, r◁]`. The right action enters products as
/// `v * x = (-1)^{|x||v|} r(x) v`.
#[derive(Clone, Debug)]
pub struct ModuleData {
    pub name: String,
    pub kind: Kind,
    pub basis: GradedBasis,
    pub left: Vec<ActionTable>,
    pub right: Vec<ActionTable>,
    /// Optional internal product(s) on the module, one per algebra table.
    pub internal: Option<Vec<StructureTable>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActionTable {
    n: usize,
    m: usize,
    c: Vec<RatExpr>,
}

impl ActionTable {
    pub fn zero(n: usize, m: usize) -> Self {
        ActionTable { n, m, c: vec![RatExpr::zero(); n * m * m] }
    }

    pub fn algebra_dim(&self) -> usize {
        self.n
    }

    pub fn module_dim(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, a: usize, b: usize) -> &RatExpr {
        &self.c[(i * self.m + a) * self.m + b]
    }

    pub fn set(&mut self, i: usize, a: usize, b: usize, v: RatExpr) {
        self.c[(i * self.m + a) * self.m + b] = v;
    }

    pub fn column(&self, i: usize, a: usize) -> &[RatExpr] {
        let start = (i * self.m + a) * self.m;
        &self.c[start..start + self.m]
    }

    pub fn entries(&self) -> &[RatExpr] {
        &self.c
    }

    pub fn map(&self, f: impl Fn(&RatExpr) -> RatExpr) -> ActionTable {
        ActionTable { n: self.n, m: self.m, c: self.c.iter().map(f).collect() }
    }

    /// Entrywise combination `self + s * other`.
    pub fn add_scaled(&self, other: &ActionTable, s: impl Fn(usize, usize) -> i64) -> ActionTable {
        let mut out = self.clone();
        for i in 0..self.n {
            for a in 0..self.m {
                for b in 0..self.m {
                    let v = other.get(i, a, b);
                    if v.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, a, b).clone();
                    let next = if s(i, a) == 1 { &cur + v } else { &cur - v };
                    out.set(i, a, b, next);
                }
            }
        }
        out
    }
}

impl ModuleData {
    /// Actions of `alg` on itself: `l = L`, `r = R` (or `ρ = ad` for Lie), with the
    /// algebra product as internal product.
    pub fn regular(alg: &SuperAlgebra) -> ModuleData {
        let n = alg.dim();
        let mut left = Vec::new();
        let mut right = Vec::new();
        for t in &alg.tables {
            let mut l = ActionTable::zero(n, n);
            let mut r = ActionTable::zero(n, n);
            for i in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        // l(e_i) e_a = e_i * e_a
                        l.set(i, a, b, t.get(i, a, b).clone());
                        // r(e_i) e_a = (-1)^{|a||i|} e_a * e_i
                        let v = t.get(a, i, b);
                        r.set(i, a, b, if sign(alg.parity(i), alg.parity(a)) == 1 { v.clone() } else { -v });
                    }
                }
            }
            left.push(l);
            right.push(r);
        }
        if alg.kind == Kind::Lie {
            right.clear();
        }
        ModuleData {
            name: format!("{}.regular", alg.name),
            kind: alg.kind,
            basis: alg.basis.clone(),
            left,
            right,
            internal: Some(alg.tables.clone()),
        }
    }

    /// The same actions with no internal product.
    pub fn without_product(mut self) -> ModuleData {
        self.internal = None;
        self
    }

    pub fn zero(alg: &SuperAlgebra, basis: GradedBasis) -> ModuleData {
        let n = alg.dim();
        let m = basis.dim();
        let tables = alg.kind.arity();
        let right = if alg.kind == Kind::Lie { 0 } else { tables };
        ModuleData {
            name: "zero".into(),
            kind: alg.kind,
            basis,
            left: vec![ActionTable::zero(n, m); tables],
            right: vec![ActionTable::zero(n, m); right],
            internal: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn parity(&self, a: usize) -> u8 {
        self.basis.parity(a)
    }

    /// `l(x) v` for the given action table.
    pub fn act(table: &ActionTable, x: &[RatExpr], v: &[RatExpr]) -> Vector {
        let m = table.module_dim();
        let mut out = vec![RatExpr::zero(); m];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (a, va) in v.iter().enumerate() {
                if va.is_zero() {
                    continue;
                }
                let c = xi * va;
                for (b, cb) in table.column(i, a).iter().enumerate() {
                    if !cb.is_zero() {
                        out[b] = &out[b] + &(&c * cb);
                    }
                }
            }
        }
        out
    }
}
