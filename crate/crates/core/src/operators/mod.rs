//! Linear maps between graded spaces and the operator identities:
//! Rota-Baxter operators, O-operators, extended O-operators, Rota-Baxter
//! operators on modules and morphisms.

mod checks;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::exactmath::{RatExpr, Scalar, Symbol};
use crate::structures::{sign, vec_is_zero, CheckReport, GradedBasis, Kind, ReportBuilder, SuperAlgebra, Vector};

pub use checks::{
    check_extended_o_operator, check_o_operator, check_rb, check_rb_morphism, check_rb_on_module, check_rb_tables,
    rb_residual, verify_family,
};

/// A linear map given by its matrix `M[k][i]`: column `i` is the image of basis element `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    pub dom: GradedBasis,
    pub cod: GradedBasis,
    m: Vec<RatExpr>,
}

/// Operators are even linear maps; evenness is checked, not enforced.
pub type EvenMap = LinearMap;

impl LinearMap {
    pub fn zero(dom: &GradedBasis, cod: &GradedBasis) -> Self {
        LinearMap { dom: dom.clone(), cod: cod.clone(), m: vec![RatExpr::zero(); dom.dim() * cod.dim()] }
    }

    pub fn identity(basis: &GradedBasis) -> Self {
        let mut out = Self::zero(basis, basis);
        for i in 0..basis.dim() {
            out.set(i, i, RatExpr::one());
        }
        out
    }

    pub fn from_columns(dom: &GradedBasis, cod: &GradedBasis, columns: &[Vector]) -> Result<Self> {
        if columns.len() != dom.dim() || columns.iter().any(|c| c.len() != cod.dim()) {
            return Err(Error::DimensionMismatch("matrix shape".into()));
        }
        let mut out = Self::zero(dom, cod);
        for (i, col) in columns.iter().enumerate() {
            for (k, v) in col.iter().enumerate() {
                out.set(k, i, v.clone());
            }
        }
        Ok(out)
    }

    pub fn rows(&self) -> usize {
        self.cod.dim()
    }

    pub fn cols(&self) -> usize {
        self.dom.dim()
    }

    pub fn get(&self, k: usize, i: usize) -> &RatExpr {
        &self.m[k * self.cols() + i]
    }

    pub fn set(&mut self, k: usize, i: usize, v: RatExpr) {
        let c = self.cols();
        self.m[k * c + i] = v;
    }

    pub fn column(&self, i: usize) -> Vector {
        (0..self.rows()).map(|k| self.get(k, i).clone()).collect()
    }

    pub fn entries(&self) -> &[RatExpr] {
        &self.m
    }

    pub fn apply(&self, x: &[RatExpr]) -> Vector {
        let mut out = vec![RatExpr::zero(); self.rows()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                let c = self.get(k, i);
                if !c.is_zero() {
                    *o = &*o + &(c * xi);
                }
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if other.rows() != self.cols() {
            return Err(Error::DimensionMismatch("composition".into()));
        }
        let cols: Vec<Vector> = (0..other.cols()).map(|i| self.apply(&other.column(i))).collect();
        LinearMap::from_columns(&other.dom, &self.cod, &cols)
    }

    pub fn sub(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::DimensionMismatch("difference".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.m.iter_mut().zip(&other.m) {
            *a = &*a - b;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &RatExpr) -> LinearMap {
        LinearMap { dom: self.dom.clone(), cod: self.cod.clone(), m: self.m.iter().map(|x| x * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        vec_is_zero(&self.m)
    }

    /// Cells that would make the map odd-to-even or even-to-odd.
    pub fn parity_violations(&self, parity: u8) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for k in 0..self.rows() {
            for i in 0..self.cols() {
                if (self.cod.parity(k) + self.dom.parity(i) + parity) % 2 != 0 && !self.get(k, i).is_zero() {
                    out.push((k, i));
                }
            }
        }
        out
    }

    pub fn is_even(&self) -> bool {
        self.parity_violations(0).is_empty()
    }

    /// Report listing every nonzero entry outside the parity blocks.
    pub fn check_even(&self) -> CheckReport {
        let start = Instant::now();
        let mut rep = ReportBuilder::new();
        rep.count_many(self.rows() * self.cols());
        for (k, i) in self.parity_violations(0) {
            rep.fail("even", vec![k + 1, i + 1], self.get(k, i).to_string());
        }
        rep.finish(start.elapsed())
    }

    pub fn substitute(&self, map: &HashMap<Symbol, RatExpr>) -> Result<LinearMap> {
        let m = self.m.iter().map(|e| e.substitute(map)).collect::<Result<_>>()?;
        Ok(LinearMap { dom: self.dom.clone(), cod: self.cod.clone(), m })
    }

    /// `A + V -> A + V` built from a block `V -> A` (zero on `A`).
    pub fn lift_into_sum(&self, a: &GradedBasis, v: &GradedBasis) -> LinearMap {
        let sum = a.concat(v);
        let n = a.dim();
        let mut out = LinearMap::zero(&sum, &sum);
        for k in 0..self.rows() {
            for i in 0..self.cols() {
                out.set(k, n + i, self.get(k, i).clone());
            }
        }
        out
    }

    /// Block-diagonal `self ⊕ other` on `A + V`.
    pub fn direct_sum(&self, other: &LinearMap) -> LinearMap {
        let sum_dom = self.dom.concat(&other.dom);
        let sum_cod = self.cod.concat(&other.cod);
        let mut out = LinearMap::zero(&sum_dom, &sum_cod);
        for k in 0..self.rows() {
            for i in 0..self.cols() {
                out.set(k, i, self.get(k, i).clone());
            }
        }
        for k in 0..other.rows() {
            for i in 0..other.cols() {
                out.set(self.rows() + k, self.cols() + i, other.get(k, i).clone());
            }
        }
        out
    }
}

impl fmt::Display for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.cols() {
            writeln!(f, "{} -> {}", self.dom.names()[i], crate::structures::render_vector(&self.column(i), self.cod.names()))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Adjoint,
}

/// Multiplication operator by a basis element: `y -> x y` (left),
/// `y -> (-1)^{|x||y|} y x` (right) or `y -> [x, y]` (adjoint, Lie only).
pub fn mult_operator(alg: &SuperAlgebra, side: Side, x: usize) -> Result<LinearMap> {
    mult_operator_on(alg, 0, side, x)
}

/// As [`mult_operator`] for a chosen product table.
pub fn mult_operator_on(alg: &SuperAlgebra, which: usize, side: Side, x: usize) -> Result<LinearMap> {
    if side == Side::Adjoint && alg.kind != Kind::Lie {
        return Err(Error::KindMismatch("the adjoint operator needs a Lie superalgebra".into()));
    }
    let t = &alg.tables[which];
    let n = alg.dim();
    let cols: Vec<Vector> = (0..n)
        .map(|y| match side {
            Side::Left | Side::Adjoint => t.column(x, y).to_vec(),
            Side::Right => crate::structures::vec_signed(t.column(y, x), sign(alg.parity(x), alg.parity(y))),
        })
        .collect();
    LinearMap::from_columns(&alg.basis, &alg.basis, &cols)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    RotaBaxter,
    OOperator,
    ExtendedOOperator,
    ModuleRb,
    Morphism,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::RotaBaxter => "rota-baxter",
            Role::OOperator => "o-operator",
            Role::ExtendedOOperator => "extended-o-operator",
            Role::ModuleRb => "module-rb",
            Role::Morphism => "morphism",
        }
    }
}

impl FromStr for Role {
    type Err = Error;
    fn from_str(s: &str) -> Result<Role> {
        match s.trim() {
            "rota-baxter" | "rb" => Ok(Role::RotaBaxter),
            "o-operator" => Ok(Role::OOperator),
            "extended-o-operator" => Ok(Role::ExtendedOOperator),
            "module-rb" => Ok(Role::ModuleRb),
            "morphism" => Ok(Role::Morphism),
            other => Err(Error::Input(format!("unknown role `{}`", other))),
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A parameterized operator, e.g. one row of a classification table.
#[derive(Clone, Debug)]
pub struct OperatorFamily {
    pub id: String,
    pub algebra: String,
    pub role: Role,
    pub weight: Scalar,
    pub map: EvenMap,
    /// `T'` for extended O-operators.
    pub modification: Option<EvenMap>,
    /// `R_V` for Rota-Baxter operators on modules.
    pub module_map: Option<EvenMap>,
    pub parameters: Vec<Symbol>,
    /// Expressions asserted to be nonzero.
    pub constraints: Vec<RatExpr>,
    /// Cells `(row, column)` from which each parameter can be read off.
    pub pivots: Vec<(Symbol, (usize, usize))>,
    pub note: String,
}

impl OperatorFamily {
    pub fn rota_baxter(id: &str, alg: &SuperAlgebra, map: EvenMap) -> Self {
        let parameters: Vec<Symbol> = {
            let mut s = std::collections::BTreeSet::new();
            for e in map.entries() {
                s.extend(e.symbols());
            }
            s.into_iter().filter(|p| !alg.parameters.contains(p)).collect()
        };
        let mut fam = OperatorFamily {
            id: id.to_string(),
            algebra: alg.name.clone(),
            role: Role::RotaBaxter,
            weight: Scalar::zero(),
            map,
            modification: None,
            module_map: None,
            parameters,
            constraints: Vec::new(),
            pivots: Vec::new(),
            note: String::new(),
        };
        fam.pivots = fam.derive_pivots(&alg.parameters);
        fam
    }

    /// Cells whose entry is `s * p` with `s` free of family parameters.
    pub fn derive_pivots(&self, structure: &[Symbol]) -> Vec<(Symbol, (usize, usize))> {
        let _ = structure;
        let mut out = Vec::new();
        for p in &self.parameters {
            'cells: for k in 0..self.map.rows() {
                for i in 0..self.map.cols() {
                    let e = self.map.get(k, i);
                    let Some(poly) = e.as_poly() else { continue };
                    let coeffs = poly.coefficients_in(p);
                    if coeffs.len() != 1 || !coeffs.contains_key(&1) {
                        continue;
                    }
                    let s = &coeffs[&1];
                    if s.symbols().iter().any(|q| self.parameters.contains(q)) {
                        continue;
                    }
                    out.push((p.clone(), (k, i)));
                    break 'cells;
                }
            }
        }
        out
    }

    pub fn pivots_cover_parameters(&self) -> bool {
        self.parameters.iter().all(|p| self.pivots.iter().any(|(q, _)| q == p))
    }

    /// Rename parameters (used to check that verdicts do not depend on names).
    pub fn renamed(&self, rename: &HashMap<Symbol, Symbol>) -> Result<OperatorFamily> {
        let subst: HashMap<Symbol, RatExpr> =
            rename.iter().map(|(a, b)| (a.clone(), RatExpr::var(b.name()))).collect();
        let mut out = self.clone();
        out.map = self.map.substitute(&subst)?;
        if let Some(m) = &self.modification {
            out.modification = Some(m.substitute(&subst)?);
        }
        if let Some(m) = &self.module_map {
            out.module_map = Some(m.substitute(&subst)?);
        }
        out.parameters = self.parameters.iter().map(|p| rename.get(p).cloned().unwrap_or_else(|| p.clone())).collect();
        out.constraints = self.constraints.iter().map(|c| c.substitute(&subst)).collect::<Result<_>>()?;
        out.pivots = self
            .pivots
            .iter()
            .map(|(p, cell)| (rename.get(p).cloned().unwrap_or_else(|| p.clone()), *cell))
            .collect();
        Ok(out)
    }
}
