//! Derived structures: sub-adjacent brackets, pre-Lie and L-dendriform products
//! from Rota-Baxter and O-operators, induced modules and transferred O-operators.
//!
//! Every construction is a product formula evaluated in an ambient algebra (the
//! algebra itself, or `A + V` with the operator extended by zero or by `R_V`) and
//! then restricted to the relevant subspace. Outputs are always re-checked.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exactmath::{Scalar, Symbol};
use crate::operators::{check_o_operator, check_rb, check_rb_on_module, EvenMap, LinearMap, OperatorFamily};
use crate::structures::{
    check_axioms, check_module, semidirect, sign, vec_add, vec_signed, vec_sub, ActionTable, CheckReport, GradedBasis, Kind,
    ModuleData, StructureTable, SuperAlgebra, Vector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstructionId {
    CommutatorLie,
    AssocRbToPrelie0,
    AssocRbToPrelieM1,
    AssocRbToLieM1,
    LieadmRbToPrelie,
    PrelieRbToPrelie,
    LieOopToPrelieOnModule,
    AssocOopToLdendOnModule,
    PrelieOopToLdendOnModule,
    RbToLdend,
    LdendToPrelieVertical,
    LdendToPrelieHorizontal,
    LdendToLie,
    TransferOopPrelieToLie,
    TransferOopLdendToAssoc,
    TransferOopLdendToPrelie,
    InducedModuleLieToPrelie,
    InducedModuleAssocToLdend,
    InducedModulePrelieToLdend,
}

impl ConstructionId {
    pub const ALL: [ConstructionId; 19] = [
        ConstructionId::CommutatorLie,
        ConstructionId::AssocRbToPrelie0,
        ConstructionId::AssocRbToPrelieM1,
        ConstructionId::AssocRbToLieM1,
        ConstructionId::LieadmRbToPrelie,
        ConstructionId::PrelieRbToPrelie,
        ConstructionId::LieOopToPrelieOnModule,
        ConstructionId::AssocOopToLdendOnModule,
        ConstructionId::PrelieOopToLdendOnModule,
        ConstructionId::RbToLdend,
        ConstructionId::LdendToPrelieVertical,
        ConstructionId::LdendToPrelieHorizontal,
        ConstructionId::LdendToLie,
        ConstructionId::TransferOopPrelieToLie,
        ConstructionId::TransferOopLdendToAssoc,
        ConstructionId::TransferOopLdendToPrelie,
        ConstructionId::InducedModuleLieToPrelie,
        ConstructionId::InducedModuleAssocToLdend,
        ConstructionId::InducedModulePrelieToLdend,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstructionId::CommutatorLie => "commutator_lie",
            ConstructionId::AssocRbToPrelie0 => "assoc_rb_to_prelie_0",
            ConstructionId::AssocRbToPrelieM1 => "assoc_rb_to_prelie_m1",
            ConstructionId::AssocRbToLieM1 => "assoc_rb_to_lie_m1",
            ConstructionId::LieadmRbToPrelie => "lieadm_rb_to_prelie",
            ConstructionId::PrelieRbToPrelie => "prelie_rb_to_prelie",
            ConstructionId::LieOopToPrelieOnModule => "lie_oop_to_prelie_on_module",
            ConstructionId::AssocOopToLdendOnModule => "assoc_oop_to_ldend_on_module",
            ConstructionId::PrelieOopToLdendOnModule => "prelie_oop_to_ldend_on_module",
            ConstructionId::RbToLdend => "rb_to_ldend",
            ConstructionId::LdendToPrelieVertical => "ldend_to_prelie_vertical",
            ConstructionId::LdendToPrelieHorizontal => "ldend_to_prelie_horizontal",
            ConstructionId::LdendToLie => "ldend_to_lie",
            ConstructionId::TransferOopPrelieToLie => "transfer_oop_prelie_to_lie",
            ConstructionId::TransferOopLdendToAssoc => "transfer_oop_ldend_to_assoc",
            ConstructionId::TransferOopLdendToPrelie => "transfer_oop_ldend_to_prelie",
            ConstructionId::InducedModuleLieToPrelie => "induced_module_lie_to_prelie",
            ConstructionId::InducedModuleAssocToLdend => "induced_module_assoc_to_ldend",
            ConstructionId::InducedModulePrelieToLdend => "induced_module_prelie_to_ldend",
        }
    }
}

impl fmt::Display for ConstructionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConstructionId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ConstructionId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown construction `{}`", s)))
    }
}

/// Result of a construction: the derived algebra, an optional derived module,
/// and the report of the checks run on them.
#[derive(Clone, Debug)]
pub struct Derived {
    pub algebra: SuperAlgebra,
    pub module: Option<ModuleData>,
    pub report: CheckReport,
}

fn require(report: CheckReport, what: &str) -> Result<()> {
    if report.passed() {
        return Ok(());
    }
    let w = report.first().map(|w| format!("{} at {:?}: {}", w.identity, w.indices, w.residual)).unwrap_or_default();
    Err(Error::Input(format!("{} does not hold ({})", what, w)))
}

/// A theorem that fails on inputs satisfying its hypotheses points at a bug here.
fn ensure(report: CheckReport, what: &str) -> Result<CheckReport> {
    if report.passed() {
        return Ok(report);
    }
    let w = report.first().map(|w| format!("{} at {:?}: {}", w.identity, w.indices, w.residual)).unwrap_or_default();
    Err(Error::Internal(format!("{} fails on valid input ({})", what, w)))
}

fn ensure_kind(alg: &SuperAlgebra, kinds: &[Kind]) -> Result<()> {
    if kinds.contains(&alg.kind) {
        return Ok(());
    }
    let names: Vec<&str> = kinds.iter().map(|k| k.name()).collect();
    Err(Error::KindMismatch(format!("expected {}, got {}", names.join(" or "), alg.kind)))
}

/// Product formulas, evaluated on basis pairs of an ambient algebra.
#[derive(Clone, Copy, Debug)]
enum Formula {
    /// `x y - s y x`
    Commutator,
    /// `R(x) y - s y R(x)`
    RbCommutator,
    /// `R(x) y - s y R(x) - x y`
    RbCommutatorShifted,
    /// `R(x) y - s y R(x) - x y + x R(y) - s R(y) x + s y x`
    SixTerm,
    /// `R(x) y` (table 0 of the ambient algebra)
    LeftR,
    /// `x R(y)`
    RightR,
    /// `-s y R(x)`
    NegSwapRightR,
}

fn tabulate(amb: &SuperAlgebra, which: usize, r: Option<&LinearMap>, f: Formula) -> StructureTable {
    let n = amb.dim();
    let t = &amb.tables[which];
    let mut out = StructureTable::zero(n);
    let col = |i: usize| r.map(|r| r.column(i)).unwrap_or_else(|| vec![crate::exactmath::RatExpr::zero(); n]);
    for i in 0..n {
        for j in 0..n {
            let s = sign(amb.parity(i), amb.parity(j));
            let (ei, ej) = (amb.unit(i), amb.unit(j));
            let v: Vector = match f {
                Formula::Commutator => vec_sub(t.column(i, j), &vec_signed(t.column(j, i), s)),
                Formula::RbCommutator => vec_sub(&t.apply(&col(i), &ej), &vec_signed(&t.apply(&ej, &col(i)), s)),
                Formula::RbCommutatorShifted => {
                    let base = vec_sub(&t.apply(&col(i), &ej), &vec_signed(&t.apply(&ej, &col(i)), s));
                    vec_sub(&base, t.column(i, j))
                }
                Formula::SixTerm => {
                    let a = vec_sub(&t.apply(&col(i), &ej), &vec_signed(&t.apply(&ej, &col(i)), s));
                    let a = vec_sub(&a, t.column(i, j));
                    let b = vec_sub(&t.apply(&ei, &col(j)), &vec_signed(&t.apply(&col(j), &ei), s));
                    vec_add(&vec_add(&a, &b), &vec_signed(t.column(j, i), s))
                }
                Formula::LeftR => t.apply(&col(i), &ej),
                Formula::RightR => t.apply(&ei, &col(j)),
                Formula::NegSwapRightR => vec_signed(&t.apply(&ej, &col(i)), -s),
            };
            out.set_column(i, j, &v);
        }
    }
    out
}

/// Restrict a table on an ambient basis to the block `[off, off + m)`.
fn restrict(t: &StructureTable, off: usize, m: usize) -> Result<StructureTable> {
    let mut out = StructureTable::zero(m);
    for a in 0..m {
        for b in 0..m {
            let col = t.column(off + a, off + b);
            for (k, c) in col.iter().enumerate() {
                let inside = k >= off && k < off + m;
                if inside {
                    out.set(a, b, k - off, c.clone());
                } else if !c.is_zero() {
                    return Err(Error::Internal("derived product leaves the subspace".into()));
                }
            }
        }
    }
    Ok(out)
}

/// The parameters of `alg` together with any other symbol appearing in `maps`.
fn merged_parameters(alg: &SuperAlgebra, maps: &[&LinearMap]) -> Vec<Symbol> {
    let mut out = alg.parameters.clone();
    let mut extra = BTreeSet::new();
    for m in maps {
        for e in m.entries() {
            extra.extend(e.symbols());
        }
    }
    for s in extra {
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

fn derived_algebra(
    name: String,
    kind: Kind,
    basis: GradedBasis,
    tables: Vec<StructureTable>,
    like: &SuperAlgebra,
    maps: &[&LinearMap],
) -> Result<SuperAlgebra> {
    let params = merged_parameters(like, maps);
    Ok(SuperAlgebra::new(&name, kind, basis, tables)?
        .with_field(like.field.clone())
        .with_parameters(params, like.constraints.clone()))
}

fn finish(alg: SuperAlgebra, module: Option<ModuleData>, pre: Vec<CheckReport>, what: &str) -> Result<Derived> {
    let mut parts = pre;
    parts.push(ensure(check_axioms(&alg), what)?);
    if let Some(m) = &module {
        parts.push(ensure(check_module(&alg, m)?, &format!("{} module", what))?);
    }
    Ok(Derived { algebra: alg, module, report: CheckReport::merge(parts) })
}

/// `[x, y] = x∘y - (-1)^{|x||y|} y∘x` for pre-Lie, associative and Lie-admissible tables.
pub fn commutator_lie(alg: &SuperAlgebra) -> Result<Derived> {
    ensure_kind(alg, &[Kind::PreLie, Kind::Associative])?;
    let pre = check_axioms(alg);
    require(pre.clone(), &format!("{} axioms", alg.kind))?;
    let t = tabulate(alg, 0, None, Formula::Commutator);
    let out = derived_algebra(format!("{}.commutator", alg.name), Kind::Lie, alg.basis.clone(), vec![t], alg, &[])?;
    finish(out, None, vec![pre], "sub-adjacent Lie bracket")
}

/// Weight conventions for associative Rota-Baxter inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssocMode {
    /// `x∘y = R(x)y - (-1)^{|x||y|} y R(x)`, `R` of weight 0.
    Weight0,
    /// `x∘y = R(x)y - (-1)^{|x||y|} y R(x) - xy`, `R` with
    /// `R(x)R(y) = R(R(x)y + xR(y) - xy)`.
    WeightMinusOne,
}

impl AssocMode {
    /// The weight in the `R(x)R(y) = R(R(x)y + xR(y) + λxy)` convention.
    pub fn canonical_weight(self) -> Scalar {
        match self {
            AssocMode::Weight0 => Scalar::zero(),
            AssocMode::WeightMinusOne => Scalar::int(-1),
        }
    }
}

fn require_rb(alg: &SuperAlgebra, r: &EvenMap, weight: &Scalar) -> Result<CheckReport> {
    let rep = check_rb(alg, r, weight)?;
    if !rep.passed() {
        let w = rep.first().map(|w| format!("{} at {:?}: {}", w.identity, w.indices, w.residual)).unwrap_or_default();
        return Err(Error::WeightMismatch(format!("not a Rota-Baxter operator of weight {} ({})", weight, w)));
    }
    Ok(rep)
}

pub fn assoc_rb_to_prelie(alg: &SuperAlgebra, r: &EvenMap, mode: AssocMode) -> Result<Derived> {
    ensure_kind(alg, &[Kind::Associative])?;
    require(check_axioms(alg), "associativity")?;
    let pre = require_rb(alg, r, &mode.canonical_weight())?;
    let f = match mode {
        AssocMode::Weight0 => Formula::RbCommutator,
        AssocMode::WeightMinusOne => Formula::RbCommutatorShifted,
    };
    let t = tabulate(alg, 0, Some(r), f);
    let suffix = if mode == AssocMode::Weight0 { "prelie0" } else { "prelie1" };
    let out = derived_algebra(format!("{}.{}", alg.name, suffix), Kind::PreLie, alg.basis.clone(), vec![t], alg, &[r])?;
    finish(out, None, vec![pre], "pre-Lie product from an associative Rota-Baxter operator")
}

/// Six-term bracket; `R` must satisfy the same identity as for
/// [`AssocMode::WeightMinusOne`], and does so again on the output.
pub fn assoc_rb_to_lie_m1(alg: &SuperAlgebra, r: &EvenMap) -> Result<Derived> {
    ensure_kind(alg, &[Kind::Associative])?;
    require(check_axioms(alg), "associativity")?;
    let w = AssocMode::WeightMinusOne.canonical_weight();
    let pre = require_rb(alg, r, &w)?;
    let t = tabulate(alg, 0, Some(r), Formula::SixTerm);
    let out = derived_algebra(format!("{}.lie1", alg.name), Kind::Lie, alg.basis.clone(), vec![t], alg, &[r])?;
    let again = ensure(check_rb(&out, r, &w)?, "Rota-Baxter identity on the six-term bracket")?;
    finish(out, None, vec![pre, again], "six-term bracket")
}

/// `x∗y = [R(x), y]` in the commutator bracket of a Lie-admissible table.
pub fn lieadm_rb_to_prelie(alg: &SuperAlgebra, r: &EvenMap) -> Result<Derived> {
    ensure_kind(alg, &[Kind::Associative])?;
    let lie = tabulate(alg, 0, None, Formula::Commutator);
    let lie = SuperAlgebra::new(&format!("{}.commutator", alg.name), Kind::Lie, alg.basis.clone(), vec![lie])?;
    let adm = check_axioms(&lie);
    if !adm.passed() {
        return Err(Error::NotLieAdmissible);
    }
    let pre = require_rb(alg, r, &Scalar::zero())?;
    let t = tabulate(&lie, 0, Some(r), Formula::LeftR);
    let out = derived_algebra(format!("{}.prelie", alg.name), Kind::PreLie, alg.basis.clone(), vec![t], alg, &[r])?;
    finish(out, None, vec![adm, pre], "pre-Lie product from a Lie-admissible Rota-Baxter operator")
}

/// `x∗y = R(x)∘y - (-1)^{|x||y|} y∘R(x)`; `R` stays a weight-zero operator on the output.
pub fn prelie_rb_to_prelie(alg: &SuperAlgebra, r: &EvenMap) -> Result<Derived> {
    ensure_kind(alg, &[Kind::PreLie])?;
    require(check_axioms(alg), "pre-Lie identity")?;
    let pre = require_rb(alg, r, &Scalar::zero())?;
    let t = tabulate(alg, 0, Some(r), Formula::RbCommutator);
    let out = derived_algebra(format!("{}.star", alg.name), Kind::PreLie, alg.basis.clone(), vec![t], alg, &[r])?;
    let again = ensure(check_rb(&out, r, &Scalar::zero())?, "Rota-Baxter identity on the new product")?;
    finish(out, None, vec![pre, again], "pre-Lie product from a pre-Lie Rota-Baxter operator")
}

/// Apply L-dendriform formulas `(▷, ◁)` in an ambient algebra.
fn ldend_tables(amb: &SuperAlgebra, r: &LinearMap) -> Result<Vec<StructureTable>> {
    match amb.kind {
        Kind::Associative => Ok(vec![tabulate(amb, 0, Some(r), Formula::LeftR), tabulate(amb, 0, Some(r), Formula::RightR)]),
        Kind::PreLie => Ok(vec![tabulate(amb, 0, Some(r), Formula::LeftR), tabulate(amb, 0, Some(r), Formula::NegSwapRightR)]),
        other => Err(Error::KindMismatch(format!("L-dendriform products come from associative or pre-Lie inputs, got {}", other))),
    }
}

/// `x▷y = R(x)y, x◁y = xR(y)` (associative) or `x▷y = R(x)∘y, x◁y = -(-1)^{|x||y|} y∘R(x)` (pre-Lie).
pub fn rb_to_ldend(alg: &SuperAlgebra, r: &EvenMap) -> Result<Derived> {
    ensure_kind(alg, &[Kind::Associative, Kind::PreLie])?;
    require(check_axioms(alg), &format!("{} axioms", alg.kind))?;
    let pre = require_rb(alg, r, &Scalar::zero())?;
    let tables = ldend_tables(alg, r)?;
    let out = derived_algebra(format!("{}.ldend", alg.name), Kind::LDendriform, alg.basis.clone(), tables, alg, &[r])?;
    finish(out, None, vec![pre], "L-dendriform products from a Rota-Baxter operator")
}

/// Ambient algebra `A + V` (no internal product) and `T` extended by zero on `A`.
fn oop_ambient(alg: &SuperAlgebra, module: &ModuleData, t: &EvenMap) -> Result<(SuperAlgebra, LinearMap, CheckReport)> {
    let pre = check_o_operator(alg, module, t, &Scalar::zero())?;
    require(pre.clone(), "O-operator identity")?;
    let sd = semidirect(alg, &module.clone().without_product())?;
    let n = alg.dim();
    let vb = GradedBasis::new(sd.basis.names()[n..].to_vec(), sd.basis.parities()[n..].to_vec())?;
    let that = t.lift_into_sum(&alg.basis, &vb);
    Ok((sd, that, pre))
}

/// `u∘v = ρ(T(u))v` on a Lie module.
pub fn lie_oop_to_prelie_on_module(alg: &SuperAlgebra, module: &ModuleData, t: &EvenMap) -> Result<Derived> {
    ensure_kind(alg, &[Kind::Lie])?;
    let (sd, that, pre) = oop_ambient(alg, module, t)?;
    let n = alg.dim();
    let table = restrict(&tabulate(&sd, 0, Some(&that), Formula::LeftR), n, module.dim())?;
    let out = derived_algebra(format!("{}.prelie", module.name), Kind::PreLie, module.basis.clone(), vec![table], alg, &[t])?;
    finish(out, None, vec![pre], "pre-Lie product from a Lie O-operator")
}

/// `u▷v = l(T(u))v, u◁v = (-1)^{|u||v|} r(T(v))u` on an associative bimodule.
pub fn assoc_oop_to_ldend_on_module(alg: &SuperAlgebra, module: &ModuleData, t: &EvenMap) -> Result<Derived> {
    ensure_kind(alg, &[Kind::Associative])?;
    let (sd, that, pre) = oop_ambient(alg, module, t)?;
    let n = alg.dim();
    let tables = ldend_tables(&sd, &that)?.iter().map(|x| restrict(x, n, module.dim())).collect::<Result<_>>()?;
    let out = derived_algebra(format!("{}.ldend", module.name), Kind::LDendriform, module.basis.clone(), tables, alg, &[t])?;
    finish(out, None, vec![pre], "L-dendriform products from an associative O-operator")
}

/// `u▷v = l(T(u))v, u◁v = -r(T(u))v` on a pre-Lie bimodule, with the vertical
/// pre-Lie product on `V` and the check that `T` is a homomorphism into `A`.
pub fn prelie_oop_to_ldend_on_module(alg: &SuperAlgebra, module: &ModuleData, t: &EvenMap) -> Result<(Derived, CheckReport)> {
    ensure_kind(alg, &[Kind::PreLie])?;
    let (sd, that, pre) = oop_ambient(alg, module, t)?;
    let n = alg.dim();
    let tables: Vec<StructureTable> =
        ldend_tables(&sd, &that)?.iter().map(|x| restrict(x, n, module.dim())).collect::<Result<_>>()?;
    let out = derived_algebra(format!("{}.ldend", module.name), Kind::LDendriform, module.basis.clone(), tables, alg, &[t])?;
    let derived = finish(out, None, vec![pre], "L-dendriform products from a pre-Lie O-operator")?;
    let vertical = ldend_to_prelie(&derived.algebra, Associated::Vertical)?;
    let hom = ensure(homomorphism_report(t, &vertical.algebra, alg), "O-operator as a homomorphism")?;
    let report = CheckReport::merge([derived.report.clone(), vertical.report, hom.clone()]);
    Ok((Derived { report, ..derived }, hom))
}

/// `T(u∘v) = T(u)∘T(v)` on basis pairs.
fn homomorphism_report(t: &LinearMap, src: &SuperAlgebra, dst: &SuperAlgebra) -> CheckReport {
    let start = std::time::Instant::now();
    let mut rep = crate::structures::ReportBuilder::new();
    for a in 0..src.dim() {
        for b in 0..src.dim() {
            rep.count();
            let lhs = t.apply(src.table().column(a, b));
            let rhs = dst.table().apply(&t.column(a), &t.column(b));
            let res = vec_sub(&lhs, &rhs);
            if !crate::structures::vec_is_zero(&res) {
                rep.fail("homomorphism", vec![a + 1, b + 1], dst.render(&res));
            }
        }
    }
    rep.finish(start.elapsed())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Associated {
    /// `x∘y = x▷y - (-1)^{|x||y|} y◁x`
    Vertical,
    /// `x•y = x▷y + x◁y`
    Horizontal,
}

fn ldend_combined(alg: &SuperAlgebra, which: Associated) -> StructureTable {
    let n = alg.dim();
    let (r, l) = (&alg.tables[0], &alg.tables[1]);
    let mut out = StructureTable::zero(n);
    for i in 0..n {
        for j in 0..n {
            let v = match which {
                Associated::Vertical => vec_sub(r.column(i, j), &vec_signed(l.column(j, i), sign(alg.parity(i), alg.parity(j)))),
                Associated::Horizontal => vec_add(r.column(i, j), l.column(i, j)),
            };
            out.set_column(i, j, &v);
        }
    }
    out
}

pub fn ldend_to_prelie(alg: &SuperAlgebra, which: Associated) -> Result<Derived> {
    ensure_kind(alg, &[Kind::LDendriform])?;
    let pre = check_axioms(alg);
    require(pre.clone(), "L-dendriform identities")?;
    let t = ldend_combined(alg, which);
    let suffix = if which == Associated::Vertical { "vertical" } else { "horizontal" };
    let out = derived_algebra(format!("{}.{}", alg.name, suffix), Kind::PreLie, alg.basis.clone(), vec![t], alg, &[])?;
    finish(out, None, vec![pre], "associated pre-Lie product")
}

/// `[x,y] = x▷y + x◁y - (-1)^{|x||y|}(y▷x + y◁x)`.
pub fn ldend_to_lie(alg: &SuperAlgebra) -> Result<Derived> {
    ensure_kind(alg, &[Kind::LDendriform])?;
    let pre = check_axioms(alg);
    require(pre.clone(), "L-dendriform identities")?;
    let h = ldend_combined(alg, Associated::Horizontal);
    let tmp = SuperAlgebra::new("tmp", Kind::PreLie, alg.basis.clone(), vec![h])?;
    let t = tabulate(&tmp, 0, None, Formula::Commutator);
    let out = derived_algebra(format!("{}.lie", alg.name), Kind::Lie, alg.basis.clone(), vec![t], alg, &[])?;
    finish(out, None, vec![pre], "sub-adjacent Lie bracket of an L-dendriform superalgebra")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transfer {
    /// Pre-Lie bimodule `(l, r)` to the Lie module `ρ = l - r` of the sub-adjacent bracket.
    PrelieToLie,
    /// L-dendriform bimodule to `(l▷ + l◁, r▷ + r◁)` over `x▷y + x◁y`.
    LdendToAssoc,
    /// L-dendriform bimodule to `(l▷ - r◁, r▷ - l◁)` over the vertical pre-Lie product.
    LdendToPrelie,
}

/// The target algebra and module of a transfer.
pub fn transfer_target(alg: &SuperAlgebra, module: &ModuleData, which: Transfer) -> Result<(SuperAlgebra, ModuleData)> {
    let sum = |a: &ActionTable, b: &ActionTable| a.add_scaled(b, |_, _| 1);
    let diff = |a: &ActionTable, b: &ActionTable| a.add_scaled(b, |_, _| -1);
    match which {
        Transfer::PrelieToLie => {
            ensure_kind(alg, &[Kind::PreLie])?;
            let target = commutator_lie(alg)?.algebra;
            let rho = diff(&module.left[0], &module.right[0]);
            Ok((target, ModuleData { name: format!("{}.lie", module.name), kind: Kind::Lie, basis: module.basis.clone(), left: vec![rho], right: vec![], internal: None }))
        }
        Transfer::LdendToAssoc => {
            ensure_kind(alg, &[Kind::LDendriform])?;
            let t = ldend_combined(alg, Associated::Horizontal);
            let target = derived_algebra(format!("{}.assoc", alg.name), Kind::Associative, alg.basis.clone(), vec![t], alg, &[])?;
            require(check_axioms(&target), "associativity of x▷y + x◁y")?;
            let l = sum(&module.left[0], &module.left[1]);
            let r = sum(&module.right[0], &module.right[1]);
            Ok((target, ModuleData { name: format!("{}.assoc", module.name), kind: Kind::Associative, basis: module.basis.clone(), left: vec![l], right: vec![r], internal: None }))
        }
        Transfer::LdendToPrelie => {
            ensure_kind(alg, &[Kind::LDendriform])?;
            let target = ldend_to_prelie(alg, Associated::Vertical)?.algebra;
            let l = diff(&module.left[0], &module.right[1]);
            let r = diff(&module.right[0], &module.left[1]);
            Ok((target, ModuleData { name: format!("{}.prelie", module.name), kind: Kind::PreLie, basis: module.basis.clone(), left: vec![l], right: vec![r], internal: None }))
        }
    }
}

/// The module actions as literally displayed for the L-dendriform to pre-Lie
/// transfer, `l' = l▷ + (-1)^{|x||v|} r◁` and `r' = l◁ + r▷`.
pub fn transfer_ldend_to_prelie_literal(alg: &SuperAlgebra, module: &ModuleData) -> Result<(SuperAlgebra, ModuleData)> {
    ensure_kind(alg, &[Kind::LDendriform])?;
    let target = ldend_to_prelie(alg, Associated::Vertical)?.algebra;
    let l = module.left[0].add_scaled(&module.right[1], |i, a| sign(alg.parity(i), module.parity(a)));
    let r = module.left[1].add_scaled(&module.right[0], |_, _| 1);
    Ok((target, ModuleData { name: format!("{}.prelie", module.name), kind: Kind::PreLie, basis: module.basis.clone(), left: vec![l], right: vec![r], internal: None }))
}

/// Re-run the O-operator check of `T` on the transferred module.
pub fn transfer_oop(alg: &SuperAlgebra, module: &ModuleData, t: &EvenMap, which: Transfer) -> Result<Derived> {
    let src = check_module(alg, module)?;
    require(src.clone(), "source module axioms")?;
    let pre = check_o_operator(alg, module, t, &Scalar::zero())?;
    require(pre.clone(), "O-operator identity on the source")?;
    let (target, tmod) = transfer_target(alg, module, which)?;
    let modrep = check_module(&target, &tmod)?;
    let rep = check_o_operator(&target, &tmod, t, &Scalar::zero())?;
    Ok(Derived { algebra: target, module: Some(tmod), report: CheckReport::merge([src, pre, modrep, rep]) })
}

/// Read the actions of `A` on `V` off mixed products of an algebra on `A + V`.
fn extract_module(amb: &SuperAlgebra, n: usize, basis: &GradedBasis, name: String) -> Result<ModuleData> {
    let m = basis.dim();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for t in &amb.tables {
        let mut l = ActionTable::zero(n, m);
        let mut r = ActionTable::zero(n, m);
        for i in 0..n {
            for a in 0..m {
                let s = sign(amb.parity(i), basis.parity(a));
                for (k, c) in t.column(i, n + a).iter().enumerate() {
                    if k < n && !c.is_zero() {
                        return Err(Error::Internal("induced action leaves the module".into()));
                    }
                    if k >= n {
                        l.set(i, a, k - n, c.clone());
                    }
                }
                for (k, c) in t.column(n + a, i).iter().enumerate() {
                    if k < n && !c.is_zero() {
                        return Err(Error::Internal("induced action leaves the module".into()));
                    }
                    if k >= n {
                        r.set(i, a, k - n, if s == 1 { c.clone() } else { -c });
                    }
                }
            }
        }
        left.push(l);
        right.push(r);
    }
    if amb.kind == Kind::Lie {
        right.clear();
    }
    Ok(ModuleData { name, kind: amb.kind, basis: basis.clone(), left, right, internal: None })
}

/// Derived algebra on `A` and induced actions on `V` from `R` and a module operator `R_V`.
pub fn induced_module(id: ConstructionId, alg: &SuperAlgebra, r: &EvenMap, module: &ModuleData, r_v: &EvenMap) -> Result<Derived> {
    let want = match id {
        ConstructionId::InducedModuleLieToPrelie => Kind::Lie,
        ConstructionId::InducedModuleAssocToLdend => Kind::Associative,
        ConstructionId::InducedModulePrelieToLdend => Kind::PreLie,
        other => return Err(Error::Input(format!("`{}` does not build a module", other))),
    };
    ensure_kind(alg, &[want])?;
    require(check_module(alg, module)?, "module axioms")?;
    let pre = check_rb_on_module(alg, r, module, r_v)?;
    require(pre.clone(), "Rota-Baxter identities on the module")?;
    let sd = semidirect(alg, &module.clone().without_product())?;
    let n = alg.dim();
    let mut rv = r_v.clone();
    rv.dom = GradedBasis::new(sd.basis.names()[n..].to_vec(), sd.basis.parities()[n..].to_vec())?;
    rv.cod = rv.dom.clone();
    let rhat = r.direct_sum(&rv);
    let (kind, tables) = match want {
        Kind::Lie => (Kind::PreLie, vec![tabulate(&sd, 0, Some(&rhat), Formula::LeftR)]),
        _ => (Kind::LDendriform, ldend_tables(&sd, &rhat)?),
    };
    let amb = SuperAlgebra::new("ambient", kind, sd.basis.clone(), tables.clone())?;
    let on_a: Vec<StructureTable> = tables.iter().map(|t| restrict(t, 0, n)).collect::<Result<_>>()?;
    let derived = derived_algebra(format!("{}.induced", alg.name), kind, alg.basis.clone(), on_a, alg, &[r, r_v])?;
    let induced = extract_module(&amb, n, &module.basis, format!("{}.induced", module.name))?;
    finish(derived, Some(induced), vec![pre], "induced bimodule")
}

/// For commuting weight-zero operators `R1, R2` on a pre-Lie superalgebra, check
/// `R2` on the L-dendriform structure built from `R1`.
pub fn check_commuting_rb(alg: &SuperAlgebra, r1: &EvenMap, r2: &EvenMap) -> Result<Derived> {
    ensure_kind(alg, &[Kind::PreLie])?;
    let comm = r1.compose(r2)?.sub(&r2.compose(r1)?)?;
    if !comm.is_zero() {
        return Err(Error::NotCommuting);
    }
    require_rb(alg, r2, &Scalar::zero())?;
    let ld = rb_to_ldend(alg, r1)?;
    let rep = check_rb(&ld.algebra, r2, &Scalar::zero())?;
    Ok(Derived { algebra: ld.algebra, module: None, report: CheckReport::merge([ld.report, rep]) })
}

/// What a construction needs besides the algebra.
pub fn needs(id: ConstructionId) -> (bool, bool) {
    use ConstructionId::*;
    match id {
        CommutatorLie | LdendToPrelieVertical | LdendToPrelieHorizontal | LdendToLie => (false, false),
        AssocRbToPrelie0 | AssocRbToPrelieM1 | AssocRbToLieM1 | LieadmRbToPrelie | PrelieRbToPrelie | RbToLdend => (true, false),
        _ => (true, true),
    }
}

/// Run a construction by id. `op` supplies `R` (or `T`, and `R_V` for induced
/// modules); `module` is the module for O-operator constructions.
pub fn derive(id: ConstructionId, alg: &SuperAlgebra, op: Option<&OperatorFamily>, module: Option<&ModuleData>) -> Result<Derived> {
    use ConstructionId::*;
    let (need_op, need_module) = needs(id);
    let r = match (need_op, op) {
        (true, None) => return Err(Error::Input(format!("`{}` needs an operator", id))),
        (_, op) => op.map(|o| &o.map),
    };
    let m = match (need_module, module) {
        (true, None) => return Err(Error::Input(format!("`{}` needs a module", id))),
        (_, m) => m,
    };
    match id {
        CommutatorLie => commutator_lie(alg),
        AssocRbToPrelie0 => assoc_rb_to_prelie(alg, r.unwrap(), AssocMode::Weight0),
        AssocRbToPrelieM1 => assoc_rb_to_prelie(alg, r.unwrap(), AssocMode::WeightMinusOne),
        AssocRbToLieM1 => assoc_rb_to_lie_m1(alg, r.unwrap()),
        LieadmRbToPrelie => lieadm_rb_to_prelie(alg, r.unwrap()),
        PrelieRbToPrelie => prelie_rb_to_prelie(alg, r.unwrap()),
        RbToLdend => rb_to_ldend(alg, r.unwrap()),
        LdendToPrelieVertical => ldend_to_prelie(alg, Associated::Vertical),
        LdendToPrelieHorizontal => ldend_to_prelie(alg, Associated::Horizontal),
        LdendToLie => ldend_to_lie(alg),
        LieOopToPrelieOnModule => lie_oop_to_prelie_on_module(alg, m.unwrap(), r.unwrap()),
        AssocOopToLdendOnModule => assoc_oop_to_ldend_on_module(alg, m.unwrap(), r.unwrap()),
        PrelieOopToLdendOnModule => prelie_oop_to_ldend_on_module(alg, m.unwrap(), r.unwrap()).map(|(d, _)| d),
        TransferOopPrelieToLie => transfer_oop(alg, m.unwrap(), r.unwrap(), Transfer::PrelieToLie),
        TransferOopLdendToAssoc => transfer_oop(alg, m.unwrap(), r.unwrap(), Transfer::LdendToAssoc),
        TransferOopLdendToPrelie => transfer_oop(alg, m.unwrap(), r.unwrap(), Transfer::LdendToPrelie),
        InducedModuleLieToPrelie | InducedModuleAssocToLdend | InducedModulePrelieToLdend => {
            let op = op.unwrap();
            let r_v = op.module_map.as_ref().ok_or_else(|| Error::Input(format!("`{}` needs an operator with R_V", id)))?;
            induced_module(id, alg, &op.map, m.unwrap(), r_v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::RatExpr;

    fn b21() -> SuperAlgebra {
        let mut t = StructureTable::zero(2);
        t.set(1, 1, 0, RatExpr::constant(Scalar::ratio(1, 2)));
        SuperAlgebra::new("b21", Kind::PreLie, GradedBasis::standard("e", 1, 1), vec![t]).unwrap()
    }

    fn r2(alg: &SuperAlgebra) -> EvenMap {
        let mut r = LinearMap::zero(&alg.basis, &alg.basis);
        r.set(0, 0, RatExpr::var("a1"));
        r.set(1, 1, RatExpr::var("a1").scale(&Scalar::int(2)));
        r
    }

    fn a1(c: i64) -> RatExpr {
        RatExpr::var("a1").scale(&Scalar::int(c))
    }

    #[test]
    fn ids_round_trip_through_names() {
        for id in ConstructionId::ALL {
            assert_eq!(id.name().parse::<ConstructionId>().unwrap(), id);
        }
    }

    #[test]
    fn commutator_of_odd_square() {
        let d = commutator_lie(&b21()).unwrap();
        assert_eq!(d.algebra.table().get(1, 1, 0), &RatExpr::one());
    }

    #[test]
    fn star_product_on_b21() {
        let alg = b21();
        let d = prelie_rb_to_prelie(&alg, &r2(&alg)).unwrap();
        assert_eq!(d.algebra.table().get(1, 1, 0), &a1(2));
    }

    #[test]
    fn ldend_from_b21_and_its_shadows() {
        let alg = b21();
        let ld = rb_to_ldend(&alg, &r2(&alg)).unwrap().algebra;
        assert_eq!(ld.tables[0].get(1, 1, 0), &a1(1));
        assert_eq!(ld.tables[1].get(1, 1, 0), &a1(1));
        let v = ldend_to_prelie(&ld, Associated::Vertical).unwrap().algebra;
        let h = ldend_to_prelie(&ld, Associated::Horizontal).unwrap().algebra;
        assert_eq!(v.table().get(1, 1, 0), &a1(2));
        assert_eq!(h.table().get(1, 1, 0), &a1(2));
        let lie = ldend_to_lie(&ld).unwrap().algebra;
        assert_eq!(lie.table().get(1, 1, 0), &a1(4));
    }

    #[test]
    fn non_commuting_pair_is_rejected() {
        let alg = b21();
        let mut r1 = LinearMap::zero(&alg.basis, &alg.basis);
        r1.set(0, 0, RatExpr::one());
        let mut r2 = LinearMap::zero(&alg.basis, &alg.basis);
        r2.set(1, 1, RatExpr::one());
        r2.set(0, 0, RatExpr::int(2));
        assert!(check_commuting_rb(&alg, &r1, &r1).is_ok());
        // a non-diagonal even map cannot exist in 1|1, so use a non-commuting pair on 2|0
        let basis = GradedBasis::standard("e", 2, 0);
        let alg = SuperAlgebra::new("z", Kind::PreLie, basis.clone(), vec![StructureTable::zero(2)]).unwrap();
        let mut p = LinearMap::zero(&basis, &basis);
        p.set(0, 1, RatExpr::one());
        let mut q = LinearMap::zero(&basis, &basis);
        q.set(1, 0, RatExpr::one());
        assert_eq!(check_commuting_rb(&alg, &p, &q).unwrap_err(), Error::NotCommuting);
    }

    // gl(1|1) with basis E11, E22 (even), E12, E21 (odd)
    fn gl11() -> SuperAlgebra {
        let idx = [(0, 0), (1, 1), (0, 1), (1, 0)];
        let mut t = StructureTable::zero(4);
        for (i, &(a, b)) in idx.iter().enumerate() {
            for (j, &(c, d)) in idx.iter().enumerate() {
                if b == c {
                    let k = idx.iter().position(|&p| p == (a, d)).unwrap();
                    t.set(i, j, k, RatExpr::one());
                }
            }
        }
        let names = ["E11", "E22", "E12", "E21"].iter().map(|s| s.to_string()).collect();
        SuperAlgebra::new("gl11", Kind::Associative, GradedBasis::new(names, vec![0, 0, 1, 1]).unwrap(), vec![t]).unwrap()
    }

    /// `c` times the projection onto upper triangular matrices along `E21`.
    fn scaled_projection(alg: &SuperAlgebra, c: i64) -> EvenMap {
        let mut r = LinearMap::zero(&alg.basis, &alg.basis);
        for k in 0..3 {
            r.set(k, k, RatExpr::int(c));
        }
        r
    }

    #[test]
    fn shifted_products_need_weight_minus_one() {
        let alg = gl11();
        let p = scaled_projection(&alg, 1);
        let pl = assoc_rb_to_prelie(&alg, &p, AssocMode::WeightMinusOne).unwrap();
        assert!(check_rb(&pl.algebra, &p, &Scalar::int(-1)).unwrap().passed());
        assert!(assoc_rb_to_lie_m1(&alg, &p).is_ok());
        // -P satisfies the identity with +xy instead, and the shifted product is not pre-Lie
        let q = scaled_projection(&alg, -1);
        assert!(check_rb(&alg, &q, &Scalar::one()).unwrap().passed());
        assert!(matches!(assoc_rb_to_prelie(&alg, &q, AssocMode::WeightMinusOne), Err(Error::WeightMismatch(_))));
        let t = tabulate(&alg, 0, Some(&q), Formula::RbCommutatorShifted);
        let forced = SuperAlgebra::new("forced", Kind::PreLie, alg.basis.clone(), vec![t]).unwrap();
        assert!(!check_axioms(&forced).passed());
    }

    #[test]
    fn weight_zero_on_gl11() {
        let alg = gl11();
        // R(E21) = a E12 has square-zero image
        let mut r = LinearMap::zero(&alg.basis, &alg.basis);
        r.set(2, 3, RatExpr::var("a"));
        let d = assoc_rb_to_prelie(&alg, &r, AssocMode::Weight0).unwrap();
        // E21 ∘ E21 = R(E21) E21 + E21 R(E21) = a (E11 + E22)
        assert_eq!(d.algebra.table().column(3, 3), &[RatExpr::var("a"), RatExpr::var("a"), RatExpr::zero(), RatExpr::zero()][..]);
        let ld = rb_to_ldend(&alg, &r).unwrap().algebra;
        let lie = commutator_lie(&d.algebra).unwrap().algebra;
        assert_eq!(ldend_to_lie(&ld).unwrap().algebra.tables, lie.tables);
        let zero = LinearMap::zero(&alg.basis, &alg.basis);
        assert!(assoc_rb_to_prelie(&alg, &zero, AssocMode::Weight0).unwrap().algebra.table().is_zero());
    }

    #[test]
    fn transferred_actions_on_regular_ldend_module() {
        let alg = b21();
        let ld = rb_to_ldend(&alg, &r2(&alg)).unwrap().algebra;
        let reg = ModuleData::regular(&ld);
        let mut t = LinearMap::zero(&alg.basis, &alg.basis);
        t.set(0, 0, RatExpr::var("b1"));
        t.set(1, 1, RatExpr::var("b1").scale(&Scalar::int(2)));
        assert!(transfer_oop(&ld, &reg, &t, Transfer::LdendToPrelie).unwrap().report.passed());
        assert!(transfer_oop(&ld, &reg, &t, Transfer::LdendToAssoc).unwrap().report.passed());
        let (target, literal) = transfer_ldend_to_prelie_literal(&ld, &reg).unwrap();
        let rep = check_o_operator(&target, &literal, &t, &Scalar::zero()).unwrap();
        assert_eq!(rep.first().unwrap().residual, "4*a1*b1^2 e1");
    }

    #[test]
    fn prelie_to_lie_transfer_and_induced_module() {
        let alg = b21();
        let r = r2(&alg);
        let reg = ModuleData::regular(&alg);
        assert!(transfer_oop(&alg, &reg.clone().without_product(), &r, Transfer::PrelieToLie).unwrap().report.passed());
        let d = induced_module(ConstructionId::InducedModulePrelieToLdend, &alg, &r, &reg, &r).unwrap();
        let ld = rb_to_ldend(&alg, &r).unwrap().algebra;
        assert_eq!(d.algebra.tables, ld.tables);
        // with R_V = R on the regular module the induced actions are the regular ones
        let expected = ModuleData::regular(&ld);
        let m = d.module.unwrap();
        assert_eq!(m.left, expected.left);
        assert_eq!(m.right, expected.right);
    }

    #[test]
    fn oop_on_regular_module_reproduces_rb_construction() {
        let alg = b21();
        let r = r2(&alg);
        let reg = ModuleData::regular(&alg).without_product();
        let (d, hom) = prelie_oop_to_ldend_on_module(&alg, &reg, &r).unwrap();
        assert!(hom.passed());
        assert_eq!(d.algebra.tables, rb_to_ldend(&alg, &r).unwrap().algebra.tables);
        let v = ldend_to_prelie(&d.algebra, Associated::Vertical).unwrap().algebra;
        assert_eq!(v.tables, prelie_rb_to_prelie(&alg, &r).unwrap().algebra.tables);
    }

    #[test]
    fn star_product_is_the_horizontal_one() {
        // on B_2_1 both shadows coincide; on C_1_1 they do not
        let e = crate::catalog::catalog_get("C_1_1").unwrap();
        let (alg, r) = (e.algebra(), &e.families[0].map);
        let ld = rb_to_ldend(alg, r).unwrap().algebra;
        let star = prelie_rb_to_prelie(alg, r).unwrap().algebra;
        let v = ldend_to_prelie(&ld, Associated::Vertical).unwrap().algebra;
        let h = ldend_to_prelie(&ld, Associated::Horizontal).unwrap().algebra;
        assert_eq!(h.tables, star.tables);
        assert_ne!(v.tables, star.tables);
    }
}
