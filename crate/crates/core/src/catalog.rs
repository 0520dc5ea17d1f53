//! Embedded records of the classified algebras and their weight-zero Rota-Baxter
//! families, with batch verification and an errata report.
//!
//! Every record is an algebra file (see [`crate::format`]) compiled into the
//! binary. Case splits over structure parameters are separate ids carrying pins,
//! e.g. `C_2h_1.case1` pins `h = 0`.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{RatExpr, Scalar};
use crate::format::AlgebraFile;
use crate::operators::{check_rb, verify_family, OperatorFamily};
use crate::structures::{check_axioms, CheckReport, Kind, SuperAlgebra};

macro_rules! entries {
    ($($id:literal,)*) => {
        const ENTRIES: &[(&str, &str)] = &[$(($id, include_str!(concat!("../catalog/", $id, ".salg"))),)*];
    };
}

entries! {
    "osp12",
    "B_1_1",
    "B_1_2",
    "B_1_3",
    "B_1_4",
    "B_1_5",
    "B_2_1",
    "B_2_2",
    "B_3_1",
    "B_3_2",
    "B_3_3",
    "C_1_1",
    "C_1_2.k",
    "C_1_2.km1",
    "C_1_3",
    "C_1_4",
    "C_2h_1.case1",
    "C_2h_1.case2",
    "C_2h_1.case3",
    "C_2h_2.case1",
    "C_2h_2.case2",
    "C_2h_2.case3",
    "C_2h_3.case1",
    "C_2h_3.case2",
    "C_2h_4",
    "C_2h_4.h0",
    "C_2h_5",
    "C_2h_5.h0",
    "C_2h_5.h2",
    "C_2h_6.case1",
    "C_2h_6.case2",
    "C_2h_6.case3",
    "C_2h_6.case4",
    "C_2h_6.case5",
    "C_2h_7.case1",
    "C_2h_7.case2",
    "C_2h_8",
    "C_2h_9",
    "C_2h_9.h1km1",
    "C_3_1",
    "C_3_2.case1",
    "C_3_2.case2",
    "C_3_3",
    "C_3_4",
    "C_4_1",
    "C_4_2",
    "C_4_3",
    "C_4_4",
    "C_4_5",
    "C_4_6",
    "C_5_1.k0",
    "C_5_1.k1",
    "C_5_2",
    "C_5_3",
    "C_5_4",
    "C_5_4.k0",
    "C_6_1",
    "C_6_2",
    "C_6_3",
    "C_6_4",
    "A_hat_1_1",
    "A_hat_1_2",
    "A_hat_1_3.k1k2",
    "A_hat_1_4",
    "A_hat_1_5.k1k2",
    "A_hat_1_6",
    "A_hat_2_1",
    "A_hat_2_2",
    "A_hat_2_3",
    "A_hat_2_3.k1",
    "A_hat_2_4",
    "A_hat_2_5",
    "A_hat_2_5.k0",
    "A_hat_2_6",
    "A_hat_2_7",
    "A_hat_3_1",
    "A_hat_3_2",
    "A_hat_3_3",
    "A_hat_3_4",
    "A_hat_3_5",
    "A_hat_3_6",
    "A_hat_3_7",
    "A_hat_3_8",
    "A_hat_4_1",
    "A_hat_4_2",
    "A_hat_4_3",
    "A_hat_5_1",
    "A_hat_5_2",
    "A_hat_5_3",
    "A_hat_5_4",
    "A_hat_6_1.case1",
    "A_hat_6_1.case2",
    "A_hat_6_2",
    "A_hat_6_3",
    "A_hat_7h_1",
    "A_hat_7h_1.h0",
    "A_hat_7h_2",
    "A_hat_7h_3",
    "A_hat_7h_3.h0",
    "A_hat_7h_3.h0k0",
    "A_hat_7h_3.hm12",
    "A_hat_7h_3.hm12k0",
    "A_hat_7h_3.k0",
    "A_hat_8_1",
    "A_hat_8_1.k0",
    "A_hat_9_1.k",
    "A_hat_9_1.k0",
    "A_hat_9_2",
    "A_hat_9_3",
    "A_hat_10h_1.k",
    "A_hat_10h_1.k0",
    "A_hat_10h_2",
    "A_hat_10h_3",
    "A_hat_11_1.k",
    "A_hat_11_1.k0",
    "A_hat_11_2",
    "A_hat_11_3",
}

/// One catalog record.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub file: AlgebraFile,
    pub families: Vec<OperatorFamily>,
    /// Curator note from the `[entry]` section (empty if none).
    pub note: String,
}

impl CatalogEntry {
    pub fn algebra(&self) -> &SuperAlgebra {
        &self.file.algebra
    }
}

/// Listing line for `catalog list`.
#[derive(Clone, Debug, Serialize)]
pub struct EntrySummary {
    pub id: String,
    pub kind: String,
    pub even: usize,
    pub odd: usize,
    pub families: usize,
}

/// The raw embedded text of an entry.
pub fn source(id: &str) -> Option<&'static str> {
    ENTRIES.iter().find(|(i, _)| *i == id).map(|(_, s)| *s)
}

/// All ids in catalog order.
pub fn ids() -> Vec<&'static str> {
    ENTRIES.iter().map(|(i, _)| *i).collect()
}

pub fn catalog_get(id: &str) -> Result<CatalogEntry> {
    let text = source(id).ok_or_else(|| Error::UnknownId(id.to_string()))?;
    let file = AlgebraFile::parse(text).map_err(|e| Error::Internal(format!("catalog entry {}: {}", id, e)))?;
    let families = file.operators().map_err(|e| Error::Internal(format!("catalog entry {}: {}", id, e)))?;
    let note = file.entry.get("note").cloned().unwrap_or_default();
    Ok(CatalogEntry { id: id.to_string(), file, families, note })
}

pub fn catalog_list() -> Result<Vec<EntrySummary>> {
    ENTRIES
        .iter()
        .map(|(id, _)| {
            let e = catalog_get(id)?;
            let a = e.algebra();
            Ok(EntrySummary {
                id: id.to_string(),
                kind: a.kind.name().to_string(),
                even: a.basis.even_dim(),
                odd: a.basis.odd_dim(),
                families: e.families.len(),
            })
        })
        .collect()
}

/// Ids matching a shell-style glob (`*`, `?`, `[...]`).
pub fn matching(filter: &str) -> Result<Vec<&'static str>> {
    let pat = glob::Pattern::new(filter).map_err(|e| Error::Input(format!("bad filter `{}`: {}", filter, e)))?;
    Ok(ENTRIES.iter().map(|(i, _)| *i).filter(|i| pat.matches(i)).collect())
}

/// One failed exact check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrataRecord {
    pub entry: String,
    /// Family id, or `algebra` for a failure of the algebra's own axioms.
    pub family: String,
    pub identity: String,
    pub witness: Vec<usize>,
    pub residual: String,
    pub note: String,
}

/// Verdict on one family.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyVerdict {
    pub family: String,
    pub passed: bool,
    pub pivots_cover_parameters: bool,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryVerdict {
    pub entry: String,
    pub algebra_passed: bool,
    pub families: Vec<FamilyVerdict>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifySummary {
    pub algebras: usize,
    pub algebras_passed: usize,
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
    pub timing_ms: f64,
    #[serde(skip)]
    pub entries: Vec<EntryVerdict>,
    #[serde(skip)]
    pub errata: Vec<ErrataRecord>,
}

impl VerifySummary {
    pub fn verdict(&self, entry: &str, family: &str) -> Option<&FamilyVerdict> {
        self.entries.iter().find(|e| e.entry == entry)?.families.iter().find(|f| f.family == family)
    }
}

fn errata_from(entry: &str, family: &str, rep: &CheckReport, note: &str) -> Option<ErrataRecord> {
    let w = rep.first()?;
    Some(ErrataRecord {
        entry: entry.to_string(),
        family: family.to_string(),
        identity: w.identity.clone(),
        witness: w.indices.clone(),
        residual: w.residual.clone(),
        note: note.to_string(),
    })
}

/// Axioms of the algebra, then every family at its weight.
pub fn verify_entry(entry: &CatalogEntry) -> Result<(EntryVerdict, Vec<ErrataRecord>)> {
    let alg = entry.algebra();
    let mut errata = Vec::new();
    let axioms = check_axioms(alg);
    if let Some(e) = errata_from(&entry.id, "algebra", &axioms, &entry.note) {
        errata.push(e);
    }
    let mut families = Vec::new();
    for fam in &entry.families {
        let rep = verify_family(alg, fam, None)?;
        if let Some(e) = errata_from(&entry.id, &fam.id, &rep, &fam.note) {
            errata.push(e);
        }
        families.push(FamilyVerdict {
            family: fam.id.clone(),
            passed: rep.passed(),
            pivots_cover_parameters: fam.pivots_cover_parameters(),
            failures: rep.failures,
        });
    }
    Ok((EntryVerdict { entry: entry.id.clone(), algebra_passed: axioms.passed(), families }, errata))
}

/// Verify every entry whose id matches `filter`, optionally writing the errata
/// report as JSON lines (records first, summary last).
pub fn catalog_verify_all(filter: &str, errata_path: Option<&Path>) -> Result<VerifySummary> {
    let start = Instant::now();
    let mut sum = VerifySummary::default();
    for id in matching(filter)? {
        let entry = catalog_get(id)?;
        let (v, errata) = verify_entry(&entry)?;
        sum.algebras += 1;
        if v.algebra_passed {
            sum.algebras_passed += 1;
        }
        for f in &v.families {
            sum.checked += 1;
            if f.passed {
                sum.passed += 1;
            } else {
                sum.failed += 1;
            }
        }
        sum.entries.push(v);
        sum.errata.extend(errata);
    }
    sum.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    if let Some(path) = errata_path {
        write_errata(path, &sum)?;
    }
    Ok(sum)
}

pub fn write_errata(path: &Path, sum: &VerifySummary) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    for e in &sum.errata {
        writeln!(f, "{}", serde_json::to_string(e).map_err(|e| Error::Internal(e.to_string()))?)?;
    }
    let summary = serde_json::json!({ "summary": sum });
    writeln!(f, "{}", summary)?;
    f.flush()?;
    Ok(())
}

/// A copy of `fam` that is no longer a Rota-Baxter operator of its weight:
/// `+1` added to the first cell (even cells first, row-major) for which the
/// exact check fails, or a nonzero odd entry when every even change still
/// passes (e.g. on abelian algebras).
pub fn perturbed(alg: &SuperAlgebra, fam: &OperatorFamily) -> Result<OperatorFamily> {
    let mut out = fam.clone();
    out.id = format!("{}+perturbed", fam.id);
    let (rows, cols) = (fam.map.rows(), fam.map.cols());
    let mut cells: Vec<(usize, usize)> = (0..rows).flat_map(|k| (0..cols).map(move |i| (k, i))).collect();
    cells.sort_by_key(|&(k, i)| (fam.map.cod.parity(k) != fam.map.dom.parity(i)) as u8);
    for (k, i) in cells {
        let mut map = fam.map.clone();
        map.set(k, i, fam.map.get(k, i) + &RatExpr::constant(Scalar::one()));
        if !check_rb(alg, &map, &fam.weight)?.passed() {
            out.map = map;
            return Ok(out);
        }
    }
    Err(Error::Internal(format!("no perturbation of `{}` breaks the identity", fam.id)))
}

/// Whether the entry's algebra is a pre-Lie algebra whose verbatim table was
/// mirrored on load.
pub fn is_mirrored(entry: &CatalogEntry) -> bool {
    entry.file.transcribed_right && entry.algebra().kind == Kind::PreLie
}
