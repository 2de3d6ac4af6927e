//! JSON formats for modules, complexes and p-adic Hodge complexes.
//!
//! Rationals are strings `"a/b"` (or `"a"`), matrices are row-major arrays
//! of such strings, filtrations map jump indices to lists of basis vectors.
//! Loading re-validates every structural invariant and reports the failing
//! location.

use crate::dfmod::{DfComplex, FilteredPhiNModule, GroupData};
use crate::exactlin::{Mat, Rat, Subspace};
use crate::filtered::{FilteredComplex, FilteredSpace};
use crate::phimod::{PhiNComplex, PhiNModule};
use crate::phodge::PadicHodgeComplex;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub type JsonMat = Vec<Vec<String>>;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ModuleFile {
    pub kind: String,
    pub p: u64,
    pub dim: usize,
    pub phi: JsonMat,
    pub n: JsonMat,
    /// jump index → basis vectors of F^jump
    pub filtration: BTreeMap<i64, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<JsonMat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GroupFile {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    pub rep: Vec<JsonMat>,
}

/// Recorded expectations of a fixture; the test suite re-derives these.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Default)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admissible: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_st: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_h: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComplexFile {
    pub kind: String,
    pub p: u64,
    pub min_deg: i64,
    pub terms: Vec<ModuleFile>,
    pub diffs: Vec<JsonMat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lefschetz: Option<Vec<JsonMat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub middle: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PhFile {
    pub kind: String,
    pub p: u64,
    pub m0: PhSideFile,
    pub mk: FilteredSideFile,
    pub a: Vec<JsonMat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PhSideFile {
    pub min_deg: i64,
    pub terms: Vec<PhTermFile>,
    pub diffs: Vec<JsonMat>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PhTermFile {
    pub dim: usize,
    pub phi: JsonMat,
    pub n: JsonMat,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FilteredSideFile {
    pub min_deg: i64,
    pub terms: Vec<FilteredTermFile>,
    pub diffs: Vec<JsonMat>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FilteredTermFile {
    pub dim: usize,
    pub filtration: BTreeMap<i64, Vec<Vec<String>>>,
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: impl Into<String>, message: impl std::fmt::Display) -> LoadError {
    LoadError::Invalid { path: path.into(), message: message.to_string() }
}

pub fn mat_to_json(m: &Mat) -> JsonMat {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.at(i, j).to_string()).collect())
        .collect()
}

pub fn mat_from_json(j: &JsonMat, rows: usize, cols: usize, path: &str) -> Result<Mat, LoadError> {
    if j.len() != rows {
        return Err(invalid(path, format!("expected {rows} rows, found {}", j.len())));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row) in j.iter().enumerate() {
        if row.len() != cols {
            return Err(invalid(
                format!("{path}/{i}"),
                format!("expected {cols} entries, found {}", row.len()),
            ));
        }
        for (k, s) in row.iter().enumerate() {
            let r: Rat = s
                .parse()
                .map_err(|e| invalid(format!("{path}/{i}/{k}"), e))?;
            entries.push(r);
        }
    }
    Ok(Mat::new(rows, cols, entries))
}

fn filtration_to_json(f: &FilteredSpace) -> BTreeMap<i64, Vec<Vec<String>>> {
    f.steps()
        .iter()
        .map(|(i, s)| {
            (
                *i,
                s.basis()
                    .iter()
                    .map(|v| v.iter().map(Rat::to_string).collect())
                    .collect(),
            )
        })
        .collect()
}

fn filtration_from_json(
    dim: usize,
    map: &BTreeMap<i64, Vec<Vec<String>>>,
    path: &str,
) -> Result<FilteredSpace, LoadError> {
    let mut raw = Vec::new();
    for (i, vectors) in map {
        let mut vs = Vec::new();
        for (k, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(invalid(
                    format!("{path}/{i}/{k}"),
                    format!("vector length {} ≠ dim {dim}", v.len()),
                ));
            }
            let parsed: Result<Vec<Rat>, _> = v.iter().map(|s| s.parse()).collect();
            vs.push(parsed.map_err(|e| invalid(format!("{path}/{i}/{k}"), e))?);
        }
        raw.push((*i, Subspace::span(dim, &vs)));
    }
    FilteredSpace::new(dim, raw).map_err(|e| invalid(path, e))
}

pub fn module_to_file(m: &FilteredPhiNModule) -> ModuleFile {
    ModuleFile {
        kind: "module".into(),
        p: m.p(),
        dim: m.dim(),
        phi: mat_to_json(&m.base.phi),
        n: mat_to_json(&m.base.n_op),
        filtration: filtration_to_json(&m.dr_side),
        group: m.galois.as_ref().map(|g| GroupFile {
            order: g.order,
            table: g.mult_table.clone(),
            rep: g.rep.iter().map(mat_to_json).collect(),
        }),
        comparison: if m.comparison.is_identity() {
            None
        } else {
            Some(mat_to_json(&m.comparison))
        },
        comment: None,
        expected: None,
    }
}

pub fn module_from_file(f: &ModuleFile, path: &str) -> Result<FilteredPhiNModule, LoadError> {
    if f.kind != "module" {
        return Err(invalid(format!("{path}/kind"), "expected \"module\""));
    }
    let phi = mat_from_json(&f.phi, f.dim, f.dim, &format!("{path}/phi"))?;
    let n = mat_from_json(&f.n, f.dim, f.dim, &format!("{path}/n"))?;
    let base = PhiNModule::new(f.p, phi, n)
        .map_err(|e| invalid(format!("{path}/phi"), e))?;
    let dr = filtration_from_json(f.dim, &f.filtration, &format!("{path}/filtration"))?;
    let comparison = match &f.comparison {
        Some(c) => mat_from_json(c, f.dim, f.dim, &format!("{path}/comparison"))?,
        None => Mat::identity(f.dim),
    };
    let galois = match &f.group {
        None => None,
        Some(g) => {
            let rep: Result<Vec<Mat>, LoadError> = g
                .rep
                .iter()
                .enumerate()
                .map(|(i, m)| mat_from_json(m, f.dim, f.dim, &format!("{path}/group/rep/{i}")))
                .collect();
            Some(GroupData { order: g.order, mult_table: g.table.clone(), rep: rep? })
        }
    };
    FilteredPhiNModule::new(base, galois, dr, comparison).map_err(|e| invalid(path, e))
}

pub fn complex_to_file(c: &DfComplex) -> ComplexFile {
    ComplexFile {
        kind: "complex".into(),
        p: c.p,
        min_deg: c.min_deg,
        terms: c.terms.iter().map(module_to_file).collect(),
        diffs: c.diffs.iter().map(mat_to_json).collect(),
        lefschetz: None,
        middle: None,
        comment: None,
        expected: None,
    }
}

pub fn complex_from_file(f: &ComplexFile, path: &str) -> Result<DfComplex, LoadError> {
    if f.kind != "complex" {
        return Err(invalid(format!("{path}/kind"), "expected \"complex\""));
    }
    let terms: Result<Vec<FilteredPhiNModule>, LoadError> = f
        .terms
        .iter()
        .enumerate()
        .map(|(i, t)| module_from_file(t, &format!("{path}/terms/{i}")))
        .collect();
    let terms = terms?;
    let mut diffs = Vec::new();
    for (k, d) in f.diffs.iter().enumerate() {
        let rows = terms.get(k + 1).map(|t| t.dim()).unwrap_or(0);
        let cols = terms.get(k).map(|t| t.dim()).unwrap_or(0);
        diffs.push(mat_from_json(d, rows, cols, &format!("{path}/diffs/{k}"))?);
    }
    DfComplex::new(f.p, f.min_deg, terms, diffs).map_err(|e| invalid(path, e))
}

pub fn lefschetz_from_file(
    f: &ComplexFile,
    c: &DfComplex,
    path: &str,
) -> Result<Option<(Vec<Mat>, i64)>, LoadError> {
    let Some(l) = &f.lefschetz else {
        return Ok(None);
    };
    let middle = f
        .middle
        .ok_or_else(|| invalid(format!("{path}/middle"), "lefschetz data needs a middle degree"))?;
    let mut out = Vec::new();
    for (k, m) in l.iter().enumerate() {
        let j = c.min_deg + k as i64;
        let rows = c.dim_at(j + 2);
        let cols = c.dim_at(j);
        out.push(mat_from_json(m, rows, cols, &format!("{path}/lefschetz/{k}"))?);
    }
    if out.len() != c.terms.len() {
        return Err(invalid(
            format!("{path}/lefschetz"),
            "one component per complex term expected",
        ));
    }
    Ok(Some((out, middle)))
}

pub fn ph_to_file(ph: &PadicHodgeComplex) -> PhFile {
    PhFile {
        kind: "ph".into(),
        p: ph.p,
        m0: PhSideFile {
            min_deg: ph.m0.min_deg,
            terms: ph
                .m0
                .terms
                .iter()
                .map(|t| PhTermFile {
                    dim: t.dim,
                    phi: mat_to_json(&t.phi),
                    n: mat_to_json(&t.n_op),
                })
                .collect(),
            diffs: ph.m0.diffs.iter().map(mat_to_json).collect(),
        },
        mk: FilteredSideFile {
            min_deg: ph.mk.min_deg,
            terms: ph
                .mk
                .terms
                .iter()
                .map(|t| FilteredTermFile {
                    dim: t.dim(),
                    filtration: filtration_to_json(t),
                })
                .collect(),
            diffs: ph.mk.diffs.iter().map(mat_to_json).collect(),
        },
        a: (ph.min_deg()..=ph.max_deg())
            .map(|i| mat_to_json(&ph.a_at(i)))
            .collect(),
        comment: None,
    }
}

pub fn ph_from_file(f: &PhFile, path: &str) -> Result<PadicHodgeComplex, LoadError> {
    if f.kind != "ph" {
        return Err(invalid(format!("{path}/kind"), "expected \"ph\""));
    }
    let mut terms0 = Vec::new();
    for (i, t) in f.m0.terms.iter().enumerate() {
        let phi = mat_from_json(&t.phi, t.dim, t.dim, &format!("{path}/m0/terms/{i}/phi"))?;
        let n = mat_from_json(&t.n, t.dim, t.dim, &format!("{path}/m0/terms/{i}/n"))?;
        terms0.push(
            PhiNModule::new(f.p, phi, n)
                .map_err(|e| invalid(format!("{path}/m0/terms/{i}"), e))?,
        );
    }
    let mut diffs0 = Vec::new();
    for (k, d) in f.m0.diffs.iter().enumerate() {
        let rows = terms0.get(k + 1).map(|t| t.dim).unwrap_or(0);
        let cols = terms0.get(k).map(|t| t.dim).unwrap_or(0);
        diffs0.push(mat_from_json(d, rows, cols, &format!("{path}/m0/diffs/{k}"))?);
    }
    let m0 = PhiNComplex::new(f.p, f.m0.min_deg, terms0, diffs0)
        .map_err(|e| invalid(format!("{path}/m0"), e))?;

    let mut termsk = Vec::new();
    for (i, t) in f.mk.terms.iter().enumerate() {
        termsk.push(filtration_from_json(
            t.dim,
            &t.filtration,
            &format!("{path}/mk/terms/{i}/filtration"),
        )?);
    }
    let mut diffsk = Vec::new();
    for (k, d) in f.mk.diffs.iter().enumerate() {
        let rows = termsk.get(k + 1).map(|t| t.dim()).unwrap_or(0);
        let cols = termsk.get(k).map(|t| t.dim()).unwrap_or(0);
        diffsk.push(mat_from_json(d, rows, cols, &format!("{path}/mk/diffs/{k}"))?);
    }
    let mk = FilteredComplex::new(f.mk.min_deg, termsk, diffsk)
        .map_err(|e| invalid(format!("{path}/mk"), e))?;

    let lo = m0.min_deg.min(mk.min_deg);
    let hi = m0.max_deg().max(mk.max_deg());
    let mut a = Vec::new();
    for (k, am) in f.a.iter().enumerate() {
        let i = lo + k as i64;
        let rows = mk.dim_at(i);
        let cols = m0.dim_at(i);
        a.push(mat_from_json(am, rows, cols, &format!("{path}/a/{k}"))?);
    }
    if a.len() != (hi - lo + 1) as usize {
        return Err(invalid(format!("{path}/a"), "one gluing matrix per degree"));
    }
    PadicHodgeComplex::new(f.p, m0, mk, a, None).map_err(|e| invalid(path, e))
}

/// Any of the recognized file kinds.
#[derive(Clone, Debug)]
pub enum AnyFile {
    Module(Box<ModuleFile>),
    Complex(Box<ComplexFile>),
    Ph(Box<PhFile>),
}

pub fn parse_any(text: &str) -> Result<AnyFile, LoadError> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    let kind = v
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| invalid("/kind", "missing kind field"))?;
    match kind {
        "module" => Ok(AnyFile::Module(Box::new(serde_json::from_value(v)?))),
        "complex" => Ok(AnyFile::Complex(Box::new(serde_json::from_value(v)?))),
        "ph" => Ok(AnyFile::Ph(Box::new(serde_json::from_value(v)?))),
        other => Err(invalid("/kind", format!("unknown kind `{other}`"))),
    }
}

/// Canonical serialization: fixed field order, two-space indent, newline at
/// the end, so equal objects are byte-identical.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn module_round_trip() {
        let tc = fixtures::tate_curve(5, &Rat::one());
        let file = module_to_file(&tc);
        let text = canonical_json(&file);
        let parsed = match parse_any(&text).unwrap() {
            AnyFile::Module(m) => *m,
            _ => panic!("expected module"),
        };
        let back = module_from_file(&parsed, "").unwrap();
        assert_eq!(back.base, tc.base);
        assert_eq!(back.dr_side, tc.dr_side);
        assert_eq!(back.comparison, tc.comparison);
        // canonical: save(load(f)) = f
        assert_eq!(canonical_json(&module_to_file(&back)), text);
    }

    #[test]
    fn invalid_commutation_rejected_with_path() {
        let mut f = module_to_file(&fixtures::unit(5));
        f.dim = 2;
        f.phi = vec![vec!["1".into(), "0".into()], vec!["0".into(), "1".into()]];
        f.n = vec![vec!["0".into(), "1".into()], vec!["0".into(), "0".into()]];
        f.filtration = BTreeMap::from([(0, vec![
            vec!["1".into(), "0".into()],
            vec!["0".into(), "1".into()],
        ])]);
        let err = module_from_file(&f, "/module").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("Nφ ≠ pφN"), "got: {msg}");
    }

    #[test]
    fn malformed_rational_rejected() {
        let mut f = module_to_file(&fixtures::unit(5));
        f.phi = vec![vec!["1/0".into()]];
        let err = module_from_file(&f, "/m").unwrap_err();
        assert!(err.to_string().contains("/m/phi/0/0"));
    }

    #[test]
    fn complex_and_ph_round_trips() {
        let c = fixtures::elliptic_curve_complex(5);
        let file = complex_to_file(&c);
        let text = canonical_json(&file);
        let parsed = match parse_any(&text).unwrap() {
            AnyFile::Complex(c) => *c,
            _ => panic!("expected complex"),
        };
        let back = complex_from_file(&parsed, "").unwrap();
        assert_eq!(back.terms.len(), 3);

        let ph = fixtures::k0(5);
        let pf = ph_to_file(&ph);
        let text = canonical_json(&pf);
        let parsed = match parse_any(&text).unwrap() {
            AnyFile::Ph(p) => *p,
            _ => panic!("expected ph"),
        };
        let back = ph_from_file(&parsed, "").unwrap();
        assert!(back.validate().is_ok());
    }
}
