//! The fixture corpus loads clean end-to-end, every recorded expectation is
//! re-derived, and the files stay byte-identical to their canonical
//! in-code constructions.

use hodgeforge::dfmod::{h_st, is_weakly_admissible, AdmissibilityStatus};
use hodgeforge::exactlin::Rat;
use hodgeforge::fixtures;
use hodgeforge::json::{
    canonical_json, complex_from_file, lefschetz_from_file, module_from_file, module_to_file,
    parse_any, ph_from_file, AnyFile,
};
use hodgeforge::syntomic::{check_degeneration, descent_ss};
use std::path::PathBuf;

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn read_fixture(name: &str) -> AnyFile {
    let path = fixture_dir().join(name);
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("read {}: {e}", path.display()));
    parse_any(&text).unwrap_or_else(|e| panic!("parse {name}: {e}"))
}

#[test]
fn corpus_loads_and_expectations_rederive() {
    let module_names = [
        "unit", "qp_m2", "qp_m1", "qp0", "qp1", "qp2", "unramified", "tate_curve",
        "good_ordinary_elliptic", "bad_jump",
    ];
    for name in module_names {
        let file = match read_fixture(&format!("{name}.json")) {
            AnyFile::Module(f) => *f,
            _ => panic!("{name}: expected module"),
        };
        let m = module_from_file(&file, name).unwrap();
        let expected = file.expected.clone().expect("fixtures record expectations");
        assert_eq!(Some(m.t_n()), expected.t_n, "{name}: t_n");
        assert_eq!(Some(m.t_h()), expected.t_h, "{name}: t_h");
        assert_eq!(Some(h_st(&m)), expected.h_st, "{name}: h_st");
        let verdict = match is_weakly_admissible(&m).status {
            AdmissibilityStatus::Admissible { .. } => "Admissible",
            AdmissibilityStatus::NotAdmissible { .. } => "NotAdmissible",
            AdmissibilityStatus::ProbablyAdmissible { .. } => "ProbablyAdmissible",
        };
        assert_eq!(Some(verdict.to_string()), expected.admissible, "{name}");
    }
}

#[test]
fn corpus_complex_fixtures_rederive() {
    for (name, expect_degenerate) in [
        ("elliptic_curve_complex", true),
        ("lefschetz_surface_complex", true),
        ("nonlefschetz_d2_complex", false),
    ] {
        let file = match read_fixture(&format!("{name}.json")) {
            AnyFile::Complex(f) => *f,
            _ => panic!("{name}: expected complex"),
        };
        let c = complex_from_file(&file, name).unwrap();
        assert_eq!(
            file.expected.as_ref().and_then(|e| e.degenerate),
            Some(expect_degenerate),
            "{name}: recorded expectation"
        );
        match lefschetz_from_file(&file, &c, name).unwrap() {
            Some((l, middle)) => {
                let rep = check_degeneration(&c, &l, middle, 0).unwrap();
                assert_eq!(rep.degenerate, expect_degenerate, "{name}");
            }
            None => {
                let rep = descent_ss(&c, 0);
                let degen = rep.differentials[2..].iter().all(|d| d.is_empty());
                assert_eq!(degen, expect_degenerate, "{name}");
            }
        }
    }
}

#[test]
fn corpus_ph_fixture_valid() {
    let file = match read_fixture("k0.json") {
        AnyFile::Ph(f) => *f,
        _ => panic!("k0: expected ph file"),
    };
    let ph = ph_from_file(&file, "k0").unwrap();
    assert!(ph.validate().is_ok());
    assert!(ph.is_heart_object());
}

#[test]
fn corpus_files_are_canonical() {
    // round-trip through the canonical serializer is the identity on bytes
    for entry in std::fs::read_dir(fixture_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let echoed = match parse_any(&text).unwrap() {
            AnyFile::Module(f) => canonical_json(&*f),
            AnyFile::Complex(f) => canonical_json(&*f),
            AnyFile::Ph(f) => canonical_json(&*f),
        };
        assert_eq!(text, echoed, "{} is not canonical", path.display());
    }
}

#[test]
fn corpus_matches_constructors() {
    let p = 5;
    let file = match read_fixture("tate_curve.json") {
        AnyFile::Module(f) => *f,
        _ => panic!("expected module"),
    };
    let built = module_to_file(&fixtures::tate_curve(p, &Rat::one()));
    assert_eq!(file.phi, built.phi);
    assert_eq!(file.n, built.n);
    assert_eq!(file.filtration, built.filtration);
}
