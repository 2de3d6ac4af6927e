//! Regenerates the fixture corpus under fixtures/ in canonical form.
//! Run from the workspace root: cargo run -p hodgeforge --example gen_fixtures

use hodgeforge::exactlin::Rat;
use hodgeforge::fixtures;
use hodgeforge::json::{canonical_json, complex_to_file, module_to_file, ph_to_file, Expected};

fn main() {
    let p = 5u64;
    let dir = std::path::Path::new("fixtures");
    std::fs::create_dir_all(dir).expect("create fixtures dir");
    let write = |name: &str, text: String| {
        let path = dir.join(name);
        std::fs::write(&path, text).expect("write fixture");
        println!("wrote {}", path.display());
    };

    let h_st = hodgeforge::dfmod::h_st;
    let adm = |m: &hodgeforge::dfmod::FilteredPhiNModule| -> String {
        use hodgeforge::dfmod::{is_weakly_admissible, AdmissibilityStatus};
        match is_weakly_admissible(m).status {
            AdmissibilityStatus::Admissible { .. } => "Admissible".into(),
            AdmissibilityStatus::NotAdmissible { .. } => "NotAdmissible".into(),
            AdmissibilityStatus::ProbablyAdmissible { .. } => "ProbablyAdmissible".into(),
        }
    };

    let mut module_fixture = |name: &str, m: hodgeforge::dfmod::FilteredPhiNModule, comment: &str| {
        let mut f = module_to_file(&m);
        f.comment = Some(comment.to_string());
        f.expected = Some(Expected {
            admissible: Some(adm(&m)),
            h_st: Some(h_st(&m)),
            t_n: Some(m.t_n()),
            t_h: Some(m.t_h()),
            degenerate: None,
        });
        write(&format!("{name}.json"), canonical_json(&f));
    };

    module_fixture(
        "unit",
        fixtures::unit(p),
        "the unit object K(0); values re-derived by fixture_corpus tests",
    );
    for r in -2..=2i32 {
        let name = if r < 0 {
            format!("qp_m{}", -r)
        } else {
            format!("qp{r}")
        };
        module_fixture(
            &name,
            fixtures::qp(p, r),
            "Tate object; values re-derived by fixture_corpus tests",
        );
    }
    module_fixture(
        "unramified",
        fixtures::unramified(p, &Rat::from_int(2)),
        "unramified character with φ = 2; values re-derived by fixture_corpus tests",
    );
    module_fixture(
        "tate_curve",
        fixtures::tate_curve(p, &Rat::one()),
        "H^1 of a Tate curve with L-invariant 1; values re-derived by fixture_corpus tests",
    );
    module_fixture(
        "good_ordinary_elliptic",
        fixtures::good_ordinary_elliptic(p),
        "H^1 with good ordinary reduction; values re-derived by fixture_corpus tests",
    );
    module_fixture(
        "bad_jump",
        fixtures::bad_jump(p),
        "1-dimensional counterexample with t_N=0 < t_H=1; values re-derived by fixture_corpus tests",
    );

    // complexes with lefschetz data
    {
        let c = fixtures::elliptic_curve_complex(p);
        let mut f = complex_to_file(&c);
        f.comment = Some(
            "split elliptic cohomology 1+2+1 with its Lefschetz map; re-derived by fixture_corpus tests"
                .into(),
        );
        f.lefschetz = Some(
            fixtures::elliptic_lefschetz(p)
                .iter()
                .map(hodgeforge::json::mat_to_json)
                .collect(),
        );
        f.middle = Some(1);
        f.expected = Some(Expected {
            degenerate: Some(true),
            ..Default::default()
        });
        write("elliptic_curve_complex.json", canonical_json(&f));
    }
    {
        let c = fixtures::lefschetz_surface_complex(p);
        let mut f = complex_to_file(&c);
        f.comment = Some(
            "projective-plane style 1,0,1,0,1 cohomology with its Lefschetz map; re-derived by fixture_corpus tests"
                .into(),
        );
        f.lefschetz = Some(
            fixtures::lefschetz_surface_operator(p)
                .iter()
                .map(hodgeforge::json::mat_to_json)
                .collect(),
        );
        f.middle = Some(2);
        f.expected = Some(Expected { degenerate: Some(true), ..Default::default() });
        write("lefschetz_surface_complex.json", canonical_json(&f));
    }
    {
        let c = fixtures::nonlefschetz_d2_complex(p);
        let mut f = complex_to_file(&c);
        f.comment = Some(
            "two-term complex with a nonzero d2 in the descent spectral sequence; re-derived by fixture_corpus tests"
                .into(),
        );
        f.expected = Some(Expected { degenerate: Some(false), ..Default::default() });
        write("nonlefschetz_d2_complex.json", canonical_json(&f));
    }
    {
        let ph = fixtures::k0(p);
        let mut f = ph_to_file(&ph);
        f.comment = Some("the p-adic Hodge complex K(0) = θ(unit)".into());
        write("k0.json", canonical_json(&f));
    }
}
