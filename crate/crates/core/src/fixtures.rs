//! The hand-encoded fixture corpus. Every numeric expectation recorded for
//! these objects is re-derived by the test suite rather than trusted.

use crate::dfmod::{DfComplex, FilteredPhiNModule};
use crate::exactlin::{Mat, Rat, Subspace};
use crate::filtered::FilteredSpace;
use crate::phimod::PhiNModule;

/// The unit object K(0).
pub fn unit(p: u64) -> FilteredPhiNModule {
    FilteredPhiNModule::unit(p)
}

/// The Tate objects Q_p(r): φ = p^{−r}, jump at −r.
pub fn qp(p: u64, r: i32) -> FilteredPhiNModule {
    FilteredPhiNModule::unit(p).tate_twist(r)
}

/// An unramified character model: φ = μ with v_p(μ) = 0, trivial filtration.
pub fn unramified(p: u64, mu: &Rat) -> FilteredPhiNModule {
    assert_eq!(mu.valuation(p), Some(0), "unramified twist needs a p-unit");
    FilteredPhiNModule::new(
        PhiNModule::new(p, Mat::scalar(1, mu), Mat::zero(1, 1)).unwrap(),
        None,
        FilteredSpace::trivial(1, 0),
        Mat::identity(1),
    )
    .unwrap()
}

/// H¹ of a Tate curve: φ = diag(1, p), N f = e, jumps at 0 and 1 with
/// F¹ the line through ℒe + f (ℒ the L-invariant).
pub fn tate_curve(p: u64, l_invariant: &Rat) -> FilteredPhiNModule {
    let phi = Mat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => Rat::one(),
        (1, 1) => Rat::from_int(p as i64),
        _ => Rat::zero(),
    });
    let n_op = Mat::from_int_rows(&[&[0, 1], &[0, 0]]);
    let f1 = Subspace::span(2, &[vec![l_invariant.clone(), Rat::one()]]);
    let dr = FilteredSpace::new(2, vec![(0, Subspace::whole(2)), (1, f1)]).unwrap();
    FilteredPhiNModule::new(
        PhiNModule::new(p, phi, n_op).unwrap(),
        None,
        dr,
        Mat::identity(2),
    )
    .unwrap()
}

/// H¹ of an elliptic curve with good ordinary reduction: φ = diag(u, p/u)
/// for a p-unit u, N = 0, F¹ in general position.
pub fn good_ordinary_elliptic(p: u64) -> FilteredPhiNModule {
    let u = Rat::from_int(if p == 2 { 3 } else { 2 });
    assert_eq!(u.valuation(p), Some(0));
    let phi = Mat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => u.clone(),
        (1, 1) => &Rat::from_int(p as i64) / &u,
        _ => Rat::zero(),
    });
    let f1 = Subspace::span(2, &[vec![Rat::one(), Rat::one()]]);
    let dr = FilteredSpace::new(2, vec![(0, Subspace::whole(2)), (1, f1)]).unwrap();
    FilteredPhiNModule::new(
        PhiNModule::new(p, phi, Mat::zero(2, 2)).unwrap(),
        None,
        dr,
        Mat::identity(2),
    )
    .unwrap()
}

/// The 1-dimensional counterexample to weak admissibility: t_N = 0 < t_H = 1.
pub fn bad_jump(p: u64) -> FilteredPhiNModule {
    FilteredPhiNModule::new(
        PhiNModule::unit(p),
        None,
        FilteredSpace::trivial(1, 1),
        Mat::identity(1),
    )
    .unwrap()
}

/// Cohomology of an elliptic curve as a split complex in degrees 0..2:
/// H⁰ = unit, H¹ = Tate curve, H² = unit(−1), zero differentials.
pub fn elliptic_curve_complex(p: u64) -> DfComplex {
    DfComplex::new(
        p,
        0,
        vec![unit(p), tate_curve(p, &Rat::one()), qp(p, -1)],
        vec![Mat::zero(2, 1), Mat::zero(1, 2)],
    )
    .unwrap()
}

/// The Lefschetz operator of the elliptic complex: H⁰ → H²(1) the identity
/// (all other components zero). Degree +2, twist +1 chain map.
pub fn elliptic_lefschetz(p: u64) -> Vec<Mat> {
    let _ = p;
    vec![Mat::identity(1), Mat::zero(0, 2), Mat::zero(0, 1)]
}

/// Cohomology of the projective plane: H⁰, H², H⁴ one-dimensional Tate
/// twists, zero differentials; the middle dimension is 2.
pub fn lefschetz_surface_complex(p: u64) -> DfComplex {
    DfComplex::new(
        p,
        0,
        vec![unit(p), zero_module(p), qp(p, -1), zero_module(p), qp(p, -2)],
        vec![
            Mat::zero(0, 1),
            Mat::zero(1, 0),
            Mat::zero(0, 1),
            Mat::zero(1, 0),
        ],
    )
    .unwrap()
}

pub fn lefschetz_surface_operator(p: u64) -> Vec<Mat> {
    let _ = p;
    vec![
        Mat::identity(1),
        Mat::zero(0, 0),
        Mat::identity(1),
        Mat::zero(0, 0),
        Mat::zero(0, 1),
    ]
}

fn zero_module(p: u64) -> FilteredPhiNModule {
    FilteredPhiNModule {
        base: PhiNModule::zero(p),
        galois: None,
        dr_side: FilteredSpace::trivial(0, 0),
        comparison: Mat::zero(0, 0),
    }
}

/// A two-term complex whose descent spectral sequence has a nonzero d₂:
/// the semistable non-crystalline extension of the unit by Q_p(1) (the
/// twisted Tate curve, nonzero monodromy) mapped onto the unipotent
/// self-extension of the unit.
pub fn nonlefschetz_d2_complex(p: u64) -> DfComplex {
    // E_q = tate_curve(1): φ = diag(1/p, 1), N e₂ = e₁, jumps at −1 and 0.
    let e_q = tate_curve(p, &Rat::one()).tate_twist(1);
    // E': unipotent self-extension of the unit: φ = [[1,1],[0,1]].
    let phi_ep = Mat::from_int_rows(&[&[1, 1], &[0, 1]]);
    let e_p = FilteredPhiNModule::new(
        PhiNModule::new(p, phi_ep, Mat::zero(2, 2)).unwrap(),
        None,
        FilteredSpace::trivial(2, 0),
        Mat::identity(2),
    )
    .unwrap();
    // f: E_q ↠ unit ↪ E': e₁ ↦ 0, e₂ ↦ e₁'; kills N.
    let f = Mat::from_int_rows(&[&[0, 1], &[0, 0]]);
    DfComplex::new(p, 0, vec![e_q, e_p], vec![f]).unwrap()
}

/// θ of the unit: the p-adic Hodge complex K(0).
pub fn k0(p: u64) -> crate::phodge::PadicHodgeComplex {
    crate::phodge::theta(&DfComplex::concentrated(unit(p)))
}
