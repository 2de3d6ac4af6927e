use crate::dfmod::FilteredPhiNModule;
use crate::exactlin::{Mat, Rat, Subspace};
use crate::phimod::{add_block_pub, ChainComplex};

/// The Bloch–Kato complex of a filtered (φ,N)-module:
/// D → D ⊕ D ⊕ D_K/F⁰ → D with maps (N, 1−φ, ι) and (1−pφ) − N.
#[derive(Clone, Debug)]
pub struct CPstComplex {
    pub complex: ChainComplex,
    /// quotient map D_K → D_K/F⁰
    pub quotient: Mat,
    pub dim: usize,
    pub q_dim: usize,
}

pub fn c_pst(d: &FilteredPhiNModule) -> CPstComplex {
    let n = d.dim();
    let p = Rat::from_int(d.p() as i64);
    let f0 = d.dr_side.filtration_at(0);
    let quotient = f0.quotient_map(); // D_K → D_K/F⁰
    let q_dim = quotient.rows();
    let one = Mat::identity(n);
    let iota = &quotient * &d.comparison; // D → D_K/F⁰
    // degrees 0..2: C⁰ = D, C¹ = D ⊕ D ⊕ D_K/F⁰, C² = D
    let mut d0 = Mat::zero(2 * n + q_dim, n);
    add_block_pub(&mut d0, 0, 0, &d.base.n_op);
    add_block_pub(&mut d0, n, 0, &(&one - &d.base.phi));
    add_block_pub(&mut d0, 2 * n, 0, &iota);
    let mut d1 = Mat::zero(n, 2 * n + q_dim);
    add_block_pub(&mut d1, 0, 0, &(&one - &d.base.phi.scale(&p)));
    add_block_pub(&mut d1, 0, n, &d.base.n_op.scale(&-Rat::one()));
    let complex =
        ChainComplex::new(0, vec![n, 2 * n + q_dim, n], vec![d0, d1]).expect("zero composite");
    CPstComplex { complex, quotient, dim: n, q_dim }
}

/// The Bloch–Kato exponential: the boundary map D_K/F⁰ → H¹(C_pst(d))
/// sending a class b̄ to the class of the cocycle (0, 0, b̄).
pub fn exp_bk(d: &FilteredPhiNModule) -> Mat {
    let c = c_pst(d);
    let h1 = c.complex.cohomology_at(1);
    let cols: Vec<Vec<Rat>> = (0..c.q_dim)
        .map(|k| {
            let mut v = vec![Rat::zero(); 2 * c.dim + c.q_dim];
            v[2 * c.dim + k] = Rat::one();
            h1.class_map.apply(&v)
        })
        .collect();
    Mat::from_cols(h1.dim, &cols)
}

/// The cocycle-level evaluation H¹(C_pst) → (D⊕D)/{(Nx, (1−φ)x)} reading
/// off the Frobenius-square components; it vanishes on the image of the
/// exponential.
pub fn geometric_evaluation(d: &FilteredPhiNModule) -> (Mat, Mat) {
    let c = c_pst(d);
    let h1 = c.complex.cohomology_at(1);
    let n = c.dim;
    // quotient of D⊕D by the image of x ↦ (Nx, (1−φ)x)
    let mut gen = Mat::zero(2 * n, n);
    add_block_pub(&mut gen, 0, 0, &d.base.n_op);
    add_block_pub(&mut gen, n, 0, &(&Mat::identity(n) - &d.base.phi));
    let q = Subspace::image_of(&gen).quotient_map();
    // evaluation: representative cocycle, project to (a,b)-slots, quotient
    let mut proj = Mat::zero(2 * n, 2 * n + c.q_dim);
    add_block_pub(&mut proj, 0, 0, &Mat::identity(2 * n));
    let eval = &q * &(&proj * &h1.reps);
    (eval, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfmod::h_st;
    use crate::fixtures;

    fn dims(c: &ChainComplex) -> Vec<usize> {
        c.cohomology_dims().iter().map(|&(_, d)| d).collect()
    }

    #[test]
    fn c_pst_of_unit() {
        let c = c_pst(&fixtures::unit(5));
        assert_eq!(dims(&c.complex), vec![1, 1, 0]);
    }

    #[test]
    fn c_pst_of_qp1() {
        let c = c_pst(&fixtures::qp(5, 1));
        assert_eq!(dims(&c.complex), vec![0, 2, 1]);
    }

    #[test]
    fn c_pst_matches_hom_flat_on_fixtures() {
        for d in [
            fixtures::unit(5),
            fixtures::qp(5, 1),
            fixtures::qp(5, -1),
            fixtures::qp(5, 2),
            fixtures::tate_curve(5, &Rat::one()),
            fixtures::good_ordinary_elliptic(5),
            fixtures::unramified(5, &Rat::from_int(2)),
        ] {
            let c = c_pst(&d);
            assert_eq!(dims(&c.complex), h_st(&d), "mismatch for a fixture");
        }
    }

    #[test]
    fn exp_bk_on_qp1_injective_into_2dim_h1() {
        let d = fixtures::qp(5, 1);
        let e = exp_bk(&d);
        assert_eq!(e.cols(), 1); // D_K/F⁰ is one-dimensional
        assert_eq!(e.rows(), 2); // H¹ is two-dimensional
        assert_eq!(e.rank(), 1); // injective with 1-dim image
    }

    #[test]
    fn exp_bk_empty_when_f0_is_everything() {
        let d = fixtures::unit(5);
        let e = exp_bk(&d);
        assert_eq!(e.cols(), 0);
    }

    #[test]
    fn geometric_evaluation_kills_exponential_classes() {
        for d in [
            fixtures::qp(5, 1),
            fixtures::qp(5, 2),
            fixtures::tate_curve(5, &Rat::one()),
        ] {
            let e = exp_bk(&d);
            let (eval, _) = geometric_evaluation(&d);
            let composite = &eval * &e;
            assert!(composite.is_zero(), "evaluation must vanish on exp classes");
        }
    }

    #[test]
    fn c_pst_matches_hom_flat_on_random_modules() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(99);
        for _ in 0..40 {
            let d = crate::sample::module_with_random_filtration(&mut rng, 5, 4);
            let a: Vec<usize> = c_pst(&d)
                .complex
                .cohomology_dims()
                .iter()
                .map(|&(_, x)| x)
                .collect();
            assert_eq!(a, h_st(&d));
        }
    }

    #[test]
    fn exp_bk_equivariant_under_isomorphism() {
        let d = fixtures::qp(5, 1);
        let t0 = Mat::scalar(1, &Rat::from_int(3));
        let tk = Mat::scalar(1, &Rat::from_int(2));
        let moved = d.change_basis(&t0, &tk);
        assert_eq!(exp_bk(&d).rank(), exp_bk(&moved).rank());
    }
}
