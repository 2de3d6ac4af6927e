//! φ-modules and (φ,N)-modules with their explicit derived Hom complexes.
//!
//! The derived Hom of two (φ,N)-modules is computed by the three-term
//! complex Hom → Hom ⊕ Hom → Hom whose differentials are built from the
//! commuting square of the maps δ and δ′; the same construction applied
//! degree-wise gives the Hom complex of two bounded complexes of modules.

mod complex;
mod homsharp;
mod module;

pub use complex::{ChainComplex, ChainComplexError, CohomologySpace};
pub use homsharp::{compose_sharp, 
    hom_sharp_phi, hom_sharp_phin, hom_sharp_phin_complexes, sharp_blocks, sharp_range, Cochain, SharpElement,
    SharpError,
};
pub use module::{ext_dims, PhiModule, PhiNComplex, PhiNModule, PhiNViolation};

use crate::exactlin::Mat;

/// Shape provider for graded complexes, letting cochain arithmetic work over
/// any complex representation.
pub trait Graded {
    fn g_min(&self) -> i64;
    fn g_max(&self) -> i64;
    fn g_dim(&self, i: i64) -> usize;
    fn g_diff(&self, i: i64) -> Mat;
}

impl Graded for ChainComplex {
    fn g_min(&self) -> i64 {
        self.min_deg()
    }
    fn g_max(&self) -> i64 {
        self.max_deg()
    }
    fn g_dim(&self, i: i64) -> usize {
        self.dim_at(i)
    }
    fn g_diff(&self, i: i64) -> Mat {
        self.diff_from(i)
    }
}

impl Graded for PhiNComplex {
    fn g_min(&self) -> i64 {
        self.min_deg
    }
    fn g_max(&self) -> i64 {
        self.max_deg()
    }
    fn g_dim(&self, i: i64) -> usize {
        self.dim_at(i)
    }
    fn g_diff(&self, i: i64) -> Mat {
        self.diff_from(i)
    }
}

/// Operator on Hom(S,T) given by X ↦ A·X, in the column-major coordinates
/// of `Mat::vec_coords`.
pub(crate) fn left_mul_op(a: &Mat, src_dim: usize) -> Mat {
    Mat::identity(src_dim).kron(a)
}

/// Operator on Hom(S,T) given by X ↦ X·B.
pub(crate) fn right_mul_op(b: &Mat, tgt_dim: usize) -> Mat {
    b.transpose().kron(&Mat::identity(tgt_dim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Rat;

    #[test]
    fn vec_operator_conventions() {
        let a = Mat::from_int_rows(&[&[1, 2], &[3, 4]]);
        let x = Mat::from_int_rows(&[&[5, 6], &[7, 8]]);
        let b = Mat::from_int_rows(&[&[0, 1], &[1, 1]]);
        let lhs = left_mul_op(&a, 2).apply(&x.vec_coords());
        assert_eq!(lhs, (&a * &x).vec_coords());
        let rhs = right_mul_op(&b, 2).apply(&x.vec_coords());
        assert_eq!(rhs, (&x * &b).vec_coords());
        let _ = Rat::one();
    }
}

/// Left inverse of a full-column-rank matrix (shared helper).
pub fn left_inverse_pub(m: &Mat) -> Mat {
    complex::left_inverse(m)
}

/// Right inverse of a surjective matrix (shared helper).
pub fn right_inverse_pub(m: &Mat) -> Mat {
    complex::right_inverse(m)
}

/// In-place block write into a larger matrix (shared helper).
pub fn add_block_pub(dst: &mut Mat, row_off: usize, col_off: usize, block: &Mat) {
    complex::add_block(dst, row_off, col_off, block)
}

/// Right-composition operator on Hom spaces (shared helper).
pub fn right_mul_op_pub(b: &Mat, tgt_dim: usize) -> Mat {
    right_mul_op(b, tgt_dim)
}
