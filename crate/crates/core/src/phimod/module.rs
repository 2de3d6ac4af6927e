use super::ChainComplex;
use crate::exactlin::{Mat, Rat};

/// A φ-module: a finite-dimensional space with a Frobenius endomorphism.
/// Invertibility is not required here, only in the (φ,N) setting.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhiModule {
    pub p: u64,
    pub dim: usize,
    pub phi: Mat,
}

/// A (φ,N)-module: invertible Frobenius and nilpotent monodromy with
/// Nφ = pφN.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhiNModule {
    pub p: u64,
    pub dim: usize,
    pub phi: Mat,
    pub n_op: Mat,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum PhiNViolation {
    #[error("φ must be a square matrix of the module dimension")]
    PhiShape,
    #[error("N must be a square matrix of the module dimension")]
    NShape,
    #[error("φ is not invertible")]
    PhiNotInvertible,
    #[error("Nφ ≠ pφN")]
    CommutationFails,
    #[error("N is not nilpotent")]
    NotNilpotent,
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
}

impl PhiModule {
    pub fn new(p: u64, phi: Mat) -> Self {
        assert!(phi.is_square());
        PhiModule { p, dim: phi.rows(), phi }
    }

    pub fn unit(p: u64) -> Self {
        PhiModule::new(p, Mat::identity(1))
    }
}

impl PhiNModule {
    pub fn new(p: u64, phi: Mat, n_op: Mat) -> Result<Self, PhiNViolation> {
        let dim = phi.rows();
        let m = PhiNModule { p, dim, phi, n_op };
        m.validate()?;
        Ok(m)
    }

    /// The unit object: one-dimensional, φ = 1, N = 0.
    pub fn unit(p: u64) -> Self {
        PhiNModule {
            p,
            dim: 1,
            phi: Mat::identity(1),
            n_op: Mat::zero(1, 1),
        }
    }

    pub fn zero(p: u64) -> Self {
        PhiNModule { p, dim: 0, phi: Mat::zero(0, 0), n_op: Mat::zero(0, 0) }
    }

    /// Checks the defining identities and reports the first failure.
    pub fn validate(&self) -> Result<(), PhiNViolation> {
        if !self.phi.is_square() || self.phi.rows() != self.dim {
            return Err(PhiNViolation::PhiShape);
        }
        if !self.n_op.is_square() || self.n_op.rows() != self.dim {
            return Err(PhiNViolation::NShape);
        }
        if self.phi.inverse().is_none() {
            return Err(PhiNViolation::PhiNotInvertible);
        }
        let lhs = &self.n_op * &self.phi;
        let rhs = (&self.phi * &self.n_op).scale(&Rat::from_int(self.p as i64));
        if lhs != rhs {
            return Err(PhiNViolation::CommutationFails);
        }
        if !self.n_op.is_nilpotent() {
            return Err(PhiNViolation::NotNilpotent);
        }
        Ok(())
    }

    /// Tate twist: divides the Frobenius by p^r and keeps N.
    pub fn tate_twist(&self, r: i32) -> PhiNModule {
        PhiNModule {
            p: self.p,
            dim: self.dim,
            phi: self.phi.scale(&Rat::from_int(self.p as i64).pow(-r)),
            n_op: self.n_op.clone(),
        }
    }

    pub fn tensor(&self, other: &PhiNModule) -> Result<PhiNModule, PhiNViolation> {
        self.check_prime(other)?;
        let phi = self.phi.kron(&other.phi);
        let n_op = &self.n_op.kron(&Mat::identity(other.dim))
            + &Mat::identity(self.dim).kron(&other.n_op);
        PhiNModule::new(self.p, phi, n_op)
    }

    pub fn dual(&self) -> PhiNModule {
        PhiNModule {
            p: self.p,
            dim: self.dim,
            phi: self.phi.transpose().inverse().expect("φ invertible"),
            n_op: -&self.n_op.transpose(),
        }
    }

    pub fn direct_sum(&self, other: &PhiNModule) -> Result<PhiNModule, PhiNViolation> {
        self.check_prime(other)?;
        Ok(PhiNModule {
            p: self.p,
            dim: self.dim + other.dim,
            phi: self.phi.direct_sum(&other.phi),
            n_op: self.n_op.direct_sum(&other.n_op),
        })
    }

    /// Conjugate all structure by an invertible change of basis.
    pub fn change_basis(&self, t: &Mat) -> PhiNModule {
        let ti = t.inverse().expect("change of basis must be invertible");
        PhiNModule {
            p: self.p,
            dim: self.dim,
            phi: &(t * &self.phi) * &ti,
            n_op: &(t * &self.n_op) * &ti,
        }
    }

    pub fn check_prime(&self, other: &PhiNModule) -> Result<(), PhiNViolation> {
        if self.p != other.p {
            Err(PhiNViolation::PrimeMismatch(self.p, other.p))
        } else {
            Ok(())
        }
    }
}

/// A bounded complex of (φ,N)-modules: differentials commute with φ and N.
#[derive(Clone, Debug)]
pub struct PhiNComplex {
    pub p: u64,
    pub min_deg: i64,
    pub terms: Vec<PhiNModule>,
    pub diffs: Vec<Mat>,
}

impl PhiNComplex {
    pub fn new(
        p: u64,
        min_deg: i64,
        terms: Vec<PhiNModule>,
        diffs: Vec<Mat>,
    ) -> Result<Self, PhiNViolation> {
        for t in &terms {
            if t.p != p {
                return Err(PhiNViolation::PrimeMismatch(p, t.p));
            }
            t.validate()?;
        }
        let c = PhiNComplex { p, min_deg, terms, diffs };
        // d² = 0 and shapes via the underlying complex
        let underlying = c.underlying();
        for i in underlying.degrees() {
            let d = c.diff_from(i);
            let (src, tgt) = (c.term_at(i), c.term_at(i + 1));
            if let (Some(s), Some(t)) = (src, tgt) {
                if &d * &s.phi != &t.phi * &d {
                    return Err(PhiNViolation::CommutationFails);
                }
                if &d * &s.n_op != &t.n_op * &d {
                    return Err(PhiNViolation::CommutationFails);
                }
            }
        }
        Ok(c)
    }

    pub fn concentrated(m: PhiNModule) -> Self {
        PhiNComplex { p: m.p, min_deg: 0, terms: vec![m], diffs: vec![] }
    }

    pub fn max_deg(&self) -> i64 {
        self.min_deg + self.terms.len() as i64 - 1
    }

    pub fn term_at(&self, i: i64) -> Option<&PhiNModule> {
        if i < self.min_deg {
            return None;
        }
        self.terms.get((i - self.min_deg) as usize)
    }

    pub fn dim_at(&self, i: i64) -> usize {
        self.term_at(i).map(|t| t.dim).unwrap_or(0)
    }

    pub fn diff_from(&self, i: i64) -> Mat {
        if i >= self.min_deg && ((i - self.min_deg) as usize) < self.diffs.len() {
            self.diffs[(i - self.min_deg) as usize].clone()
        } else {
            Mat::zero(self.dim_at(i + 1), self.dim_at(i))
        }
    }

    pub fn underlying(&self) -> ChainComplex {
        ChainComplex::new(
            self.min_deg,
            self.terms.iter().map(|t| t.dim).collect(),
            self.diffs.clone(),
        )
        .expect("valid complex of modules")
    }

    pub fn tate_twist(&self, r: i32) -> PhiNComplex {
        PhiNComplex {
            p: self.p,
            min_deg: self.min_deg,
            terms: self.terms.iter().map(|t| t.tate_twist(r)).collect(),
            diffs: self.diffs.clone(),
        }
    }
}

/// Cohomology dimensions of a complex; errors on d∘d ≠ 0 are caught at
/// construction time, so this is total.
pub fn ext_dims(c: &ChainComplex) -> Vec<usize> {
    c.cohomology_dims().iter().map(|&(_, d)| d).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_is_valid() {
        assert!(PhiNModule::unit(5).validate().is_ok());
    }

    #[test]
    fn tate_curve_model_is_valid() {
        // φ = diag(1, p), N f = e
        let p = 5;
        let phi = Mat::from_int_rows(&[&[1, 0], &[0, 5]]);
        let n = Mat::from_int_rows(&[&[0, 1], &[0, 0]]);
        assert!(PhiNModule::new(p, phi, n).is_ok());
    }

    #[test]
    fn identity_phi_with_nonzero_n_rejected() {
        // N = pN forces N = 0: Nφ ≠ pφN
        let phi = Mat::identity(2);
        let n = Mat::from_int_rows(&[&[0, 1], &[0, 0]]);
        assert_eq!(
            PhiNModule::new(5, phi, n).unwrap_err(),
            PhiNViolation::CommutationFails
        );
    }

    #[test]
    fn twist_inverse() {
        let p = 5;
        let phi = Mat::from_int_rows(&[&[1, 0], &[0, 5]]);
        let n = Mat::from_int_rows(&[&[0, 1], &[0, 0]]);
        let m = PhiNModule::new(p, phi, n).unwrap();
        let back = m.tate_twist(2).tate_twist(-2);
        assert_eq!(m, back);
        assert!(m.tate_twist(3).validate().is_ok());
    }

    #[test]
    fn tensor_preserves_relation_and_n_rank() {
        let p = 5;
        let phi = Mat::from_int_rows(&[&[1, 0], &[0, 5]]);
        let n = Mat::from_int_rows(&[&[0, 1], &[0, 0]]);
        let tc = PhiNModule::new(p, phi, n).unwrap();
        let t2 = tc.tensor(&tc).unwrap();
        assert!(t2.validate().is_ok());
        assert_eq!(t2.dim, 4);
        assert_eq!(t2.n_op.rank(), 2);
    }

    #[test]
    fn dual_dual_identity_and_twist_additivity() {
        let p = 5;
        let phi = Mat::from_int_rows(&[&[1, 1], &[0, 1]]);
        let m = PhiNModule::new(p, phi, Mat::zero(2, 2)).unwrap();
        assert_eq!(m.dual().dual(), m);
        // Q_p(1) ⊗ Q_p(-1) = unit
        let one = PhiNModule::unit(p).tate_twist(1);
        let minus = PhiNModule::unit(p).tate_twist(-1);
        assert_eq!(one.tensor(&minus).unwrap(), PhiNModule::unit(p));
    }
}
