//! Filtered (φ,N,G)-modules: weak admissibility, the homotopy-fiber Hom♭
//! computing derived Hom, semistable extension groups, and the extension
//! construction used to kill cokernel classes.
//!
//! The base field model is K = K₀ = Q_p with residue field F_p, so φ is
//! linear over the scalars and p-adic valuations are exact on Q. A finite
//! group may act linearly on the φ-side; the de Rham side carries the
//! filtration and is linked by an invertible comparison matrix.

mod admissible;
mod extension;
mod homflat;

pub use admissible::{is_weakly_admissible, is_weakly_admissible_seeded, AdmissibilityVerdict, AdmissibilityStatus};
pub use extension::{build_extension, kernel_cokernel, DfModuleMap, Extension, KernelCokernel};
pub use homflat::{equivariant_filtered_hom, h_st, hom_flat, FlatBlocks};
pub(crate) use homflat::{plain_hom_blocks, plain_hom_complex, plain_hom_range};

use crate::exactlin::{Mat, Rat, Subspace};
use crate::filtered::{FilteredComplex, FilteredSpace};
use crate::phimod::{PhiNComplex, PhiNModule};

/// A linear action of a finite group: a multiplication table and a matrix
/// representation on the φ-side of a module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupData {
    pub order: usize,
    pub mult_table: Vec<Vec<usize>>,
    pub rep: Vec<Mat>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DfError {
    #[error("group table is not a group: {0}")]
    BadGroup(&'static str),
    #[error("representation is not a homomorphism")]
    NotHomomorphism,
    #[error("group action does not commute with φ or N")]
    ActionNotEquivariant,
    #[error("comparison matrix is not invertible")]
    ComparisonNotInvertible,
    #[error("de Rham side dimension {0} does not match module dimension {1}")]
    DimensionMismatch(usize, usize),
    #[error("transported group action does not preserve the filtration")]
    ActionNotFiltered,
    #[error("φ/N structure invalid: {0}")]
    Phi(#[from] crate::phimod::PhiNViolation),
    #[error("filtration invalid: {0}")]
    Filtration(#[from] crate::filtered::FilteredError),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("map is not a morphism of filtered (φ,N,G)-modules: {0}")]
    NotMorphism(&'static str),
}

impl GroupData {
    pub fn identity_index(&self) -> Option<usize> {
        (0..self.order).find(|&e| (0..self.order).all(|b| self.mult_table[e][b] == b && self.mult_table[b][e] == b))
    }

    pub fn validate(&self, dim: usize) -> Result<(), DfError> {
        let n = self.order;
        if n == 0 || self.mult_table.len() != n || self.rep.len() != n {
            return Err(DfError::BadGroup("sizes inconsistent"));
        }
        for row in &self.mult_table {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(DfError::BadGroup("table entries out of range"));
            }
        }
        // rows and columns are permutations (inverses exist)
        for a in 0..n {
            let mut seen_r = vec![false; n];
            let mut seen_c = vec![false; n];
            for b in 0..n {
                seen_r[self.mult_table[a][b]] = true;
                seen_c[self.mult_table[b][a]] = true;
            }
            if seen_r.iter().any(|&s| !s) || seen_c.iter().any(|&s| !s) {
                return Err(DfError::BadGroup("table rows/columns not permutations"));
            }
        }
        // associativity
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mult_table[self.mult_table[a][b]][c]
                        != self.mult_table[a][self.mult_table[b][c]]
                    {
                        return Err(DfError::BadGroup("table not associative"));
                    }
                }
            }
        }
        let e = self.identity_index().ok_or(DfError::BadGroup("no identity"))?;
        if !self.rep[e].is_identity() {
            return Err(DfError::NotHomomorphism);
        }
        for g in &self.rep {
            if !g.is_square() || g.rows() != dim || g.inverse().is_none() {
                return Err(DfError::NotHomomorphism);
            }
        }
        for a in 0..n {
            for b in 0..n {
                if (&self.rep[a] * &self.rep[b]) != self.rep[self.mult_table[a][b]] {
                    return Err(DfError::NotHomomorphism);
                }
            }
        }
        Ok(())
    }

    /// Trivial group on one element.
    pub fn trivial(dim: usize) -> Self {
        GroupData { order: 1, mult_table: vec![vec![0]], rep: vec![Mat::identity(dim)] }
    }
}

/// A filtered (φ,N,G)-module: a (φ,N)-module D₀ with an optional finite
/// group action, a filtered de Rham side D_K of the same dimension, and an
/// invertible comparison D₀ → D_K.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredPhiNModule {
    pub base: PhiNModule,
    pub galois: Option<GroupData>,
    pub dr_side: FilteredSpace,
    pub comparison: Mat,
}

impl FilteredPhiNModule {
    pub fn new(
        base: PhiNModule,
        galois: Option<GroupData>,
        dr_side: FilteredSpace,
        comparison: Mat,
    ) -> Result<Self, DfError> {
        let m = FilteredPhiNModule { base, galois, dr_side, comparison };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), DfError> {
        self.base.validate()?;
        if self.dr_side.dim() != self.base.dim {
            return Err(DfError::DimensionMismatch(self.dr_side.dim(), self.base.dim));
        }
        if !self.comparison.is_square() || self.comparison.rows() != self.base.dim {
            return Err(DfError::DimensionMismatch(self.comparison.rows(), self.base.dim));
        }
        let cinv = self
            .comparison
            .inverse()
            .ok_or(DfError::ComparisonNotInvertible)?;
        if let Some(g) = &self.galois {
            g.validate(self.base.dim)?;
            for r in &g.rep {
                if (r * &self.base.phi) != (&self.base.phi * r)
                    || (r * &self.base.n_op) != (&self.base.n_op * r)
                {
                    return Err(DfError::ActionNotEquivariant);
                }
                // the transported action must respect the de Rham filtration,
                // the desk-scale shadow of acting trivially on the descended side
                let transported = &(&self.comparison * r) * &cinv;
                for (i, s) in self.dr_side.steps() {
                    if !self
                        .dr_side
                        .filtration_at(*i)
                        .contains(&s.image_under(&transported))
                    {
                        return Err(DfError::ActionNotFiltered);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.base.p
    }

    pub fn dim(&self) -> usize {
        self.base.dim
    }

    /// The unit object: 1-dimensional, φ = 1, N = 0, jump at 0.
    pub fn unit(p: u64) -> Self {
        FilteredPhiNModule {
            base: PhiNModule::unit(p),
            galois: None,
            dr_side: FilteredSpace::trivial(1, 0),
            comparison: Mat::identity(1),
        }
    }

    /// Tate twist: φ ↦ p^{-r}φ, N fixed, filtration shifted by −r.
    pub fn tate_twist(&self, r: i32) -> FilteredPhiNModule {
        FilteredPhiNModule {
            base: self.base.tate_twist(r),
            galois: self.galois.clone(),
            dr_side: self.dr_side.twist(r as i64),
            comparison: self.comparison.clone(),
        }
    }

    /// The Newton number: the p-adic valuation of det φ.
    pub fn t_n(&self) -> i64 {
        let det = self.base.phi.det();
        det.valuation(self.p()).expect("φ invertible so det ≠ 0")
    }

    /// The Hodge number of the de Rham filtration.
    pub fn t_h(&self) -> i64 {
        self.dr_side.t_h()
    }

    pub fn tensor(&self, other: &FilteredPhiNModule) -> Result<FilteredPhiNModule, DfError> {
        if self.p() != other.p() {
            return Err(DfError::PrimeMismatch(self.p(), other.p()));
        }
        assert!(
            self.galois.is_none() && other.galois.is_none(),
            "tensor with group actions is out of scope"
        );
        Ok(FilteredPhiNModule {
            base: self.base.tensor(&other.base)?,
            galois: None,
            dr_side: self.dr_side.tensor(&other.dr_side),
            comparison: self.comparison.kron(&other.comparison),
        })
    }

    pub fn direct_sum(&self, other: &FilteredPhiNModule) -> Result<FilteredPhiNModule, DfError> {
        if self.p() != other.p() {
            return Err(DfError::PrimeMismatch(self.p(), other.p()));
        }
        assert!(self.galois.is_none() && other.galois.is_none());
        let dim = self.dim() + other.dim();
        let inc1 = Mat::from_fn(dim, self.dim(), |i, j| {
            if i == j { Rat::one() } else { Rat::zero() }
        });
        let inc2 = Mat::from_fn(dim, other.dim(), |i, j| {
            if i == j + self.dim() { Rat::one() } else { Rat::zero() }
        });
        let lo = -1 + self
            .dr_side
            .jump_indices()
            .iter()
            .chain(other.dr_side.jump_indices().iter())
            .min()
            .copied()
            .unwrap_or(0);
        let hi = self
            .dr_side
            .jump_indices()
            .iter()
            .chain(other.dr_side.jump_indices().iter())
            .max()
            .copied()
            .unwrap_or(0);
        let mut raw = vec![(lo, Subspace::whole(dim))];
        for j in lo..=hi {
            let a = self.dr_side.filtration_at(j).image_under(&inc1);
            let b = other.dr_side.filtration_at(j).image_under(&inc2);
            raw.push((j, a.sum(&b).unwrap()));
        }
        Ok(FilteredPhiNModule {
            base: self.base.direct_sum(&other.base)?,
            galois: None,
            dr_side: FilteredSpace::new(dim, raw)?,
            comparison: self.comparison.direct_sum(&other.comparison),
        })
    }

    /// Isomorphic copy: conjugate the base by `t0` and transport the de Rham
    /// side along `tk`.
    pub fn change_basis(&self, t0: &Mat, tk: &Mat) -> FilteredPhiNModule {
        let base = self.base.change_basis(t0);
        let galois = self.galois.as_ref().map(|g| {
            let ti = t0.inverse().unwrap();
            GroupData {
                order: g.order,
                mult_table: g.mult_table.clone(),
                rep: g.rep.iter().map(|r| &(t0 * r) * &ti).collect(),
            }
        });
        FilteredPhiNModule {
            base,
            galois,
            dr_side: self.dr_side.transport(tk),
            comparison: &(tk * &self.comparison) * &t0.inverse().unwrap(),
        }
    }

    /// Generators whose common invariant subspaces are the subobjects.
    pub fn stability_generators(&self) -> Vec<Mat> {
        let mut gens = vec![self.base.phi.clone(), self.base.n_op.clone()];
        if let Some(g) = &self.galois {
            gens.extend(g.rep.iter().cloned());
        }
        gens
    }

    /// The subobject supported on a φ,N,G-stable subspace, with the induced
    /// filtration transported through the comparison.
    pub fn subobject(&self, w: &Subspace) -> FilteredPhiNModule {
        let b = w.basis_mat();
        let restrict = |m: &Mat| -> Mat {
            let cols: Vec<Vec<Rat>> = (0..w.dim())
                .map(|j| b.solve(&m.apply(&b.col(j))).expect("subspace must be stable"))
                .collect();
            Mat::from_cols(w.dim(), &cols)
        };
        let base = PhiNModule {
            p: self.p(),
            dim: w.dim(),
            phi: restrict(&self.base.phi),
            n_op: restrict(&self.base.n_op),
        };
        let galois = self.galois.as_ref().map(|g| GroupData {
            order: g.order,
            mult_table: g.mult_table.clone(),
            rep: g.rep.iter().map(restrict).collect(),
        });
        // de Rham side: the image c(W) with the subspace filtration, in the
        // coordinates of W so the comparison becomes the identity.
        let incl_k = &self.comparison * &b;
        let dr_side = self.dr_side.induced_sub(&incl_k);
        FilteredPhiNModule {
            base,
            galois,
            dr_side,
            comparison: Mat::identity(w.dim()),
        }
    }
}

/// A bounded complex of filtered (φ,N,G)-modules. Differentials live on the
/// φ-side; their de Rham transports must preserve the filtrations.
#[derive(Clone, Debug)]
pub struct DfComplex {
    pub p: u64,
    pub min_deg: i64,
    pub terms: Vec<FilteredPhiNModule>,
    pub diffs: Vec<Mat>,
}

impl DfComplex {
    pub fn new(
        p: u64,
        min_deg: i64,
        terms: Vec<FilteredPhiNModule>,
        diffs: Vec<Mat>,
    ) -> Result<Self, DfError> {
        for t in &terms {
            if t.p() != p {
                return Err(DfError::PrimeMismatch(p, t.p()));
            }
            t.validate()?;
        }
        let c = DfComplex { p, min_deg, terms, diffs };
        c.phi_side()?;
        c.dr_complex()?;
        // group equivariance of differentials
        for i in c.min_deg..c.max_deg() {
            if let (Some(s), Some(t)) = (c.term_at(i), c.term_at(i + 1)) {
                let d = c.diff_from(i);
                match (&s.galois, &t.galois) {
                    (Some(gs), Some(gt)) if gs.order == gt.order => {
                        for (a, b) in gs.rep.iter().zip(&gt.rep) {
                            if (&d * a) != (b * &d) {
                                return Err(DfError::NotMorphism("group equivariance"));
                            }
                        }
                    }
                    (None, None) => {}
                    _ => return Err(DfError::NotMorphism("group data mismatch")),
                }
            }
        }
        Ok(c)
    }

    pub fn concentrated(m: FilteredPhiNModule) -> Self {
        DfComplex { p: m.p(), min_deg: 0, terms: vec![m], diffs: vec![] }
    }

    pub fn max_deg(&self) -> i64 {
        self.min_deg + self.terms.len() as i64 - 1
    }

    pub fn term_at(&self, i: i64) -> Option<&FilteredPhiNModule> {
        if i < self.min_deg {
            return None;
        }
        self.terms.get((i - self.min_deg) as usize)
    }

    pub fn dim_at(&self, i: i64) -> usize {
        self.term_at(i).map(|t| t.dim()).unwrap_or(0)
    }

    pub fn diff_from(&self, i: i64) -> Mat {
        if i >= self.min_deg && ((i - self.min_deg) as usize) < self.diffs.len() {
            self.diffs[(i - self.min_deg) as usize].clone()
        } else {
            Mat::zero(self.dim_at(i + 1), self.dim_at(i))
        }
    }

    /// The φ-side as a complex of (φ,N)-modules.
    pub fn phi_side(&self) -> Result<PhiNComplex, DfError> {
        Ok(PhiNComplex::new(
            self.p,
            self.min_deg,
            self.terms.iter().map(|t| t.base.clone()).collect(),
            self.diffs.clone(),
        )?)
    }

    /// The de Rham side as a filtered complex, with differentials
    /// transported through the comparisons.
    pub fn dr_complex(&self) -> Result<FilteredComplex, DfError> {
        let mut kdiffs = Vec::new();
        for k in 0..self.diffs.len() {
            let i = self.min_deg + k as i64;
            let cs = &self.term_at(i).unwrap().comparison;
            let ct = &self.term_at(i + 1).unwrap().comparison;
            let csi = cs.inverse().ok_or(DfError::ComparisonNotInvertible)?;
            kdiffs.push(&(ct * &self.diffs[k]) * &csi);
        }
        Ok(FilteredComplex::new(
            self.min_deg,
            self.terms.iter().map(|t| t.dr_side.clone()).collect(),
            kdiffs,
        )?)
    }

    pub fn tate_twist(&self, r: i32) -> DfComplex {
        DfComplex {
            p: self.p,
            min_deg: self.min_deg,
            terms: self.terms.iter().map(|t| t.tate_twist(r)).collect(),
            diffs: self.diffs.clone(),
        }
    }

    /// The cohomology in one degree as a filtered (φ,N,G)-module, in the
    /// canonical class coordinates shared by both sides.
    pub fn cohomology_module(&self, n: i64) -> FilteredPhiNModule {
        let phi_side = self.phi_side().expect("validated");
        let under = phi_side.underlying();
        let h = under.cohomology_at(n);
        let induce = |m: &Mat| -> Mat {
            // class_map ∘ m ∘ reps: action on cohomology classes
            &h.class_map * &(m * &h.reps)
        };
        let (phi, n_op, rep) = match self.term_at(n) {
            Some(t) => (
                induce(&t.base.phi),
                induce(&t.base.n_op),
                t.galois.as_ref().map(|g| GroupData {
                    order: g.order,
                    mult_table: g.mult_table.clone(),
                    rep: g.rep.iter().map(&induce).collect(),
                }),
            ),
            None => (Mat::zero(0, 0), Mat::zero(0, 0), None),
        };
        // de Rham cohomology of the transported complex, then express the
        // filtration in the φ-side class coordinates via the comparison.
        let drc = self.dr_complex().expect("validated");
        let hk = drc.underlying().cohomology_at(n);
        let dr_filtered = drc.cohomology_object_in(&hk);
        let comparison = match self.term_at(n) {
            Some(t) => &hk.class_map * &(&t.comparison * &h.reps),
            None => Mat::zero(0, 0),
        };
        FilteredPhiNModule {
            base: PhiNModule { p: self.p, dim: h.dim, phi, n_op },
            galois: rep,
            dr_side: dr_filtered,
            comparison,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn unit_module_valid_and_numbers() {
        let u = FilteredPhiNModule::unit(5);
        assert!(u.validate().is_ok());
        assert_eq!(u.t_n(), 0);
        assert_eq!(u.t_h(), 0);
    }

    #[test]
    fn qp1_numbers() {
        let q1 = FilteredPhiNModule::unit(5).tate_twist(1);
        assert_eq!(q1.t_n(), -1);
        assert_eq!(q1.t_h(), -1);
        assert_eq!(q1.tate_twist(-1), FilteredPhiNModule::unit(5));
    }

    #[test]
    fn tate_curve_numbers() {
        let tc = fixtures::tate_curve(5, &Rat::one());
        assert!(tc.validate().is_ok());
        assert_eq!(tc.t_n(), 1);
        assert_eq!(tc.t_h(), 1);
    }

    #[test]
    fn subobject_induced_structure() {
        let tc = fixtures::tate_curve(5, &Rat::one());
        let e_line = Subspace::span(2, &[vec![Rat::one(), Rat::zero()]]);
        let sub = tc.subobject(&e_line);
        assert!(sub.validate().is_ok());
        assert_eq!(sub.t_n(), 0);
        assert_eq!(sub.t_h(), 0);
    }

    #[test]
    fn cohomology_module_of_concentrated_complex() {
        let tc = fixtures::tate_curve(5, &Rat::one());
        let c = DfComplex::concentrated(tc.clone());
        let h0 = c.cohomology_module(0);
        assert!(h0.validate().is_ok());
        assert_eq!(h0.dim(), 2);
        assert_eq!(h0.t_n(), tc.t_n());
        assert_eq!(h0.t_h(), tc.t_h());
        assert_eq!(c.cohomology_module(1).dim(), 0);
    }

    #[test]
    fn group_validation() {
        let mut g = GroupData::trivial(2);
        assert!(g.validate(2).is_ok());
        g.rep[0] = Mat::zero(2, 2);
        assert!(g.validate(2).is_err());

        // order-2 group acting by a sign swap, compatible with φ = id, N = 0
        let swap = Mat::from_int_rows(&[&[0, 1], &[1, 0]]);
        let c2 = GroupData {
            order: 2,
            mult_table: vec![vec![0, 1], vec![1, 0]],
            rep: vec![Mat::identity(2), swap],
        };
        assert!(c2.validate(2).is_ok());
        let m = FilteredPhiNModule::new(
            PhiNModule::new(5, Mat::identity(2), Mat::zero(2, 2)).unwrap(),
            Some(c2),
            FilteredSpace::trivial(2, 0),
            Mat::identity(2),
        );
        assert!(m.is_ok());
    }
}
