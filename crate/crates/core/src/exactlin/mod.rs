//! Exact linear algebra over the rationals.
//!
//! All semantic objects of the crate reduce to the three types here:
//! [`Rat`] (arbitrary-precision rationals), [`Mat`] (dense matrices) and
//! [`Subspace`] (subspaces stored in a canonical reduced echelon form, so
//! equality of subspaces is equality of representations).

mod rat;
mod mat;
mod subspace;
mod polyfactor;
mod quadform;
mod invariant;

pub use invariant::{invariant_subspaces, InfiniteWitness, InvariantLattice};
pub use mat::{rref_report, Mat, RrefReport};
pub use polyfactor::factor_rational_poly;
pub use quadform::ternary_isotropic_vector;
pub use rat::Rat;
pub use subspace::{Subspace, SubspaceError};
