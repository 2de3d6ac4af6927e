//! hodgeforge: exact-arithmetic computations with filtered (φ,N,G)-modules,
//! p-adic Hodge complexes, syntomic cohomology and the descent spectral sequence.
//!
//! Everything is computed over the exact rationals; there is no floating
//! point anywhere. The main layers, bottom to top:
//!
//! * [`exactlin`] — matrices, subspaces, invariant-subspace lattices;
//! * [`phimod`] — (φ,N)-modules and their derived Hom complexes;
//! * [`filtered`] — filtered vector spaces, strictness, truncations;
//! * [`dfmod`] — filtered (φ,N,G)-modules, weak admissibility, Hom♭;
//! * [`phodge`] — p-adic Hodge complexes, θ, syntomic cohomology;
//! * [`syntomic`] — the descent spectral sequence, C_pst, exp_BK;
//! * [`fixtures`], [`json`] — the fixture corpus and the JSON formats.

#![allow(clippy::needless_range_loop)]

pub mod exactlin;
pub mod phimod;
pub mod filtered;
pub mod dfmod;
pub mod phodge;
pub mod syntomic;
pub mod fixtures;
pub mod sample;
pub mod json;

pub use exactlin::{Mat, Rat, Subspace};
