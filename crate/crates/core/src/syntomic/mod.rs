//! The syntomic descent spectral sequence as a double-complex engine,
//! E₂-degeneration checking against hard Lefschetz data, and the
//! Bloch–Kato complex with its exponential boundary map.

mod bk;
mod ss;

pub use bk::{c_pst, exp_bk, geometric_evaluation, CPstComplex};
pub use ss::{check_degeneration, descent_ss, DegenerationReport, SpectralSequenceReport};
