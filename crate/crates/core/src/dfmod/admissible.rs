use super::FilteredPhiNModule;
use crate::exactlin::{invariant_subspaces, InvariantLattice, Mat, Rat, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Outcome of the weak-admissibility test.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityVerdict {
    pub status: AdmissibilityStatus,
    pub t_n: i64,
    pub t_h: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AdmissibilityStatus {
    /// t_N = t_H and every stable subobject of the finite lattice satisfies
    /// t_N ≥ t_H; `scanned` counts the subobjects checked.
    Admissible { scanned: usize },
    /// A stable subobject violating the inequality (or the top-level
    /// equality failing, with the whole space as witness).
    NotAdmissible {
        witness: Subspace,
        witness_t_n: i64,
        witness_t_h: i64,
    },
    /// The subobject lattice is infinite; randomized stable subspaces found
    /// no violation.
    ProbablyAdmissible { trials: usize, seed: u64 },
}

pub const DEFAULT_TRIALS: usize = 1000;
pub const DEFAULT_SEED: u64 = 0x68646765;

pub fn is_weakly_admissible(d: &FilteredPhiNModule) -> AdmissibilityVerdict {
    is_weakly_admissible_seeded(d, DEFAULT_TRIALS, DEFAULT_SEED)
}

pub fn is_weakly_admissible_seeded(
    d: &FilteredPhiNModule,
    trials: usize,
    seed: u64,
) -> AdmissibilityVerdict {
    let t_n = d.t_n();
    let t_h = d.t_h();
    if t_n != t_h {
        return AdmissibilityVerdict {
            status: AdmissibilityStatus::NotAdmissible {
                witness: Subspace::whole(d.dim()),
                witness_t_n: t_n,
                witness_t_h: t_h,
            },
            t_n,
            t_h,
        };
    }
    let gens = d.stability_generators();
    match invariant_subspaces(&gens, d.dim()) {
        InvariantLattice::Finite(subs) => {
            let mut scanned = 0;
            for w in &subs {
                if w.is_zero() {
                    continue;
                }
                scanned += 1;
                let sub = d.subobject(w);
                if sub.t_n() < sub.t_h() {
                    return AdmissibilityVerdict {
                        status: AdmissibilityStatus::NotAdmissible {
                            witness: w.clone(),
                            witness_t_n: sub.t_n(),
                            witness_t_h: sub.t_h(),
                        },
                        t_n,
                        t_h,
                    };
                }
            }
            AdmissibilityVerdict {
                status: AdmissibilityStatus::Admissible { scanned },
                t_n,
                t_h,
            }
        }
        InvariantLattice::InfiniteFamily(_) => {
            // randomized scan over stable subspaces generated by spinning
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let w = random_stable_subspace(d, &gens, &mut rng);
                if w.is_zero() || w.is_whole() {
                    continue;
                }
                let sub = d.subobject(&w);
                if sub.t_n() < sub.t_h() {
                    return AdmissibilityVerdict {
                        status: AdmissibilityStatus::NotAdmissible {
                            witness: w,
                            witness_t_n: sub.t_n(),
                            witness_t_h: sub.t_h(),
                        },
                        t_n,
                        t_h,
                    };
                }
            }
            AdmissibilityVerdict {
                status: AdmissibilityStatus::ProbablyAdmissible { trials, seed },
                t_n,
                t_h,
            }
        }
    }
}

/// A random φ,N,G-stable subspace: the span of the orbits of one or two
/// random vectors under words in the generators.
fn random_stable_subspace(
    d: &FilteredPhiNModule,
    gens: &[Mat],
    rng: &mut ChaCha20Rng,
) -> Subspace {
    let n = d.dim();
    let mut vectors: Vec<Vec<Rat>> = Vec::new();
    let seeds = 1 + (rng.gen::<u8>() % 2) as usize;
    for _ in 0..seeds {
        let v: Vec<Rat> = (0..n)
            .map(|_| Rat::from_int(rng.gen_range(-3i64..=3)))
            .collect();
        vectors.push(v);
    }
    // spin to closure
    let mut span = Subspace::span(n, &vectors);
    loop {
        let mut grew = false;
        for g in gens {
            let img = span.image_under(g);
            let sum = span.sum(&img).unwrap();
            if sum.dim() > span.dim() {
                span = sum;
                grew = true;
            }
        }
        if !grew {
            return span;
        }
    }
}
