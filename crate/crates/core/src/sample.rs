//! Randomized generators for modules and complexes, used by the randomized
//! verification modes and the test suite. All generators are deterministic
//! functions of the supplied RNG.

use crate::dfmod::{DfComplex, FilteredPhiNModule};
use crate::exactlin::{Mat, Rat, Subspace};
use crate::filtered::FilteredSpace;
use crate::fixtures;
use rand::Rng;

/// A random invertible matrix: a product of elementary row operations.
pub fn unimodular(rng: &mut impl Rng, n: usize) -> Mat {
    let mut m = Mat::identity(n);
    if n == 0 {
        return m;
    }
    for _ in 0..(2 * n + 2) {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        if n > 1 {
            while j == i {
                j = rng.gen_range(0..n);
            }
        }
        let c = Rat::from_int(rng.gen_range(-2i64..=2));
        if i != j && !c.is_zero() {
            // row_i += c * row_j
            let mut e = Mat::identity(n);
            e.set(i, j, c);
            m = &e * &m;
        }
    }
    m
}

/// A random weakly admissible module: direct sums of admissible building
/// blocks, twisted and moved by a random change of basis.
pub fn admissible_module(rng: &mut impl Rng, p: u64, max_dim: usize) -> FilteredPhiNModule {
    assert!(max_dim >= 1);
    let mut m: Option<FilteredPhiNModule> = None;
    let mut dim = 0;
    while dim < max_dim {
        let remaining = max_dim - dim;
        let pick = rng.gen_range(0..5u8);
        let block = match pick {
            0 => fixtures::qp(p, rng.gen_range(-2..=2)),
            1 => fixtures::unramified(p, &Rat::from_int([2, 3, 7][rng.gen_range(0..3)])),
            2 if remaining >= 2 => {
                fixtures::tate_curve(p, &Rat::from_int(rng.gen_range(-2i64..=2)))
            }
            3 if remaining >= 2 => fixtures::good_ordinary_elliptic(p),
            _ => fixtures::qp(p, rng.gen_range(-1..=1)),
        };
        dim += block.dim();
        m = Some(match m {
            None => block,
            Some(acc) => acc.direct_sum(&block).unwrap(),
        });
        if rng.gen_bool(0.4) {
            break;
        }
    }
    let mut m = m.unwrap();
    if rng.gen_bool(0.5) {
        m = m.tate_twist(rng.gen_range(-1..=1));
    }
    let t0 = unimodular(rng, m.dim());
    let tk = unimodular(rng, m.dim());
    m.change_basis(&t0, &tk)
}

/// A random valid module with an arbitrary filtration (not necessarily
/// admissible): admissible φ/N data with the de Rham side replaced by a
/// random flag and comparison.
pub fn module_with_random_filtration(
    rng: &mut impl Rng,
    p: u64,
    max_dim: usize,
) -> FilteredPhiNModule {
    let base = admissible_module(rng, p, max_dim);
    let dim = base.dim();
    let dr_side = random_filtration(rng, dim);
    let comparison = unimodular(rng, dim);
    FilteredPhiNModule::new(base.base.clone(), None, dr_side, comparison)
        .expect("random module is valid")
}

/// A random decreasing exhaustive separated filtration.
pub fn random_filtration(rng: &mut impl Rng, dim: usize) -> FilteredSpace {
    if dim == 0 {
        return FilteredSpace::trivial(0, 0);
    }
    // random flag through a unimodular matrix, random jump positions
    let t = unimodular(rng, dim);
    let mut steps: Vec<(i64, Subspace)> = Vec::new();
    let mut jump = rng.gen_range(-2..=0i64);
    let mut cur = dim;
    steps.push((jump, Subspace::whole(dim)));
    while cur > 0 {
        let drop = rng.gen_range(1..=cur);
        cur -= drop;
        jump += rng.gen_range(1..=2i64);
        if cur > 0 {
            let cols: Vec<Vec<Rat>> = (0..cur).map(|j| t.col(j)).collect();
            steps.push((jump, Subspace::span(dim, &cols)));
        }
    }
    FilteredSpace::new(dim, steps).expect("random flag is a filtration")
}

/// A random bounded complex of admissible modules with honest differentials:
/// consecutive maps are sampled from the equivariant filtered Hom spaces with
/// the composite-zero condition imposed.
pub fn random_complex(rng: &mut impl Rng, p: u64, len: usize, max_dim: usize) -> DfComplex {
    assert!(len >= 1);
    let terms: Vec<FilteredPhiNModule> = (0..len)
        .map(|_| admissible_module(rng, p, max_dim))
        .collect();
    let mut diffs: Vec<Mat> = Vec::new();
    for k in 0..len - 1 {
        let hom = crate::dfmod::equivariant_filtered_hom(&terms[k], &terms[k + 1]);
        // impose d ∘ d_prev = 0
        let space = match diffs.last() {
            None => hom,
            Some(prev) => {
                let cond = crate::phimod::right_mul_op_pub(prev, terms[k + 1].dim());
                hom.intersect(&Subspace::kernel_of(&cond)).unwrap()
            }
        };
        let d = random_element(rng, &space, terms[k + 1].dim(), terms[k].dim());
        diffs.push(d);
    }
    DfComplex::new(p, 0, terms, diffs).expect("sampled complex is valid")
}

/// A random element of a subspace of a matrix space, reshaped.
pub fn random_element(rng: &mut impl Rng, space: &Subspace, rows: usize, cols: usize) -> Mat {
    let mut v = vec![Rat::zero(); rows * cols];
    for b in space.basis() {
        let c = Rat::from_int(rng.gen_range(-2i64..=2));
        for (x, y) in v.iter_mut().zip(&b) {
            *x += &c * y;
        }
    }
    Mat::from_vec_coords(rows, cols, &v)
}

/// A random morphism between admissible modules with a guaranteed nonzero
/// Hom space: the composite of a projection off a direct sum and an
/// inclusion, conjugated on both sides.
pub fn random_admissible_pair_with_map(
    rng: &mut impl Rng,
    p: u64,
    max_dim: usize,
) -> (FilteredPhiNModule, FilteredPhiNModule, Mat) {
    let a = admissible_module(rng, p, max_dim);
    let b = admissible_module(rng, p, max_dim);
    let source = a.clone();
    let target = a.direct_sum(&b).unwrap();
    let t0 = unimodular(rng, target.dim());
    let tk = unimodular(rng, target.dim());
    let target = target.change_basis(&t0, &tk);
    let hom = crate::dfmod::equivariant_filtered_hom(&source, &target);
    let f = random_element(rng, &hom, target.dim(), source.dim());
    (source, target, f)
}
