use super::{DfComplex, FilteredPhiNModule};
use crate::exactlin::{Mat, Rat, Subspace};
use crate::filtered::hom_dr;
use crate::phimod::{
    hom_sharp_phin_complexes, left_mul_op, right_mul_op, sharp_blocks,
    sharp_range, ChainComplex,
};

/// Dimension bookkeeping of the assembled Hom♭ complex: per total degree,
/// the sizes of the Hom♯ part, the filtered part, and the glued part (one
/// degree lower).
#[derive(Clone, Debug)]
pub struct FlatBlocks {
    pub min_deg: i64,
    pub sharp_dims: Vec<usize>,
    pub dr_dims: Vec<usize>,
    pub glue_dims: Vec<usize>,
}

/// Blocks of the plain Hom complex between two graded complexes at total
/// degree n: (source degree i, offset, rows, cols).
pub(crate) fn plain_hom_blocks(
    src: &ChainComplex,
    tgt: &ChainComplex,
    n: i64,
) -> Vec<(i64, usize, usize, usize)> {
    let mut out = Vec::new();
    let mut off = 0;
    if src.total_dim() == 0 {
        return out;
    }
    for i in src.min_deg()..=src.max_deg() {
        let rows = tgt.dim_at(i + n);
        let cols = src.dim_at(i);
        if rows * cols > 0 {
            out.push((i, off, rows, cols));
            off += rows * cols;
        }
    }
    out
}

fn plain_hom_dim(src: &ChainComplex, tgt: &ChainComplex, n: i64) -> usize {
    plain_hom_blocks(src, tgt, n).iter().map(|b| b.2 * b.3).sum()
}

/// The assembled Hom complex of plain complexes, with differential
/// d(f) = d_T ∘ f − (−1)^n f ∘ d_M.
pub(crate) fn plain_hom_complex(src: &ChainComplex, tgt: &ChainComplex) -> ChainComplex {
    let (lo, hi) = plain_hom_range(src, tgt);
    if lo > hi {
        return ChainComplex::zero();
    }
    let dims: Vec<usize> = (lo..=hi).map(|n| plain_hom_dim(src, tgt, n)).collect();
    let mut diffs = Vec::new();
    for n in lo..hi {
        let sblocks = plain_hom_blocks(src, tgt, n);
        let tblocks = plain_hom_blocks(src, tgt, n + 1);
        let mut d = Mat::zero(plain_hom_dim(src, tgt, n + 1), plain_hom_dim(src, tgt, n));
        let sign = if (n % 2 + 2) % 2 == 0 { Rat::one() } else { -Rat::one() };
        for &(i, soff, rows, cols) in &sblocks {
            // left d_T to block i
            if let Some(&(_, toff, _, _)) = tblocks.iter().find(|b| b.0 == i) {
                let m = left_mul_op(&tgt.diff_from(i + n), cols);
                crate::phimod::add_block_pub(&mut d, toff, soff, &m);
            }
            // -(-1)^n right d_M to block i-1
            if let Some(&(_, toff, _, _)) = tblocks.iter().find(|b| b.0 == i - 1) {
                let m = right_mul_op(&src.diff_from(i - 1), rows).scale(&(-sign.clone()));
                crate::phimod::add_block_pub(&mut d, toff, soff, &m);
            }
        }
        diffs.push(d);
    }
    ChainComplex::new(lo, dims, diffs).expect("plain Hom complex squares to zero")
}

pub(crate) fn plain_hom_range(src: &ChainComplex, tgt: &ChainComplex) -> (i64, i64) {
    if src.total_dim() == 0 || tgt.total_dim() == 0 {
        return (0, -1);
    }
    (tgt.min_deg() - src.max_deg(), tgt.max_deg() - src.min_deg())
}

/// Conjugation-invariant subspace of a blocked Hom space under the group
/// actions of the two complexes, per degree. `None` when both sides carry no
/// group (no restriction needed).
fn equivariant_subspace(
    m: &DfComplex,
    t: &DfComplex,
    blocks: &[(i64, usize, usize, usize)],
    total: usize,
    shift_of_block: impl Fn(i64) -> i64,
) -> Option<Subspace> {
    let gm = m.terms.iter().find_map(|x| x.galois.as_ref());
    let gt = t.terms.iter().find_map(|x| x.galois.as_ref());
    if gm.is_none() && gt.is_none() {
        return None;
    }
    let order = gm.or(gt).unwrap().order;
    let mut projector = Mat::zero(total, total);
    for g in 0..order {
        let mut op = Mat::zero(total, total);
        for &(i, off, rows, cols) in blocks {
            let k = shift_of_block(i);
            let rho_t = t
                .term_at(i + k)
                .and_then(|x| x.galois.as_ref().map(|gd| gd.rep[g].clone()))
                .unwrap_or_else(|| Mat::identity(rows));
            let rho_m_inv = m
                .term_at(i)
                .and_then(|x| x.galois.as_ref().map(|gd| gd.rep[g].inverse().unwrap()))
                .unwrap_or_else(|| Mat::identity(cols));
            let conj = &left_mul_op(&rho_t, cols) * &right_mul_op(&rho_m_inv, rows);
            crate::phimod::add_block_pub(&mut op, off, off, &conj);
        }
        projector = &projector + &op;
    }
    let inv_order = Rat::new(1, order as i64);
    Some(Subspace::image_of(&projector.scale(&inv_order)))
}

/// The homotopy fiber Hom♭(M,T) of
/// Hom♯(M₀,T₀) ⊕ Hom_dr(M_K,T_K) → Hom_G(M_K̄,T_K̄),
/// assembled as an explicit complex. Returns the complex and its block
/// bookkeeping.
pub fn hom_flat(m: &DfComplex, t: &DfComplex) -> (ChainComplex, FlatBlocks) {
    assert_eq!(m.p, t.p, "prime mismatch");
    let m0 = m.phi_side().expect("validated");
    let t0 = t.phi_side().expect("validated");
    let m0u = m0.underlying();
    let t0u = t0.underlying();
    let mk = m.dr_complex().expect("validated").underlying();
    let tk = t.dr_complex().expect("validated").underlying();

    // Hom♯ node, restricted to equivariant cochains when a group acts.
    let (sharp_lo, sharp_hi) = sharp_range(&m0, &t0);
    let sharp_full = hom_sharp_phin_complexes(&m0, &t0, None);
    let sharp_subs: Vec<Subspace> = (sharp_lo..=sharp_hi)
        .map(|n| {
            let lay = sharp_blocks(&m0, &t0, n);
            let blocks: Vec<(i64, usize, usize, usize)> = lay
                .blocks
                .iter()
                .map(|&(_, i, off, rows, cols)| (i, off, rows, cols))
                .collect();
            // shift per part: recover from the layout by part index
            let shifts: std::collections::BTreeMap<(usize, i64), i64> = lay
                .blocks
                .iter()
                .map(|&(part, i, _, _, _)| {
                    let shift = match part {
                        0 => n,
                        1 | 2 => n - 1,
                        _ => n - 2,
                    };
                    ((part, i), shift)
                })
                .collect();
            // equivariance block per (part, i): use a lookup over both keys
            let mut total = 0;
            for b in &blocks {
                total += b.2 * b.3;
            }
            match equivariant_group_projection(m, t, &lay.blocks, total, &shifts) {
                Some(s) => s,
                None => Subspace::whole(lay.total),
            }
        })
        .collect();
    let sharp = sharp_full.subcomplex(&sharp_subs);

    // Filtered node: plain Hom of the de Rham sides restricted to
    // filtration-preserving (and transported-equivariant) cochains.
    let dr_full = plain_hom_complex(&mk, &tk);
    let (dr_lo, dr_hi) = plain_hom_range(&mk, &tk);
    let dr_subs: Vec<Subspace> = if dr_lo > dr_hi {
        vec![]
    } else {
        (dr_lo..=dr_hi)
            .map(|n| {
                let blocks = plain_hom_blocks(&mk, &tk, n);
                let total: usize = blocks.iter().map(|b| b.2 * b.3).sum();
                let mut sub = {
                    // direct sum of hom_dr subspaces per block
                    let mut vectors: Vec<Vec<Rat>> = Vec::new();
                    for &(i, off, rows, cols) in &blocks {
                        let local = hom_dr(
                            &m.term_at(i).unwrap().dr_side,
                            &t.term_at(i + n).unwrap().dr_side,
                        );
                        for b in local.basis() {
                            let mut v = vec![Rat::zero(); total];
                            v[off..off + rows * cols].clone_from_slice(&b);
                            vectors.push(v);
                        }
                    }
                    Subspace::span(total, &vectors)
                };
                // transported group equivariance on the de Rham side
                if let Some(eq) = transported_equivariant_subspace(m, t, &blocks, total, n) {
                    sub = sub.intersect(&eq).unwrap();
                }
                sub
            })
            .collect()
    };
    let dr_node = dr_full.subcomplex(&dr_subs);

    // Glued node: equivariant plain Hom of the φ-sides.
    let g_full = plain_hom_complex(&m0u, &t0u);
    let (g_lo, g_hi) = plain_hom_range(&m0u, &t0u);
    let g_subs: Vec<Subspace> = if g_lo > g_hi {
        vec![]
    } else {
        (g_lo..=g_hi)
            .map(|n| {
                let blocks = plain_hom_blocks(&m0u, &t0u, n);
                let total: usize = blocks.iter().map(|b| b.2 * b.3).sum();
                equivariant_subspace(m, t, &blocks, total, |_| n)
                    .unwrap_or_else(|| Subspace::whole(total))
            })
            .collect()
    };
    let g_node = g_full.subcomplex(&g_subs);

    // can₁: extract the plain part of a Hom♯ element (full coordinates),
    // then restrict to the chosen bases.
    let fib_lo = sharp_lo.min(dr_lo).min(g_lo + 1);
    let fib_hi = (sharp_hi).max(dr_hi).max(g_hi + 1);
    let deg_sharp = |n: i64| -> usize {
        if (sharp_lo..=sharp_hi).contains(&n) {
            sharp.dim_at(n)
        } else {
            0
        }
    };
    let deg_dr = |n: i64| -> usize {
        if dr_lo > dr_hi {
            0
        } else {
            dr_node.dim_at(n)
        }
    };
    let deg_g = |n: i64| -> usize {
        if g_lo > g_hi {
            0
        } else {
            g_node.dim_at(n)
        }
    };

    let can1_full = |n: i64| -> Mat {
        // full sharp degree-n space -> full g degree-n space
        let lay = sharp_blocks(&m0, &t0, n);
        let gblocks = plain_hom_blocks(&m0u, &t0u, n);
        let gtotal: usize = gblocks.iter().map(|b| b.2 * b.3).sum();
        let mut mmat = Mat::zero(gtotal, lay.total);
        for &(part, i, off, rows, cols) in &lay.blocks {
            if part != 0 {
                continue;
            }
            if let Some(&(_, goff, _, _)) = gblocks.iter().find(|b| b.0 == i) {
                crate::phimod::add_block_pub(&mut mmat, goff, off, &Mat::identity(rows * cols));
            }
        }
        mmat
    };
    let can2_full = |n: i64| -> Mat {
        // full dr degree-n space -> full g degree-n space: X ↦ c_T^{-1} X c_M
        let dblocks = plain_hom_blocks(&mk, &tk, n);
        let gblocks = plain_hom_blocks(&m0u, &t0u, n);
        let gtotal: usize = gblocks.iter().map(|b| b.2 * b.3).sum();
        let dtotal: usize = dblocks.iter().map(|b| b.2 * b.3).sum();
        let mut mmat = Mat::zero(gtotal, dtotal);
        for &(i, off, rows, cols) in &dblocks {
            if let Some(&(_, goff, _, _)) = gblocks.iter().find(|b| b.0 == i) {
                let ct_inv = t
                    .term_at(i + n)
                    .unwrap()
                    .comparison
                    .inverse()
                    .expect("comparison invertible");
                let cm = &m.term_at(i).unwrap().comparison;
                let op = &left_mul_op(&ct_inv, cols) * &right_mul_op(cm, rows);
                crate::phimod::add_block_pub(&mut mmat, goff, off, &op);
            }
        }
        mmat
    };

    // assemble the fiber: degree n = sharp^n ⊕ dr^n ⊕ g^{n-1}
    let dims: Vec<usize> = (fib_lo..=fib_hi)
        .map(|n| deg_sharp(n) + deg_dr(n) + deg_g(n - 1))
        .collect();
    let mut diffs: Vec<Mat> = Vec::new();
    let restrict_map = |full: &Mat, src_basis: &Subspace, tgt_basis: &Subspace| -> Mat {
        let cols: Vec<Vec<Rat>> = src_basis
            .basis()
            .iter()
            .map(|v| {
                tgt_basis
                    .basis_mat()
                    .solve(&full.apply(v))
                    .expect("map preserves the restriction")
            })
            .collect();
        Mat::from_cols(tgt_basis.dim(), &cols)
    };
    for n in fib_lo..fib_hi {
        let (sa, sb, sc) = (deg_sharp(n), deg_dr(n), deg_g(n - 1));
        let (ta, tb, tc) = (deg_sharp(n + 1), deg_dr(n + 1), deg_g(n));
        let mut d = Mat::zero(ta + tb + tc, sa + sb + sc);
        if sa > 0 && ta > 0 {
            crate::phimod::add_block_pub(&mut d, 0, 0, &sharp.diff_from(n));
        }
        if sb > 0 && tb > 0 {
            crate::phimod::add_block_pub(&mut d, ta, sa, &dr_node.diff_from(n));
        }
        // glue row: can1 s − can2 b − d_G c
        if tc > 0 {
            let g_basis = &g_subs[(n - g_lo) as usize];
            if sa > 0 {
                let m1 = restrict_map(&can1_full(n), &sharp_subs[(n - sharp_lo) as usize], g_basis);
                crate::phimod::add_block_pub(&mut d, ta + tb, 0, &m1);
            }
            if sb > 0 {
                let m2 = restrict_map(&can2_full(n), &dr_subs[(n - dr_lo) as usize], g_basis)
                    .scale(&-Rat::one());
                crate::phimod::add_block_pub(&mut d, ta + tb, sa, &m2);
            }
            if sc > 0 {
                let m3 = g_node.diff_from(n - 1).scale(&-Rat::one());
                crate::phimod::add_block_pub(&mut d, ta + tb, sa + sb, &m3);
            }
        }
        diffs.push(d);
    }
    let complex = ChainComplex::new(fib_lo, dims, diffs).expect("Hom♭ squares to zero");
    let blocks = FlatBlocks {
        min_deg: fib_lo,
        sharp_dims: (fib_lo..=fib_hi).map(deg_sharp).collect(),
        dr_dims: (fib_lo..=fib_hi).map(deg_dr).collect(),
        glue_dims: (fib_lo..=fib_hi).map(|n| deg_g(n - 1)).collect(),
    };
    (complex, blocks)
}

/// Equivariance projection for the Hom♯ layout, where the target degree of a
/// block depends on its part.
fn equivariant_group_projection(
    m: &DfComplex,
    t: &DfComplex,
    blocks: &[(usize, i64, usize, usize, usize)],
    total: usize,
    shifts: &std::collections::BTreeMap<(usize, i64), i64>,
) -> Option<Subspace> {
    let gm = m.terms.iter().find_map(|x| x.galois.as_ref());
    let gt = t.terms.iter().find_map(|x| x.galois.as_ref());
    if gm.is_none() && gt.is_none() {
        return None;
    }
    let order = gm.or(gt).unwrap().order;
    let mut projector = Mat::zero(total, total);
    for g in 0..order {
        let mut op = Mat::zero(total, total);
        for &(part, i, off, rows, cols) in blocks {
            let k = shifts[&(part, i)];
            let rho_t = t
                .term_at(i + k)
                .and_then(|x| x.galois.as_ref().map(|gd| gd.rep[g].clone()))
                .unwrap_or_else(|| Mat::identity(rows));
            let rho_m_inv = m
                .term_at(i)
                .and_then(|x| x.galois.as_ref().map(|gd| gd.rep[g].inverse().unwrap()))
                .unwrap_or_else(|| Mat::identity(cols));
            let conj = &left_mul_op(&rho_t, cols) * &right_mul_op(&rho_m_inv, rows);
            crate::phimod::add_block_pub(&mut op, off, off, &conj);
        }
        projector = &projector + &op;
    }
    let inv_order = Rat::new(1, order as i64);
    Some(Subspace::image_of(&projector.scale(&inv_order)))
}

/// Equivariance for the de Rham Hom node under the comparison-transported
/// actions.
fn transported_equivariant_subspace(
    m: &DfComplex,
    t: &DfComplex,
    blocks: &[(i64, usize, usize, usize)],
    total: usize,
    n: i64,
) -> Option<Subspace> {
    let gm = m.terms.iter().find_map(|x| x.galois.as_ref());
    let gt = t.terms.iter().find_map(|x| x.galois.as_ref());
    if gm.is_none() && gt.is_none() {
        return None;
    }
    let order = gm.or(gt).unwrap().order;
    let mut projector = Mat::zero(total, total);
    for g in 0..order {
        let mut op = Mat::zero(total, total);
        for &(i, off, rows, cols) in blocks {
            let transported = |term: &FilteredPhiNModule| -> Mat {
                match &term.galois {
                    Some(gd) => {
                        let ci = term.comparison.inverse().unwrap();
                        &(&term.comparison * &gd.rep[g]) * &ci
                    }
                    None => Mat::identity(term.dim()),
                }
            };
            let rho_t = transported(t.term_at(i + n).unwrap());
            let rho_m_inv = transported(m.term_at(i).unwrap()).inverse().unwrap();
            let conj = &left_mul_op(&rho_t, cols) * &right_mul_op(&rho_m_inv, rows);
            crate::phimod::add_block_pub(&mut op, off, off, &conj);
        }
        projector = &projector + &op;
    }
    let inv_order = Rat::new(1, order as i64);
    Some(Subspace::image_of(&projector.scale(&inv_order)))
}

/// Semistable extension groups: h_st(d, i) = dim H^i Hom♭(unit, d).
pub fn h_st(d: &FilteredPhiNModule) -> Vec<usize> {
    let unit = DfComplex::concentrated(FilteredPhiNModule::unit(d.p()));
    let (c, _) = hom_flat(&unit, &DfComplex::concentrated(d.clone()));
    c.cohomology_dims()
        .iter()
        .filter(|&&(i, _)| i >= 0)
        .map(|&(_, d)| d)
        .collect()
}

/// The space of degree-0 morphisms computed independently of the Hom♭
/// assembly: matrices commuting with φ, N and the group action whose de Rham
/// transport preserves the filtration.
pub fn equivariant_filtered_hom(m: &FilteredPhiNModule, t: &FilteredPhiNModule) -> Subspace {
    let (dm, dt) = (m.dim(), t.dim());
    let mut conditions: Vec<Mat> = Vec::new();
    // φ and N equivariance: left_mul(φ_T) − right_mul(φ_M) etc.
    conditions.push(&left_mul_op(&t.base.phi, dm) - &right_mul_op(&m.base.phi, dt));
    conditions.push(&left_mul_op(&t.base.n_op, dm) - &right_mul_op(&m.base.n_op, dt));
    if let (Some(gm), Some(gt)) = (&m.galois, &t.galois) {
        for (a, b) in gm.rep.iter().zip(&gt.rep) {
            conditions.push(&left_mul_op(b, dm) - &right_mul_op(a, dt));
        }
    }
    let mut space = conditions
        .iter()
        .fold(Subspace::whole(dm * dt), |acc, cond| {
            acc.intersect(&Subspace::kernel_of(cond)).unwrap()
        });
    // filtration-preservation of the transported map c_T X c_M^{-1}
    let filtered = hom_dr(&m.dr_side, &t.dr_side);
    // transport: Y = c_T X c_M^{-1} filtered ⇔ X in preimage of filtered
    let transport = &left_mul_op(&t.comparison, dm)
        * &right_mul_op(&m.comparison.inverse().unwrap(), dt);
    space = space
        .intersect(&filtered.preimage_under(&transport))
        .unwrap();
    space
}
