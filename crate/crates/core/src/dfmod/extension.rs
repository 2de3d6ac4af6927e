use super::{DfComplex, DfError, FilteredPhiNModule, GroupData};
use crate::exactlin::{Mat, Rat, Subspace};
use crate::filtered::{FilteredMap, FilteredSpace};
use crate::phimod::{Cochain, PhiNModule};

/// A morphism of filtered (φ,N,G)-modules.
#[derive(Clone, Debug)]
pub struct DfModuleMap {
    pub source: FilteredPhiNModule,
    pub target: FilteredPhiNModule,
    pub matrix: Mat,
}

impl DfModuleMap {
    pub fn new(
        source: FilteredPhiNModule,
        target: FilteredPhiNModule,
        matrix: Mat,
    ) -> Result<Self, DfError> {
        if source.p() != target.p() {
            return Err(DfError::PrimeMismatch(source.p(), target.p()));
        }
        if (&matrix * &source.base.phi) != (&target.base.phi * &matrix) {
            return Err(DfError::NotMorphism("φ equivariance"));
        }
        if (&matrix * &source.base.n_op) != (&target.base.n_op * &matrix) {
            return Err(DfError::NotMorphism("N equivariance"));
        }
        match (&source.galois, &target.galois) {
            (Some(a), Some(b)) if a.order == b.order => {
                for (x, y) in a.rep.iter().zip(&b.rep) {
                    if (&matrix * x) != (y * &matrix) {
                        return Err(DfError::NotMorphism("group equivariance"));
                    }
                }
            }
            (None, None) => {}
            _ => return Err(DfError::NotMorphism("group data mismatch")),
        }
        // filtration-preservation of the de Rham transport
        let map = DfModuleMap { source, target, matrix };
        map.dr_map()?;
        Ok(map)
    }

    /// The transported map on the de Rham sides.
    pub fn dr_map(&self) -> Result<FilteredMap, DfError> {
        let k_mat = &(&self.target.comparison * &self.matrix)
            * &self
                .source
                .comparison
                .inverse()
                .ok_or(DfError::ComparisonNotInvertible)?;
        Ok(FilteredMap::new(
            self.source.dr_side.clone(),
            self.target.dr_side.clone(),
            k_mat,
        )?)
    }

    pub fn is_strict(&self) -> (bool, Option<(i64, Vec<Rat>)>) {
        self.dr_map().expect("validated").is_strict()
    }
}

/// Kernel and cokernel with their induced structures.
#[derive(Clone, Debug)]
pub struct KernelCokernel {
    pub kernel: FilteredPhiNModule,
    pub kernel_inclusion: Mat,
    pub cokernel: FilteredPhiNModule,
    pub cokernel_projection: Mat,
    pub strict: bool,
}

pub fn kernel_cokernel(f: &DfModuleMap) -> KernelCokernel {
    let ker = Subspace::kernel_of(&f.matrix);
    let kernel = f.source.subobject(&ker);
    let kernel_inclusion = ker.basis_mat();

    // cokernel: quotient of the target by the image
    let img = Subspace::image_of(&f.matrix);
    let q = img.quotient_map();
    let sec = crate::phimod::right_inverse_pub(&q);
    let induce = |m: &Mat| -> Mat { &(&q * m) * &sec };
    let base = PhiNModule {
        p: f.target.p(),
        dim: q.rows(),
        phi: induce(&f.target.base.phi),
        n_op: induce(&f.target.base.n_op),
    };
    let galois = f.target.galois.as_ref().map(|g| GroupData {
        order: g.order,
        mult_table: g.mult_table.clone(),
        rep: g.rep.iter().map(&induce).collect(),
    });
    // de Rham side: quotient of T_K by c_T(im f), expressed so that the
    // comparison intertwines the two quotient presentations.
    let img_k = img.image_under(&f.target.comparison);
    let qk = img_k.quotient_map();
    let dr_side = f.target.dr_side.induced_quotient(&qk);
    let comparison = &(&qk * &f.target.comparison) * &sec;
    let cokernel = FilteredPhiNModule { base, galois, dr_side, comparison };
    let strict = f.is_strict().0;
    KernelCokernel {
        kernel,
        kernel_inclusion,
        cokernel,
        cokernel_projection: q,
        strict,
    }
}

/// The extension complex attached to a glued-side cochain u of degree j:
/// E realizes 0 → T → E → Cone(id_M)[−j−1] → 0 with the twisted filtration,
/// and the associated Hom-element ξ maps onto the class of u.
#[derive(Clone, Debug)]
pub struct Extension {
    pub total: DfComplex,
    /// per-degree inclusion T^n → E^n
    pub inclusion: Vec<Mat>,
    /// per-degree projection E^n → (T-complement)
    pub projection: Vec<Mat>,
    /// f(ξ) as a plain cochain M₀ → E₀ of degree j (the image of u under
    /// the comparison transports, supported in the T-slot).
    pub f_of_xi: Cochain,
}

/// Build the extension killing the cokernel class of `u`, a degree-j
/// cochain on the de Rham sides (components u^i: M_K^i → T_K^{i+j}).
pub fn build_extension(u: &Cochain, m: &DfComplex, t: &DfComplex) -> Result<Extension, DfError> {
    if m.p != t.p {
        return Err(DfError::PrimeMismatch(m.p, t.p));
    }
    let j = u.deg;
    let mphi = m.phi_side()?;
    let tphi = t.phi_side()?;
    let mk = m.dr_complex()?;
    let tk = t.dr_complex()?;
    // morphism property of u on the K-side is not required (that is the
    // point of the construction), only its shapes, checked on use.

    // E^n = T^n ⊕ M^{n-j-1} ⊕ M^{n-j}, structure maps diagonal.
    let lo = t.min_deg.min(m.min_deg + j).min(m.min_deg + j + 1);
    let hi = t.max_deg().max(m.max_deg() + j + 1);
    let eps = if (j % 2 + 2) % 2 == 0 { -Rat::one() } else { Rat::one() }; // (−1)^{j+1}
    let dims = |n: i64| -> (usize, usize, usize) {
        (m.dim_at(n - j - 1), m.dim_at(n - j), t.dim_at(n))
    };

    let mut terms: Vec<FilteredPhiNModule> = Vec::new();
    let mut diffs: Vec<Mat> = Vec::new();
    let mut inclusion = Vec::new();
    let mut projection = Vec::new();
    for n in lo..=hi {
        let (a_dim, x_dim, t_dim) = dims(n);
        let total = t_dim + a_dim + x_dim;
        // structures: block diagonal (T, M[a], M[x])
        let phi = block_diag3(
            &term_phi(t, n),
            &term_phi_m(m, n - j - 1),
            &term_phi_m(m, n - j),
        );
        let n_op = block_diag3(&term_n(t, n), &term_n_m(m, n - j - 1), &term_n_m(m, n - j));
        let base = PhiNModule { p: m.p, dim: total, phi, n_op };
        let comparison = block_diag3(
            &term_cmp(t, n),
            &term_cmp(m, n - j - 1),
            &term_cmp(m, n - j),
        );
        // the group action, when present, is diagonal as well
        let galois = match (
            t.term_at(n).and_then(|x| x.galois.clone()),
            m.term_at(n - j - 1).and_then(|x| x.galois.clone()),
            m.term_at(n - j).and_then(|x| x.galois.clone()),
        ) {
            (None, None, None) => None,
            (gt, ga, gx) => {
                let order = gt
                    .as_ref()
                    .or(ga.as_ref())
                    .or(gx.as_ref())
                    .map(|g| g.order)
                    .unwrap();
                let table = gt
                    .as_ref()
                    .or(ga.as_ref())
                    .or(gx.as_ref())
                    .unwrap()
                    .mult_table
                    .clone();
                let rep = (0..order)
                    .map(|g| {
                        block_diag3(
                            &rep_or_id(&gt, g, t_dim),
                            &rep_or_id(&ga, g, a_dim),
                            &rep_or_id(&gx, g, x_dim),
                        )
                    })
                    .collect();
                Some(GroupData { order, mult_table: table, rep })
            }
        };
        // filtration on E_K^n: F^s T_K^n ⊕ {(u(x),0,x)} ⊕ {(d_T u(y), −y, −d_M y)}
        let mut jump_set: Vec<i64> = Vec::new();
        if let Some(tt) = t.term_at(n) {
            jump_set.extend(tt.dr_side.jump_indices());
        }
        if let Some(mm) = m.term_at(n - j) {
            jump_set.extend(mm.dr_side.jump_indices());
        }
        if let Some(mm) = m.term_at(n - j - 1) {
            jump_set.extend(mm.dr_side.jump_indices());
        }
        jump_set.sort();
        jump_set.dedup();
        let mut raw: Vec<(i64, Subspace)> = vec![(
            jump_set.first().copied().unwrap_or(0) - 1,
            Subspace::whole(total),
        )];
        for s in jump_set {
            let mut vectors: Vec<Vec<Rat>> = Vec::new();
            // T-part
            for v in filtration_of(t, n, s, &tk).basis() {
                let mut w = vec![Rat::zero(); total];
                w[..t_dim].clone_from_slice(&v);
                vectors.push(w);
            }
            // graph part {(u(x), 0, x)} over F^s M_K^{n-j}
            let i = n - j;
            if x_dim > 0 {
                let ucomp = u_comp(u, m, t, i);
                for x in filtration_of(m, i, s, &mk).basis() {
                    let ux = ucomp.apply(&x);
                    let mut w = vec![Rat::zero(); total];
                    w[..t_dim].clone_from_slice(&ux);
                    w[t_dim + a_dim..].clone_from_slice(&x);
                    vectors.push(w);
                }
            }
            // twisted part {(d_T(u(y)), −y, −d_M(y))} over F^s M_K^{n-j-1}
            let i1 = n - j - 1;
            if a_dim > 0 {
                let ucomp = u_comp(u, m, t, i1);
                let dtk = tk.diff_from(i1 + j);
                let dmk = mk.diff_from(i1);
                for y in filtration_of(m, i1, s, &mk).basis() {
                    let du = dtk.apply(&ucomp.apply(&y));
                    let dy = dmk.apply(&y);
                    let mut w = vec![Rat::zero(); total];
                    w[..t_dim].clone_from_slice(&du);
                    for (k, val) in y.iter().enumerate() {
                        w[t_dim + k] = -val.clone();
                    }
                    for (k, val) in dy.iter().enumerate() {
                        w[t_dim + a_dim + k] = -val.clone();
                    }
                    vectors.push(w);
                }
            }
            raw.push((s, Subspace::span(total, &vectors)));
        }
        let dr_side = FilteredSpace::new(total, raw)?;
        terms.push(FilteredPhiNModule { base, galois, dr_side, comparison });
        inclusion.push(Mat::from_fn(total, t_dim, |r, c| {
            if r == c {
                Rat::one()
            } else {
                Rat::zero()
            }
        }));
        projection.push(Mat::from_fn(a_dim + x_dim, total, |r, c| {
            if c == r + t_dim {
                Rat::one()
            } else {
                Rat::zero()
            }
        }));
        if n < hi {
            // d_E(t, a, x) = (d_T t, x + ε d_M a, −ε d_M x)
            let (a2, x2, t2) = dims(n + 1);
            let total2 = t2 + a2 + x2;
            let mut d = Mat::zero(total2, total);
            crate::phimod::add_block_pub(&mut d, 0, 0, &t.diff_from(n));
            if a2 > 0 && x_dim > 0 {
                crate::phimod::add_block_pub(
                    &mut d,
                    t2,
                    t_dim + a_dim,
                    &Mat::identity(x_dim),
                );
            }
            if a2 > 0 && a_dim > 0 {
                crate::phimod::add_block_pub(
                    &mut d,
                    t2,
                    t_dim,
                    &m.diff_from(n - j - 1).scale(&eps),
                );
            }
            if x2 > 0 && x_dim > 0 {
                crate::phimod::add_block_pub(
                    &mut d,
                    t2 + a2,
                    t_dim + a_dim,
                    &m.diff_from(n - j).scale(&-eps.clone()),
                );
            }
            diffs.push(d);
        }
    }
    let total_complex = DfComplex::new(m.p, lo, terms, diffs)?;

    // f(ξ): with ξ♯ = (0,0,id) and ξ_dr = (u,0,id), the glued difference is
    // −(transported u, 0, 0) supported in the T-slot of E₀.
    let mut f_of_xi = Cochain::zero(j);
    for i in m.min_deg..=m.max_deg() {
        let n = i + j;
        let (a_dim, x_dim, t_dim) = dims(n);
        if x_dim == 0 || t_dim + a_dim + x_dim == 0 {
            continue;
        }
        let ucomp = u_comp(u, m, t, i);
        let ct_inv = t
            .term_at(n)
            .map(|x| x.comparison.inverse().unwrap())
            .unwrap_or_else(|| Mat::zero(0, 0));
        let cm = &m.term_at(i).unwrap().comparison;
        let u0 = &(&ct_inv * &ucomp) * cm; // u on the φ-side coordinates
        let total = t_dim + a_dim + x_dim;
        let mut comp = Mat::zero(total, m.dim_at(i));
        crate::phimod::add_block_pub(&mut comp, 0, 0, &u0.scale(&-Rat::one()));
        if !comp.is_zero() {
            f_of_xi.comps.insert(i, comp);
        }
    }
    let _ = (&mphi, &tphi);
    Ok(Extension { total: total_complex, inclusion, projection, f_of_xi })
}

fn rep_or_id(g: &Option<GroupData>, idx: usize, dim: usize) -> Mat {
    match g {
        Some(gd) => gd.rep[idx].clone(),
        None => Mat::identity(dim),
    }
}

fn block_diag3(a: &Mat, b: &Mat, c: &Mat) -> Mat {
    a.direct_sum(b).direct_sum(c)
}

fn term_phi(c: &DfComplex, i: i64) -> Mat {
    c.term_at(i)
        .map(|t| t.base.phi.clone())
        .unwrap_or_else(|| Mat::zero(0, 0))
}

fn term_phi_m(c: &DfComplex, i: i64) -> Mat {
    term_phi(c, i)
}

fn term_n(c: &DfComplex, i: i64) -> Mat {
    c.term_at(i)
        .map(|t| t.base.n_op.clone())
        .unwrap_or_else(|| Mat::zero(0, 0))
}

fn term_n_m(c: &DfComplex, i: i64) -> Mat {
    term_n(c, i)
}

fn term_cmp(c: &DfComplex, i: i64) -> Mat {
    c.term_at(i)
        .map(|t| t.comparison.clone())
        .unwrap_or_else(|| Mat::zero(0, 0))
}

fn filtration_of(
    c: &DfComplex,
    i: i64,
    s: i64,
    _k: &crate::filtered::FilteredComplex,
) -> Subspace {
    c.term_at(i)
        .map(|t| t.dr_side.filtration_at(s))
        .unwrap_or_else(|| Subspace::zero(0))
}

fn u_comp(u: &Cochain, m: &DfComplex, t: &DfComplex, i: i64) -> Mat {
    u.comps
        .get(&i)
        .cloned()
        .unwrap_or_else(|| Mat::zero(t.dim_at(i + u.deg), m.dim_at(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfmod::{h_st, is_weakly_admissible, AdmissibilityStatus};
    use crate::fixtures;

    #[test]
    fn kernel_cokernel_of_zero_and_identity() {
        let p = 5;
        let tc = fixtures::tate_curve(p, &Rat::one());
        let z = DfModuleMap::new(tc.clone(), tc.clone(), Mat::zero(2, 2)).unwrap();
        let kc = kernel_cokernel(&z);
        assert_eq!(kc.kernel.dim(), 2);
        assert_eq!(kc.cokernel.dim(), 2);
        assert!(kc.strict);
        let idm = DfModuleMap::new(tc.clone(), tc, Mat::identity(2)).unwrap();
        let kc = kernel_cokernel(&idm);
        assert_eq!(kc.kernel.dim(), 0);
        assert_eq!(kc.cokernel.dim(), 0);
        assert!(kc.strict);
    }

    #[test]
    fn split_extension_is_quasi_iso_to_t() {
        // u = 0 in degree 0 between unit and Tate curve
        let p = 5;
        let m = DfComplex::concentrated(fixtures::unit(p));
        let t = DfComplex::concentrated(fixtures::tate_curve(p, &Rat::one()));
        let u = Cochain::zero(0);
        let ext = build_extension(&u, &m, &t).unwrap();
        let e = &ext.total;
        // E ≃ T in cohomology
        let eu = e.phi_side().unwrap().underlying();
        let dims: Vec<(i64, usize)> = eu.cohomology_dims();
        for (i, d) in dims {
            let expect = if i == 0 { 2 } else { 0 };
            assert_eq!(d, expect, "degree {i}");
        }
        assert!(ext.f_of_xi.is_zero());
    }

    #[test]
    fn nonzero_u_recovered_by_f_of_xi() {
        let p = 5;
        let m = DfComplex::concentrated(fixtures::unit(p));
        let t = DfComplex::concentrated(fixtures::unit(p));
        let u = Cochain::single(0, 0, Mat::identity(1));
        let ext = build_extension(&u, &m, &t).unwrap();
        // f(ξ) = −(u, 0, 0) in the T-slot of E⁰ = T⁰ ⊕ 0 ⊕ M⁰
        let comp = ext.f_of_xi.comps.get(&0).unwrap();
        assert_eq!(comp.rows(), 2);
        assert_eq!(comp.at(0, 0), &-Rat::one());
        assert_eq!(comp.at(1, 0), &Rat::zero());
        // quasi-isomorphism T → E still holds
        let eu = ext.total.phi_side().unwrap().underlying();
        let h: Vec<usize> = eu.cohomology_dims().iter().map(|&(_, d)| d).collect();
        assert_eq!(h.iter().sum::<usize>(), 1);
    }

    #[test]
    fn extension_of_admissibles_is_admissible() {
        // closure under extension, checked by the subobject scan
        let p = 5;
        let m = DfComplex::concentrated(fixtures::qp(p, 0));
        let t = DfComplex::concentrated(fixtures::qp(p, 1));
        let u = Cochain::single(0, 0, Mat::identity(1));
        let ext = build_extension(&u, &m, &t).unwrap();
        // E⁰ is the interesting term: extension of M by T in degree 0
        let e0 = ext.total.term_at(0).unwrap();
        assert!(e0.validate().is_ok());
        let v = is_weakly_admissible(e0);
        assert!(
            matches!(
                v.status,
                AdmissibilityStatus::Admissible { .. } | AdmissibilityStatus::ProbablyAdmissible { .. }
            ),
            "expected admissible extension, got {v:?}"
        );
        // t_N, t_H additive in the extension
        assert_eq!(e0.t_n(), fixtures::qp(p, 0).t_n() + fixtures::qp(p, 1).t_n());
        assert_eq!(e0.t_h(), fixtures::qp(p, 0).t_h() + fixtures::qp(p, 1).t_h());
    }

    #[test]
    fn strictness_of_morphisms_between_admissibles() {
        let p = 5;
        let tc = fixtures::tate_curve(p, &Rat::one());
        let u = fixtures::unit(p);
        // the e-line inclusion unit → Tate curve
        let inc = Mat::from_int_rows(&[&[1], &[0]]);
        let f = DfModuleMap::new(u, tc, inc).unwrap();
        assert!(f.is_strict().0);
    }

    #[test]
    fn extension_over_complexes_with_degree_shift() {
        // M and T two-term complexes, u a degree-1 glued cochain
        let p = 5;
        let m = DfComplex::new(
            p,
            0,
            vec![fixtures::unit(p), fixtures::unit(p)],
            vec![Mat::zero(1, 1)],
        )
        .unwrap();
        let t = DfComplex::new(
            p,
            0,
            vec![fixtures::qp(p, 1), fixtures::qp(p, 1)],
            vec![Mat::zero(1, 1)],
        )
        .unwrap();
        let u = Cochain::single(1, 0, Mat::identity(1));
        let ext = build_extension(&u, &m, &t).unwrap();
        let e = &ext.total;
        // every term validates and the complex has the cohomology of T
        for term in &e.terms {
            assert!(term.validate().is_ok());
        }
        let eu = e.phi_side().unwrap().underlying();
        let tu = t.phi_side().unwrap().underlying();
        for i in eu.min_deg().min(tu.min_deg())..=eu.max_deg().max(tu.max_deg()) {
            let de = eu
                .cohomology_dims()
                .iter()
                .find(|&&(j, _)| j == i)
                .map(|&(_, d)| d)
                .unwrap_or(0);
            let dt = tu
                .cohomology_dims()
                .iter()
                .find(|&&(j, _)| j == i)
                .map(|&(_, d)| d)
                .unwrap_or(0);
            assert_eq!(de, dt, "degree {i}");
        }
        // f(ξ) is supported where u is, with the expected sign
        let comp = ext.f_of_xi.comps.get(&0).unwrap();
        assert_eq!(comp.at(0, 0), &-Rat::one());
        // inclusion and projection shapes are coherent
        assert_eq!(ext.inclusion.len(), e.terms.len());
        assert_eq!(ext.projection.len(), e.terms.len());
    }

    #[test]
    fn h_st_of_unit_unchanged_by_extension_machinery() {
        // smoke: the Hom♭ engine still sees the fixture values
        assert_eq!(h_st(&fixtures::unit(5)), vec![1, 1, 0]);
    }
}
