//! Enumeration of the lattice of common invariant subspaces of a family of
//! matrices, with sound detection of infinite lattices.
//!
//! The lattice of submodules of V over the algebra generated by the given
//! matrices is finite exactly when no subquotient contains two parallel
//! isomorphic simple summands. We walk the lattice bottom-up: the atoms above
//! a known invariant subspace W are the minimal submodules of V/W, i.e. the
//! isotypic components of its socle when those are simple. An isotypic
//! component of multiplicity >= 2 yields a positive-dimensional family of
//! invariant subspaces and the walk stops with a witness.

use super::quadform::{ternary_isotropic_vector, Ternary};
use super::{factor_rational_poly, Mat, Rat, Subspace};
use std::collections::BTreeSet;

#[derive(Debug, Clone)]
pub enum InvariantLattice {
    /// Every common invariant subspace, sorted by dimension then basis.
    Finite(Vec<Subspace>),
    InfiniteFamily(InfiniteWitness),
}

/// Evidence for an infinite lattice: an isotypic component (pulled back to
/// the ambient space) of dimension >= 2 carrying a positive-dimensional
/// family of invariant subspaces; `members` lists distinct family members
/// when the analysis produced them explicitly.
#[derive(Debug, Clone)]
pub struct InfiniteWitness {
    pub isotypic: Subspace,
    pub members: Vec<Subspace>,
    pub note: String,
}

pub fn invariant_subspaces(generators: &[Mat], ambient: usize) -> InvariantLattice {
    for g in generators {
        assert!(
            g.is_square() && g.rows() == ambient,
            "generators must be square of the ambient size"
        );
    }
    if ambient == 0 {
        return InvariantLattice::Finite(vec![Subspace::zero(0)]);
    }
    let mut found: BTreeSet<Subspace> = BTreeSet::new();
    found.insert(Subspace::zero(ambient));
    let mut worklist = vec![Subspace::zero(ambient)];
    const CAP: usize = 100_000;
    while let Some(w) = worklist.pop() {
        if w.dim() == ambient {
            continue;
        }
        let (qmap, qgens) = quotient_action(generators, &w);
        match minimal_submodules(&qgens, ambient - w.dim()) {
            Minimal::Simples(atoms) => {
                for s in atoms {
                    let lifted = s.preimage_under(&qmap);
                    if found.insert(lifted.clone()) {
                        if found.len() > CAP {
                            return InvariantLattice::InfiniteFamily(InfiniteWitness {
                                isotypic: Subspace::whole(ambient),
                                members: vec![],
                                note: format!(
                                    "lattice exceeded {CAP} subspaces; treated as infinite"
                                ),
                            });
                        }
                        worklist.push(lifted);
                    }
                }
            }
            Minimal::Infinite(wit) => {
                let isotypic = wit.isotypic.preimage_under(&qmap);
                let members = wit
                    .members
                    .iter()
                    .map(|m| m.preimage_under(&qmap))
                    .collect();
                return InvariantLattice::InfiniteFamily(InfiniteWitness {
                    isotypic,
                    members,
                    note: wit.note,
                });
            }
        }
    }
    InvariantLattice::Finite(found.into_iter().collect())
}

/// Quotient map V -> V/W together with the induced generator actions.
fn quotient_action(generators: &[Mat], w: &Subspace) -> (Mat, Vec<Mat>) {
    let qmap = w.quotient_map();
    let section = right_inverse(&qmap);
    let qgens = generators
        .iter()
        .map(|g| {
            assert!(
                w.contains(&w.image_under(g)),
                "subspace not invariant under generator"
            );
            &(&qmap * g) * &section
        })
        .collect();
    (qmap, qgens)
}

fn right_inverse(m: &Mat) -> Mat {
    let cols: Vec<Vec<Rat>> = (0..m.rows())
        .map(|i| {
            let mut e = vec![Rat::zero(); m.rows()];
            e[i] = Rat::one();
            m.solve(&e).expect("surjective map has a right inverse")
        })
        .collect();
    Mat::from_cols(m.cols(), &cols)
}

enum Minimal {
    Simples(Vec<Subspace>),
    Infinite(InfiniteWitness),
}

/// Minimal submodules of Q^n under the action of `gens`, or an infinite
/// family witness living in this space.
fn minimal_submodules(gens: &[Mat], n: usize) -> Minimal {
    assert!(n > 0);
    let algebra = spin_algebra(gens, n);
    let rad = radical_basis(&algebra, n);
    let soc = if rad.is_empty() {
        Subspace::whole(n)
    } else {
        let mut s = Subspace::whole(n);
        for r in &rad {
            s = s.intersect(&Subspace::kernel_of(r)).unwrap();
        }
        s
    };
    assert!(soc.dim() > 0, "socle of a nonzero module is nonzero");

    let inc = soc.basis_mat();
    let soc_gens: Vec<Mat> = gens.iter().map(|g| restrict(g, &soc)).collect();
    let soc_algebra = spin_algebra(&soc_gens, soc.dim());

    let mut simples = Vec::new();
    for iso in isotypic_components(&soc_gens, soc.dim()) {
        match multiplicity_analysis(&soc_gens, &soc_algebra, &iso) {
            Mult::Simple => {
                simples.push(embed(&iso, &inc));
            }
            Mult::Several(members, note) => {
                return Minimal::Infinite(InfiniteWitness {
                    isotypic: embed(&iso, &inc),
                    members: members.iter().map(|m| embed(m, &inc)).collect(),
                    note,
                });
            }
        }
    }
    simples.sort();
    Minimal::Simples(simples)
}

fn embed(s: &Subspace, inc: &Mat) -> Subspace {
    s.image_under(inc)
}

/// Restriction of a matrix to an invariant subspace, in its canonical basis.
fn restrict(g: &Mat, s: &Subspace) -> Mat {
    let b = s.basis_mat();
    let cols: Vec<Vec<Rat>> = (0..s.dim())
        .map(|j| {
            let img = g.apply(&b.col(j));
            b.solve(&img).expect("subspace must be invariant")
        })
        .collect();
    Mat::from_cols(s.dim(), &cols)
}

/// Incremental linear span with exact reduction, for closure computations.
struct IncSpan {
    width: usize,
    /// rows in echelon form (not necessarily reduced), with pivot positions
    rows: Vec<(usize, Vec<Rat>)>,
}

impl IncSpan {
    fn new(width: usize) -> Self {
        IncSpan { width, rows: Vec::new() }
    }

    /// Returns true when the vector was independent of the span so far.
    fn insert(&mut self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.width);
        let mut v = v.to_vec();
        for (piv, row) in &self.rows {
            if !v[*piv].is_zero() {
                let f = &v[*piv] / &row[*piv];
                for j in 0..self.width {
                    let t = v[j].clone() - (&f * &row[j]);
                    v[j] = t;
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, v));
                self.rows.sort_by_key(|(p, _)| *p);
                true
            }
            None => false,
        }
    }
}

/// Basis of the unital algebra generated by the matrices, inside End(Q^n).
fn spin_algebra(gens: &[Mat], n: usize) -> Vec<Mat> {
    let mut span = IncSpan::new(n * n);
    let mut basis: Vec<Mat> = Vec::new();
    let mut queue: Vec<Mat> = vec![Mat::identity(n)];
    queue.extend(gens.iter().cloned());
    while let Some(m) = queue.pop() {
        if span.insert(&m.vec_coords()) {
            for g in gens {
                queue.push(&m * g);
            }
            basis.push(m);
        }
    }
    basis
}

/// Radical of the spanned algebra: the kernel of the trace form (char 0).
fn radical_basis(algebra: &[Mat], n: usize) -> Vec<Mat> {
    let k = algebra.len();
    let gram = Mat::from_fn(k, k, |i, j| (&algebra[i] * &algebra[j]).trace());
    gram.kernel_basis()
        .into_iter()
        .map(|coeffs| {
            let mut m = Mat::zero(n, n);
            for (c, b) in coeffs.iter().zip(algebra) {
                m = &m + &b.scale(c);
            }
            m
        })
        .collect()
}

/// Commutant of the generators inside End(Q^n).
fn commutant(gens: &[Mat], n: usize) -> Vec<Mat> {
    // X with g X - X g = 0 for all generators: linear system on n^2 coords.
    let rows_per_gen = n * n;
    let total_rows = rows_per_gen * gens.len().max(1);
    let mut sys = Mat::zero(total_rows, n * n);
    for (gi, g) in gens.iter().enumerate() {
        // (gX - Xg)_{ab} = sum_c g_{ac} X_{cb} - X_{ac} g_{cb}
        for a in 0..n {
            for b in 0..n {
                let row = gi * rows_per_gen + a * n + b;
                for c in 0..n {
                    // coefficient of X_{cb}
                    let idx = b * n + c; // vec_coords order: column-major
                    let cur = sys.at(row, idx).clone() + g.at(a, c).clone();
                    sys.set(row, idx, cur);
                    // coefficient of X_{ac}
                    let idx2 = c * n + a;
                    let cur2 = sys.at(row, idx2).clone() - g.at(c, b).clone();
                    sys.set(row, idx2, cur2);
                }
            }
        }
    }
    sys.kernel_basis()
        .into_iter()
        .map(|v| Mat::from_vec_coords(n, n, &v))
        .collect()
}

/// Isotypic components of a semisimple module: split the socle by the
/// primary decomposition of a generic element of the center of the commutant.
fn isotypic_components(gens: &[Mat], n: usize) -> Vec<Subspace> {
    let comm = commutant(gens, n);
    let center = algebra_center(&comm, n);
    if center.len() <= 1 {
        return vec![Subspace::whole(n)];
    }
    let z = generic_element(&center, n);
    let minp = z.min_poly();
    let factors = factor_rational_poly(&minp);
    factors
        .iter()
        .map(|(f, _)| Subspace::kernel_of(&eval_poly(f, &z)))
        .collect()
}

fn eval_poly(coeffs: &[Rat], m: &Mat) -> Mat {
    let n = m.rows();
    let mut acc = Mat::zero(n, n);
    let mut pow = Mat::identity(n);
    for c in coeffs {
        acc = &acc + &pow.scale(c);
        pow = &pow * m;
    }
    acc
}

/// Center of the span of the given commuting-closure basis.
fn algebra_center(basis: &[Mat], n: usize) -> Vec<Mat> {
    if basis.is_empty() {
        return vec![];
    }
    // Solve for coefficient vectors x with sum x_i (b_i c - c b_i) = 0 for
    // every basis element c.
    let k = basis.len();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for c in basis {
        let cols: Vec<Vec<Rat>> = basis
            .iter()
            .map(|b| (&(b * c) - &(c * b)).vec_coords())
            .collect();
        for r in 0..n * n {
            rows.push((0..k).map(|j| cols[j][r].clone()).collect());
        }
    }
    let sys = Mat::from_rows_vec(rows, k);
    sys.kernel_basis()
        .into_iter()
        .map(|x| {
            let mut m = Mat::zero(n, n);
            for (c, b) in x.iter().zip(basis) {
                m = &m + &b.scale(c);
            }
            m
        })
        .collect()
}

/// Deterministic generic element of a commutative semisimple algebra: one
/// whose minimal polynomial has degree equal to the algebra dimension.
fn generic_element(basis: &[Mat], _n: usize) -> Mat {
    for k in 1i64..200 {
        let mut m = basis[0].clone().scale(&Rat::one());
        let mut w = Rat::one();
        for b in &basis[1..] {
            w *= Rat::from_int(k);
            m = &m + &b.scale(&w);
        }
        if m.min_poly().len() - 1 == basis.len() {
            return m;
        }
    }
    panic!("no generic central element found; degenerate center basis");
}

enum Mult {
    Simple,
    /// Distinct proper invariant subspaces of the isotypic component plus a
    /// description of the family.
    Several(Vec<Subspace>, String),
}

/// Decide whether an isotypic component is simple, inside the socle space.
fn multiplicity_analysis(soc_gens: &[Mat], soc_algebra: &[Mat], iso: &Subspace) -> Mult {
    let d = iso.dim();
    if d == 1 {
        return Mult::Simple;
    }
    // Fast path: cyclic submodules generated by basis vectors.
    let mut proper: Vec<Subspace> = Vec::new();
    let mut candidates: Vec<Vec<Rat>> = iso.basis();
    if candidates.len() >= 2 {
        let s: Vec<Rat> = (0..iso.ambient_dim())
            .map(|i| candidates[0][i].clone() + candidates[1][i].clone())
            .collect();
        candidates.push(s);
    }
    for v in &candidates {
        let orbit: Vec<Vec<Rat>> = soc_algebra.iter().map(|b| b.apply(v)).collect();
        let cyc = Subspace::span(iso.ambient_dim(), &orbit);
        if cyc.dim() > 0 && cyc.dim() < d && !proper.contains(&cyc) {
            proper.push(cyc);
        }
    }
    if !proper.is_empty() {
        proper.sort();
        proper.truncate(3);
        return Mult::Several(
            proper,
            "isotypic component is not simple: cyclic submodules generate a \
             positive-dimensional family of invariant subspaces"
                .to_string(),
        );
    }

    // Commutant of the action restricted to the isotypic component.
    let iso_gens: Vec<Mat> = soc_gens.iter().map(|g| restrict(g, iso)).collect();
    let comm = commutant(&iso_gens, d);
    let center = algebra_center(&comm, d);
    if comm.len() == center.len() {
        // Commutative endomorphism algebra: End = field, multiplicity one.
        return Mult::Simple;
    }
    if center.len() == 1 && comm.len() == 4 {
        return quaternion_analysis(&iso_gens, &comm, iso, d);
    }
    Mult::Several(
        vec![],
        format!(
            "endomorphism algebra of an isotypic component has dimension {} over a center \
             of dimension {}; treated conservatively as multiplicity >= 2",
            comm.len(),
            center.len()
        ),
    )
}

/// comm spans a 4-dimensional central simple algebra over Q: either M_2(Q)
/// (multiplicity two) or a quaternion division algebra (simple module).
/// Split the two cases by isotropy of the reduced norm form.
fn quaternion_analysis(iso_gens: &[Mat], comm: &[Mat], iso: &Subspace, d: usize) -> Mult {
    // Regular representation of the commutant on itself.
    let basis_coords: Vec<Vec<Rat>> = comm.iter().map(Mat::vec_coords).collect();
    let basis_mat = Mat::from_cols(d * d, &basis_coords);
    let reg = |c: &Mat| -> Mat {
        let cols: Vec<Vec<Rat>> = comm
            .iter()
            .map(|b| basis_mat.solve(&(c * b).vec_coords()).expect("closed"))
            .collect();
        Mat::from_cols(4, &cols)
    };
    // Reduced trace on the degree-2 algebra is half the regular trace.
    let rtr = |c: &Mat| -> Rat { &reg(c).trace() * &Rat::new(1, 2) };
    // Trace-zero subspace (3-dimensional), in commutant coordinates.
    let tr_row = Mat::from_fn(1, 4, |_, j| rtr(&comm[j]));
    let t0 = tr_row.kernel_basis();
    assert_eq!(t0.len(), 3, "trace-zero part of a quaternion algebra is 3-dim");
    let t0_mats: Vec<Mat> = t0
        .iter()
        .map(|x| {
            let mut m = Mat::zero(d, d);
            for (c, b) in x.iter().zip(comm) {
                m = &m + &b.scale(c);
            }
            m
        })
        .collect();
    // On trace-zero elements x: x^2 = q(x)·1; polarize to a Gram matrix.
    let one = Mat::identity(d);
    let q_of = |m: &Mat| -> Rat {
        let sq = m * m;
        let lambda = sq.trace() * Rat::from_big(1.into(), (d as i64).into());
        debug_assert_eq!(sq, one.scale(&lambda), "square of trace-zero not scalar");
        lambda
    };
    let bform = |x: &Mat, y: &Mat| -> Rat {
        let s = &(x * y) + &(y * x);
        s.trace() * Rat::from_big(1.into(), (2 * d as i64).into())
    };
    // Congruence diagonalization of the Gram matrix.
    let mut vecs = t0_mats.clone();
    let mut diag: Vec<Rat> = Vec::new();
    let mut ortho: Vec<Mat> = Vec::new();
    while let Some(next) = vecs.iter().position(|v| !q_of(v).is_zero()) {
        let v = vecs.remove(next);
        let qv = q_of(&v);
        vecs = vecs
            .iter()
            .map(|w| {
                let coef = &bform(w, &v) / &qv;
                w - &v.scale(&coef)
            })
            .collect();
        diag.push(qv);
        ortho.push(v);
        if ortho.len() == 3 {
            break;
        }
    }
    if ortho.len() < 3 {
        // An isotropic vector already appeared among the remaining elements.
        if let Some(nil) = vecs.iter().find(|v| !v.is_zero()) {
            return split_with_nilpotent(iso_gens, nil, iso, d);
        }
        return Mult::Several(
            vec![],
            "degenerate norm form on the commutant; treated as multiplicity >= 2".into(),
        );
    }
    match ternary_isotropic_vector(&diag[0], &diag[1], &diag[2]) {
        Ternary::Isotropic(sol) => {
            let mut nil = Mat::zero(d, d);
            for (c, b) in sol.iter().zip(&ortho) {
                nil = &nil + &b.scale(c);
            }
            assert!(!nil.is_zero() && (&nil * &nil).is_zero());
            split_with_nilpotent(iso_gens, &nil, iso, d)
        }
        Ternary::Anisotropic => Mult::Simple,
        Ternary::TooLarge => Mult::Several(
            vec![],
            "norm form too large for exact isotropy search; treated conservatively \
             as multiplicity >= 2"
                .into(),
        ),
    }
}

fn split_with_nilpotent(iso_gens: &[Mat], nil: &Mat, iso: &Subspace, d: usize) -> Mult {
    // ker(nil) is a proper nonzero submodule; a complementary graph family
    // exists since nil commutes with the action.
    let _ = iso_gens;
    let ker = Subspace::kernel_of(nil);
    let im = Subspace::image_of(nil);
    let mut members = vec![ker, im];
    members.sort();
    members.dedup();
    let _ = (iso, d);
    Mult::Several(
        members,
        "commutant contains a nilpotent endomorphism: the isotypic component \
         splits and carries a pencil of invariant subspaces"
            .into(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lines_and_dims(lat: &InvariantLattice) -> Vec<usize> {
        match lat {
            InvariantLattice::Finite(subs) => {
                let mut d: Vec<usize> = subs.iter().map(Subspace::dim).collect();
                d.sort();
                d
            }
            InvariantLattice::InfiniteFamily(w) => panic!("expected finite, got {w:?}"),
        }
    }

    #[test]
    fn identity_dim1() {
        let lat = invariant_subspaces(&[Mat::identity(1)], 1);
        assert_eq!(lines_and_dims(&lat), vec![0, 1]);
    }

    #[test]
    fn diag_distinct_eigenvalues() {
        let m = Mat::from_int_rows(&[&[1, 0], &[0, 2]]);
        let lat = invariant_subspaces(&[m], 2);
        match &lat {
            InvariantLattice::Finite(subs) => {
                assert_eq!(subs.len(), 4);
                let dims = lines_and_dims(&lat);
                assert_eq!(dims, vec![0, 1, 1, 2]);
            }
            _ => panic!("expected finite"),
        }
    }

    #[test]
    fn scalar_is_infinite() {
        let lat = invariant_subspaces(&[Mat::identity(2)], 2);
        match lat {
            InvariantLattice::InfiniteFamily(w) => {
                assert_eq!(w.isotypic.dim(), 2);
                assert!(!w.members.is_empty());
            }
            _ => panic!("expected infinite"),
        }
    }

    #[test]
    fn jordan_block_is_finite() {
        // One nilpotent Jordan block: chain 0 < ker < V.
        let m = Mat::from_int_rows(&[&[0, 1], &[0, 0]]);
        let lat = invariant_subspaces(&[m], 2);
        assert_eq!(lines_and_dims(&lat), vec![0, 1, 2]);
    }

    #[test]
    fn two_equal_jordan_blocks_infinite() {
        let m = Mat::from_int_rows(&[&[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 0, 0]]);
        let lat = invariant_subspaces(&[m], 4);
        assert!(matches!(lat, InvariantLattice::InfiniteFamily(_)));
    }

    #[test]
    fn irrational_eigenvalues_irreducible() {
        // companion of x^2 - 2: no rational invariant line.
        let m = Mat::from_int_rows(&[&[0, 2], &[1, 0]]);
        let lat = invariant_subspaces(&[m], 2);
        assert_eq!(lines_and_dims(&lat), vec![0, 2]);
    }

    #[test]
    fn two_copies_of_irrational_block_infinite() {
        let b = Mat::from_int_rows(&[&[0, 2], &[1, 0]]);
        let m = b.direct_sum(&b);
        let lat = invariant_subspaces(&[m], 4);
        match lat {
            InvariantLattice::InfiniteFamily(w) => assert_eq!(w.isotypic.dim(), 4),
            _ => panic!("expected infinite"),
        }
    }

    #[test]
    fn quaternion_division_algebra_is_irreducible() {
        // Left multiplication by i and j in the rational quaternions on
        // basis (1, i, j, k): End is the (division) algebra itself.
        let i = Mat::from_int_rows(&[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, -1], &[0, 0, 1, 0]]);
        let j = Mat::from_int_rows(&[&[0, 0, -1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, -1, 0, 0]]);
        let lat = invariant_subspaces(&[i, j], 4);
        assert_eq!(lines_and_dims(&lat), vec![0, 4]);
    }

    #[test]
    fn split_quaternions_detected_infinite() {
        // M_2(Q) acting on itself by left multiplication: V = Q^4 = S ⊕ S.
        let e12 = Mat::from_int_rows(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
        let e21 = Mat::from_int_rows(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let lat = invariant_subspaces(&[e12, e21], 4);
        assert!(matches!(lat, InvariantLattice::InfiniteFamily(_)));
    }

    #[test]
    fn tate_curve_shape() {
        // phi = diag(1, p), N = e_{12}: lattice 0 < e1-line < V.
        let phi = Mat::from_int_rows(&[&[1, 0], &[0, 5]]);
        let nop = Mat::from_int_rows(&[&[0, 1], &[0, 0]]);
        let lat = invariant_subspaces(&[phi, nop], 2);
        match &lat {
            InvariantLattice::Finite(subs) => {
                assert_eq!(subs.len(), 3);
                let line = subs.iter().find(|s| s.dim() == 1).unwrap();
                assert!(line.contains_vec(&[Rat::one(), Rat::zero()]));
            }
            _ => panic!("expected finite"),
        }
    }

    #[test]
    fn nilpotent_chain_lattice() {
        // a single 3x3 Jordan block: the chain 0 ⊂ ker N ⊂ ker N² ⊂ V
        let m = Mat::from_int_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let lat = invariant_subspaces(&[m.clone()], 3);
        match lat {
            InvariantLattice::Finite(subs) => {
                assert_eq!(subs.len(), 4);
                let dims: Vec<usize> = subs.iter().map(Subspace::dim).collect();
                assert_eq!(dims, vec![0, 1, 2, 3]);
                // the chain property: each contains the previous
                for w in subs.windows(2) {
                    assert!(w[1].contains(&w[0]));
                }
            }
            other => panic!("expected a finite chain, got {other:?}"),
        }
    }

    #[test]
    fn conjugated_distinct_spectrum_full_boolean_lattice() {
        // diag(1,2,3) conjugated: exactly the 8 coordinate subspaces
        let d = Mat::from_int_rows(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        let t = Mat::from_int_rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let ti = t.inverse().unwrap();
        let m = &(&t * &d) * &ti;
        match invariant_subspaces(&[m], 3) {
            InvariantLattice::Finite(subs) => assert_eq!(subs.len(), 8),
            other => panic!("expected 8 subspaces, got {other:?}"),
        }
    }

    #[test]
    fn joint_generators_cut_lattice() {
        // alone, diag(1,1,2) has infinitely many invariant subspaces; adding
        // a nilpotent linking the repeated eigenvalue makes the lattice finite
        let a = Mat::from_int_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]]);
        assert!(matches!(
            invariant_subspaces(&[a.clone()], 3),
            InvariantLattice::InfiniteFamily(_)
        ));
        let n = Mat::from_int_rows(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        match invariant_subspaces(&[a, n], 3) {
            InvariantLattice::Finite(subs) => {
                // the chain on the repeated-eigenvalue plane times the
                // e₃-line factor: 3 × 2 subspaces
                let dims: Vec<usize> = subs.iter().map(Subspace::dim).collect();
                assert_eq!(dims, vec![0, 1, 1, 2, 2, 3]);
            }
            other => panic!("expected finite, got {other:?}"),
        }
    }

    #[test]
    fn lattice_closed_under_sum_and_intersection() {
        let m = Mat::from_int_rows(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        match invariant_subspaces(&[m], 3) {
            InvariantLattice::Finite(subs) => {
                assert_eq!(subs.len(), 8);
                for a in &subs {
                    for b in &subs {
                        assert!(subs.contains(&a.sum(b).unwrap()));
                        assert!(subs.contains(&a.intersect(b).unwrap()));
                    }
                }
            }
            _ => panic!("expected finite"),
        }
    }
}
