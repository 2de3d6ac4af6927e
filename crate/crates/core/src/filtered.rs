//! Filtered vector spaces and the quasi-abelian machinery: strict morphisms,
//! strict complexes, truncations, cohomology objects and the graded
//! quasi-isomorphism test.

use crate::exactlin::{Mat, Rat, Subspace};
use crate::phimod::{ChainComplex, CohomologySpace};

/// A finite-dimensional Q-vector space with a decreasing exhaustive separated
/// filtration, stored as its jumps: sorted indices i₁ < … < i_k with strictly
/// decreasing subspaces S₁ ⊋ … ⊋ S_k and S₁ the whole space. The value of
/// F^j is the subspace at the smallest stored index ≥ j (zero past the end),
/// so exhaustion and separation hold by construction.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct FilteredSpace {
    dim: usize,
    steps: Vec<(i64, Subspace)>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FilteredError {
    #[error("filtration subspaces must live in the ambient space")]
    AmbientMismatch,
    #[error("filtration is not decreasing at index {0}")]
    NotDecreasing(i64),
    #[error("filtration is not exhaustive (largest step is not the whole space)")]
    NotExhaustive,
    #[error("map does not preserve the filtration at index {0}")]
    NotFiltered(i64),
    #[error("not a chain map or d∘d ≠ 0")]
    NotChainMap,
}

impl FilteredSpace {
    /// Normalizing constructor: pairs may be given in any order; consecutive
    /// equal subspaces are merged keeping the larger index.
    pub fn new(dim: usize, mut raw: Vec<(i64, Subspace)>) -> Result<Self, FilteredError> {
        for (_, s) in &raw {
            if s.ambient_dim() != dim {
                return Err(FilteredError::AmbientMismatch);
            }
        }
        raw.sort_by_key(|&(i, _)| i);
        if dim == 0 {
            return Ok(FilteredSpace { dim, steps: vec![] });
        }
        if raw.is_empty() || !raw[0].1.is_whole() {
            return Err(FilteredError::NotExhaustive);
        }
        // merge equal consecutive keeping the later index; drop zero tails
        let mut steps: Vec<(i64, Subspace)> = Vec::new();
        for (i, s) in raw {
            if s.is_zero() {
                continue;
            }
            match steps.last() {
                Some((_, prev)) if *prev == s => {
                    steps.last_mut().unwrap().0 = i;
                }
                Some((pi, prev)) => {
                    if !prev.contains(&s) || prev.dim() == s.dim() {
                        return Err(FilteredError::NotDecreasing(*pi));
                    }
                    steps.push((i, s));
                }
                None => steps.push((i, s)),
            }
        }
        Ok(FilteredSpace { dim, steps })
    }

    /// The filtration with a single jump: F^j = V for j ≤ jump, 0 after.
    pub fn trivial(dim: usize, jump: i64) -> Self {
        if dim == 0 {
            return FilteredSpace { dim, steps: vec![] };
        }
        FilteredSpace { dim, steps: vec![(jump, Subspace::whole(dim))] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn steps(&self) -> &[(i64, Subspace)] {
        &self.steps
    }

    pub fn filtration_at(&self, j: i64) -> Subspace {
        for (i, s) in &self.steps {
            if *i >= j {
                return s.clone();
            }
        }
        Subspace::zero(self.dim)
    }

    /// Indices where gr ≠ 0.
    pub fn jump_indices(&self) -> Vec<i64> {
        self.steps.iter().map(|&(i, _)| i).collect()
    }

    pub fn gr_dims(&self) -> Vec<(i64, usize)> {
        let mut out = Vec::new();
        for (m, (i, s)) in self.steps.iter().enumerate() {
            let next_dim = self.steps.get(m + 1).map(|(_, t)| t.dim()).unwrap_or(0);
            out.push((*i, s.dim() - next_dim));
        }
        out
    }

    /// Hodge number t_H = Σ i · dim gr^i.
    pub fn t_h(&self) -> i64 {
        self.gr_dims().iter().map(|&(i, d)| i * d as i64).sum()
    }

    /// Shift for the Tate twist by r: F^i of the result is F^{i+r} of self.
    pub fn twist(&self, r: i64) -> FilteredSpace {
        FilteredSpace {
            dim: self.dim,
            steps: self.steps.iter().map(|(i, s)| (i - r, s.clone())).collect(),
        }
    }

    /// Induced filtration on a subspace given by an injective matrix
    /// W: Q^d → Q^dim, namely the preimages of F^i ∩ W.
    pub fn induced_sub(&self, incl: &Mat) -> FilteredSpace {
        assert_eq!(incl.rows(), self.dim);
        let d = incl.cols();
        let mut raw: Vec<(i64, Subspace)> = self
            .steps
            .iter()
            .map(|(i, s)| (*i, s.preimage_under(incl)))
            .collect();
        raw.insert(0, (i64::MIN / 2, Subspace::whole(d)));
        FilteredSpace::new(d, raw).expect("induced filtration is valid")
    }

    /// Image filtration under a surjection q: Q^dim → Q^m.
    pub fn induced_quotient(&self, q: &Mat) -> FilteredSpace {
        assert_eq!(q.cols(), self.dim);
        let m = q.rows();
        let mut raw: Vec<(i64, Subspace)> = self
            .steps
            .iter()
            .map(|(i, s)| (*i, s.image_under(q)))
            .collect();
        raw.insert(0, (i64::MIN / 2, Subspace::whole(m)));
        FilteredSpace::new(m, raw).expect("quotient filtration is valid")
    }

    /// Transport along an isomorphism.
    pub fn transport(&self, a: &Mat) -> FilteredSpace {
        assert_eq!(a.cols(), self.dim);
        assert_eq!(a.rows(), self.dim);
        self.induced_quotient(a)
    }

    /// Tensor-product filtration F^n = Σ_{a+b=n} F^a ⊗ F^b.
    pub fn tensor(&self, other: &FilteredSpace) -> FilteredSpace {
        let dim = self.dim * other.dim;
        if dim == 0 {
            return FilteredSpace { dim, steps: vec![] };
        }
        let lo = self.jump_indices().first().copied().unwrap_or(0)
            + other.jump_indices().first().copied().unwrap_or(0);
        let hi = self.jump_indices().last().copied().unwrap_or(0)
            + other.jump_indices().last().copied().unwrap_or(0);
        let mut raw = Vec::new();
        for n in lo..=hi {
            let mut total = Subspace::zero(dim);
            for (a, sa) in &self.steps {
                let sb = other.filtration_at(n - a);
                if sa.is_zero() || sb.is_zero() {
                    continue;
                }
                let block = sa.basis_mat().kron(&sb.basis_mat());
                total = total.sum(&Subspace::image_of(&block)).unwrap();
            }
            raw.push((n, total));
        }
        raw.insert(0, (lo - 1, Subspace::whole(dim)));
        FilteredSpace::new(dim, raw).expect("tensor filtration is valid")
    }
}

/// A filtration-preserving linear map.
#[derive(Clone, Debug)]
pub struct FilteredMap {
    pub source: FilteredSpace,
    pub target: FilteredSpace,
    pub matrix: Mat,
}

impl FilteredMap {
    pub fn new(
        source: FilteredSpace,
        target: FilteredSpace,
        matrix: Mat,
    ) -> Result<Self, FilteredError> {
        assert_eq!(matrix.cols(), source.dim());
        assert_eq!(matrix.rows(), target.dim());
        for (i, s) in source.steps() {
            let img = s.image_under(&matrix);
            if !target.filtration_at(*i).contains(&img) {
                return Err(FilteredError::NotFiltered(*i));
            }
        }
        Ok(FilteredMap { source, target, matrix })
    }

    /// Strictness: f(F^i M) = F^i N ∩ Im(f) for every i. On failure returns
    /// the offending index and a vector of the right side not in the left.
    pub fn is_strict(&self) -> (bool, Option<(i64, Vec<Rat>)>) {
        let image = Subspace::image_of(&self.matrix);
        let mut indices: Vec<i64> = self
            .source
            .jump_indices()
            .into_iter()
            .chain(self.target.jump_indices())
            .collect();
        indices.sort();
        indices.dedup();
        for i in indices {
            let lhs = self.source.filtration_at(i).image_under(&self.matrix);
            let rhs = self.target.filtration_at(i).intersect(&image).unwrap();
            if lhs != rhs {
                let witness = rhs
                    .basis()
                    .into_iter()
                    .find(|v| !lhs.contains_vec(v))
                    .expect("strictness failure has a witness");
                return (false, Some((i, witness)));
            }
        }
        (true, None)
    }
}

/// A bounded complex of filtered spaces with filtration-preserving
/// differentials squaring to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    pub min_deg: i64,
    pub terms: Vec<FilteredSpace>,
    pub diffs: Vec<Mat>,
}

impl FilteredComplex {
    pub fn new(
        min_deg: i64,
        terms: Vec<FilteredSpace>,
        diffs: Vec<Mat>,
    ) -> Result<Self, FilteredError> {
        ChainComplex::new(
            min_deg,
            terms.iter().map(FilteredSpace::dim).collect(),
            diffs.clone(),
        )
        .map_err(|_| FilteredError::NotChainMap)?;
        for k in 0..diffs.len() {
            FilteredMap::new(terms[k].clone(), terms[k + 1].clone(), diffs[k].clone())?;
        }
        Ok(FilteredComplex { min_deg, terms, diffs })
    }

    pub fn concentrated(t: FilteredSpace, deg: i64) -> Self {
        FilteredComplex { min_deg: deg, terms: vec![t], diffs: vec![] }
    }

    pub fn max_deg(&self) -> i64 {
        self.min_deg + self.terms.len() as i64 - 1
    }

    pub fn term_at(&self, i: i64) -> Option<&FilteredSpace> {
        if i < self.min_deg {
            return None;
        }
        self.terms.get((i - self.min_deg) as usize)
    }

    pub fn dim_at(&self, i: i64) -> usize {
        self.term_at(i).map(FilteredSpace::dim).unwrap_or(0)
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
            self.terms.iter().map(FilteredSpace::dim).collect(),
            self.diffs.clone(),
        )
        .expect("validated at construction")
    }

    pub fn diff_map(&self, i: i64) -> Option<FilteredMap> {
        let src = self.term_at(i)?.clone();
        let tgt = self.term_at(i + 1)?.clone();
        Some(FilteredMap { source: src, target: tgt, matrix: self.diff_from(i) })
    }

    /// A complex is strict when all its differentials are.
    pub fn is_strict(&self) -> bool {
        (self.min_deg..=self.max_deg()).all(|i| match self.diff_map(i) {
            Some(f) => f.is_strict().0,
            None => true,
        })
    }

    pub fn all_jump_indices(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.terms.iter().flat_map(|t| t.jump_indices()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// The graded piece gr^j as a plain complex, together with per-term
    /// projection data.
    pub fn gr_complex(&self, j: i64) -> (ChainComplex, Vec<GrPiece>) {
        let mut pieces = Vec::new();
        for t in &self.terms {
            let fj = t.filtration_at(j);
            let fj1 = t.filtration_at(j + 1);
            let basis = fj.basis_mat(); // n x k
            let sub_coords = Mat::from_cols(
                fj.dim(),
                &fj1.basis()
                    .iter()
                    .map(|v| basis.solve(v).expect("F^{j+1} ⊆ F^j"))
                    .collect::<Vec<_>>(),
            );
            let q = Subspace::col_span(&sub_coords).quotient_map(); // g x k
            pieces.push(GrPiece { basis, q });
        }
        let dims: Vec<usize> = pieces.iter().map(|p| p.q.rows()).collect();
        let mut diffs = Vec::new();
        for k in 0..self.diffs.len() {
            let src = &pieces[k];
            let tgt = &pieces[k + 1];
            // gr(d): lift a gr-basis vector to F^j, apply d, project back.
            let lift = &src.basis * &right_inverse(&src.q);
            let tleft = left_inverse(&tgt.basis);
            let m = &tgt.q * &(&tleft * &(&self.diffs[k] * &lift));
            diffs.push(m);
        }
        (
            ChainComplex::new(self.min_deg, dims, diffs).expect("gr complex is a complex"),
            pieces,
        )
    }

    /// Truncation τ≤n: … → M^{n−1} → ker(d^n) with the induced filtration.
    pub fn truncate_le(&self, n: i64) -> FilteredComplex {
        if n >= self.max_deg() {
            return self.clone();
        }
        if n < self.min_deg {
            return FilteredComplex { min_deg: 0, terms: vec![], diffs: vec![] };
        }
        let ker = Subspace::kernel_of(&self.diff_from(n));
        let inc = ker.basis_mat();
        let ker_filtered = self.term_at(n).unwrap().induced_sub(&inc);
        let mut terms: Vec<FilteredSpace> = Vec::new();
        let mut diffs: Vec<Mat> = Vec::new();
        for i in self.min_deg..n {
            terms.push(self.term_at(i).unwrap().clone());
            if i < n - 1 {
                diffs.push(self.diff_from(i));
            }
        }
        if n > self.min_deg {
            let d = self.diff_from(n - 1);
            let cols: Vec<Vec<Rat>> = (0..d.cols())
                .map(|c| inc.solve(&d.col(c)).expect("d lands in ker(d^n)"))
                .collect();
            diffs.push(Mat::from_cols(ker.dim(), &cols));
        }
        terms.push(ker_filtered);
        FilteredComplex::new(self.min_deg, terms, diffs).expect("truncation is valid")
    }

    /// Truncation τ≥n: coim(d^{n−1}) → M^n → … with the quotient filtration,
    /// the coimage placed in degree n−1.
    pub fn truncate_ge(&self, n: i64) -> FilteredComplex {
        if n <= self.min_deg {
            return self.clone();
        }
        if n > self.max_deg() {
            return FilteredComplex { min_deg: 0, terms: vec![], diffs: vec![] };
        }
        let ker = Subspace::kernel_of(&self.diff_from(n - 1));
        let q = ker.quotient_map();
        let coim = self.term_at(n - 1).unwrap().induced_quotient(&q);
        let sec = right_inverse(&q);
        let induced = &self.diff_from(n - 1) * &sec;
        let mut terms = vec![coim];
        let mut diffs = vec![induced];
        for i in n..=self.max_deg() {
            terms.push(self.term_at(i).unwrap().clone());
            if i < self.max_deg() {
                diffs.push(self.diff_from(i));
            }
        }
        FilteredComplex::new(n - 1, terms, diffs).expect("truncation is valid")
    }

    /// The n-th cohomology object ker(d^n)/im(d^{n−1}) with the filtration
    /// induced from ker(d^n), expressed in the canonical class coordinates of
    /// `underlying().cohomology_at(n)` so that structures computed from the
    /// same cohomology data share coordinates.
    pub fn cohomology_object(&self, n: i64) -> FilteredSpace {
        let h = self.underlying().cohomology_at(n);
        self.cohomology_object_in(&h)
    }

    pub fn cohomology_object_in(&self, h: &CohomologySpace) -> FilteredSpace {
        let n = h.degree;
        if h.dim == 0 {
            return FilteredSpace::trivial(0, 0);
        }
        let term = self.term_at(n).expect("cohomology supported on terms");
        let mut raw: Vec<(i64, Subspace)> = Vec::new();
        for (i, s) in term.steps() {
            let inter = s.intersect(&h.cocycles).unwrap();
            raw.push((*i, inter.image_under(&h.class_map)));
        }
        raw.insert(0, (i64::MIN / 2, Subspace::whole(h.dim)));
        FilteredSpace::new(h.dim, raw).expect("induced filtration is valid")
    }
}

/// Projection data for one term of a graded piece: the F^j basis matrix and
/// the quotient onto gr^j in those coordinates.
#[derive(Clone, Debug)]
pub struct GrPiece {
    pub basis: Mat,
    pub q: Mat,
}

/// A chain map of filtered complexes, filtration-preserving degree-wise.
/// Maps are indexed from the source's min_deg.
#[derive(Clone, Debug)]
pub struct FilteredChainMap {
    pub maps: Vec<Mat>,
}

impl FilteredChainMap {
    pub fn new(
        src: &FilteredComplex,
        tgt: &FilteredComplex,
        maps: Vec<Mat>,
    ) -> Result<Self, FilteredError> {
        assert_eq!(maps.len(), src.terms.len());
        for (k, m) in maps.iter().enumerate() {
            let i = src.min_deg + k as i64;
            FilteredMap::new(
                src.term_at(i).unwrap().clone(),
                tgt.term_at(i)
                    .cloned()
                    .unwrap_or_else(|| FilteredSpace::trivial(0, 0)),
                m.clone(),
            )?;
            let lhs = &tgt.diff_from(i) * m;
            let rhs_map = maps
                .get(k + 1)
                .cloned()
                .unwrap_or_else(|| Mat::zero(tgt.dim_at(i + 1), src.dim_at(i + 1)));
            let rhs = &rhs_map * &src.diff_from(i);
            if lhs != rhs {
                return Err(FilteredError::NotChainMap);
            }
        }
        Ok(FilteredChainMap { maps })
    }
}

/// A filtered chain map is a quasi-isomorphism in the filtered sense iff it
/// induces isomorphisms on the cohomology of every graded piece.
pub fn is_quasi_iso_filtered(
    src: &FilteredComplex,
    tgt: &FilteredComplex,
    f: &FilteredChainMap,
) -> bool {
    let mut indices = src.all_jump_indices();
    indices.extend(tgt.all_jump_indices());
    indices.sort();
    indices.dedup();
    for j in indices {
        let (gs, ps) = src.gr_complex(j);
        let (gt, pt) = tgt.gr_complex(j);
        let degrees: Vec<i64> = gs.degrees().chain(gt.degrees()).collect();
        for i in degrees {
            let hs = gs.cohomology_at(i);
            let ht = gt.cohomology_at(i);
            if hs.dim != ht.dim {
                return false;
            }
            if hs.dim == 0 {
                continue;
            }
            let k = (i - src.min_deg) as usize;
            let fi = match f.maps.get(k) {
                Some(m) => m.clone(),
                None => return false,
            };
            let src_piece = &ps[k];
            let tgt_piece = &pt[k];
            let lift = &src_piece.basis * &right_inverse(&src_piece.q);
            let tleft = left_inverse(&tgt_piece.basis);
            let gr_f = &tgt_piece.q * &(&tleft * &(&fi * &lift));
            let induced = &ht.class_map * &(&gr_f * &hs.reps);
            if induced.rank() != hs.dim {
                return false;
            }
        }
    }
    true
}

/// The subspace of Hom(M, T) of filtration-preserving matrices, in the
/// column-major matrix coordinates.
pub fn hom_dr(m: &FilteredSpace, t: &FilteredSpace) -> Subspace {
    let (dm, dt) = (m.dim(), t.dim());
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for (i, s) in m.steps() {
        let q = t.filtration_at(*i).quotient_map();
        for v in s.basis() {
            // condition q · X · v = 0 gives the rows of (vᵀ ⊗ q)
            let vt = Mat::from_fn(1, dm, |_, j| v[j].clone());
            let cond = vt.kron(&q);
            for r in 0..cond.rows() {
                rows.push(cond.row(r));
            }
        }
    }
    if rows.is_empty() {
        return Subspace::whole(dm * dt);
    }
    let sys = Mat::from_rows_vec(rows, dm * dt);
    Subspace::kernel_of(&sys)
}

pub(crate) fn left_inverse(m: &Mat) -> Mat {
    crate::phimod::left_inverse_pub(m)
}

pub(crate) fn right_inverse(m: &Mat) -> Mat {
    crate::phimod::right_inverse_pub(m)
}
