use crate::exactlin::{Mat, Rat, Subspace};

/// A bounded cochain complex of finite-dimensional Q-vector spaces.
///
/// `diffs[k]` is the differential out of degree `min_deg + k`; composites of
/// consecutive differentials are checked to vanish on construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainComplex {
    min_deg: i64,
    dims: Vec<usize>,
    diffs: Vec<Mat>,
}

#[derive(Debug, thiserror::Error)]
pub enum ChainComplexError {
    #[error("differential out of degree {0} has shape {1}x{2}, expected {3}x{4}")]
    Shape(i64, usize, usize, usize, usize),
    #[error("d∘d ≠ 0 out of degree {0}")]
    CompositeNotZero(i64),
}

/// Cohomology of one degree, with enough data to map cocycles to classes
/// and classes back to representative cocycles.
#[derive(Clone, Debug)]
pub struct CohomologySpace {
    pub degree: i64,
    pub dim: usize,
    pub cocycles: Subspace,
    pub boundaries: Subspace,
    /// h x dim(C^i): sends a cocycle (as an ambient vector) to its class.
    pub class_map: Mat,
    /// dim(C^i) x h: representative cocycle of each basis class.
    pub reps: Mat,
}

impl ChainComplex {
    pub fn new(min_deg: i64, dims: Vec<usize>, diffs: Vec<Mat>) -> Result<Self, ChainComplexError> {
        assert_eq!(
            diffs.len(),
            dims.len().saturating_sub(1),
            "need one differential between consecutive terms"
        );
        for (k, d) in diffs.iter().enumerate() {
            if d.rows() != dims[k + 1] || d.cols() != dims[k] {
                return Err(ChainComplexError::Shape(
                    min_deg + k as i64,
                    d.rows(),
                    d.cols(),
                    dims[k + 1],
                    dims[k],
                ));
            }
        }
        for k in 0..diffs.len().saturating_sub(1) {
            if !(&diffs[k + 1] * &diffs[k]).is_zero() {
                return Err(ChainComplexError::CompositeNotZero(min_deg + k as i64));
            }
        }
        Ok(ChainComplex { min_deg, dims, diffs })
    }

    pub fn zero() -> Self {
        ChainComplex { min_deg: 0, dims: vec![], diffs: vec![] }
    }

    pub fn concentrated(deg: i64, dim: usize) -> Self {
        ChainComplex { min_deg: deg, dims: vec![dim], diffs: vec![] }
    }

    pub fn min_deg(&self) -> i64 {
        self.min_deg
    }

    pub fn max_deg(&self) -> i64 {
        self.min_deg + self.dims.len() as i64 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.min_deg..=self.max_deg()
    }

    pub fn dim_at(&self, i: i64) -> usize {
        if i < self.min_deg {
            return 0;
        }
        let k = (i - self.min_deg) as usize;
        self.dims.get(k).copied().unwrap_or(0)
    }

    /// The differential C^i -> C^{i+1}, a zero matrix outside the support.
    pub fn diff_from(&self, i: i64) -> Mat {
        if i >= self.min_deg && ((i - self.min_deg) as usize) < self.diffs.len() {
            self.diffs[(i - self.min_deg) as usize].clone()
        } else {
            Mat::zero(self.dim_at(i + 1), self.dim_at(i))
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn cohomology_at(&self, i: i64) -> CohomologySpace {
        let d_out = self.diff_from(i);
        let d_in = self.diff_from(i - 1);
        let cocycles = Subspace::kernel_of(&d_out);
        let boundaries = Subspace::image_of(&d_in);
        let _n = self.dim_at(i);
        let k = cocycles.dim();
        // Coordinates in the cocycle basis, then quotient by boundaries.
        let kb = cocycles.basis_mat(); // n x k
        let left_inv = left_inverse(&kb);
        let b_in_k = Mat::from_cols(
            k,
            &boundaries
                .basis()
                .iter()
                .map(|v| kb.solve(v).expect("boundaries lie in cocycles"))
                .collect::<Vec<_>>(),
        );
        let q = Subspace::col_span(&b_in_k).quotient_map(); // h x k
        let class_map = &q * &left_inv; // h x n
        let reps = &kb * &right_inverse(&q); // n x h
        CohomologySpace {
            degree: i,
            dim: q.rows(),
            cocycles,
            boundaries,
            class_map,
            reps,
        }
    }

    /// Cohomology dimensions over the support of the complex.
    pub fn cohomology_dims(&self) -> Vec<(i64, usize)> {
        self.degrees()
            .map(|i| {
                let rank_out = self.diff_from(i).rank();
                let rank_in = self.diff_from(i - 1).rank();
                (i, self.dim_at(i) - rank_out - rank_in)
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .map(|i| {
                let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
                sign * self.dim_at(i) as i64
            })
            .sum()
    }

    pub fn shift(&self, by: i64) -> ChainComplex {
        // C[k]^n = C^{n+k}; differentials pick up the sign (-1)^k.
        let sign = if by.rem_euclid(2) == 0 {
            Rat::one()
        } else {
            -Rat::one()
        };
        ChainComplex {
            min_deg: self.min_deg - by,
            dims: self.dims.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(&sign)).collect(),
        }
    }

    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        if self.dims.is_empty() {
            return other.clone();
        }
        if other.dims.is_empty() {
            return self.clone();
        }
        let lo = self.min_deg.min(other.min_deg);
        let hi = self.max_deg().max(other.max_deg());
        let dims: Vec<usize> = (lo..=hi)
            .map(|i| self.dim_at(i) + other.dim_at(i))
            .collect();
        let diffs: Vec<Mat> = (lo..hi)
            .map(|i| self.diff_from(i).direct_sum(&other.diff_from(i)))
            .collect();
        ChainComplex { min_deg: lo, dims, diffs }
    }

    /// Total complex of the tensor product, with the Koszul sign on the
    /// second factor: d(x⊗y) = dx⊗y + (-1)^i x⊗dy.
    pub fn tensor(&self, other: &ChainComplex) -> ChainComplex {
        if self.dims.is_empty() || other.dims.is_empty() {
            return ChainComplex::zero();
        }
        let lo = self.min_deg + other.min_deg;
        let hi = self.max_deg() + other.max_deg();
        let pair_offsets = |n: i64| -> Vec<(i64, usize)> {
            // (i, offset) for blocks C^i ⊗ D^{n-i}, ordered by i.
            let mut out = Vec::new();
            let mut off = 0;
            for i in self.degrees() {
                let d = self.dim_at(i) * other.dim_at(n - i);
                if d > 0 {
                    out.push((i, off));
                }
                off += d;
            }
            out
        };
        let dim_total = |n: i64| -> usize {
            self.degrees()
                .map(|i| self.dim_at(i) * other.dim_at(n - i))
                .sum()
        };
        let mut diffs = Vec::new();
        for n in lo..hi {
            let mut d = Mat::zero(dim_total(n + 1), dim_total(n));
            let src_blocks = pair_offsets(n);
            let tgt_blocks = pair_offsets(n + 1);
            for &(i, soff) in &src_blocks {
                let (a, b) = (self.dim_at(i), other.dim_at(n - i));
                // dx ⊗ y : block (i, n-i) -> (i+1, n-i)
                if let Some(&(_, toff)) = tgt_blocks.iter().find(|(j, _)| *j == i + 1) {
                    let m = self.diff_from(i).kron(&Mat::identity(b));
                    add_block(&mut d, toff, soff, &m);
                }
                // (-1)^i x ⊗ dy : block (i, n-i) -> (i, n-i+1)
                if let Some(&(_, toff)) = tgt_blocks.iter().find(|(j, _)| *j == i) {
                    let sign = if (i % 2 + 2) % 2 == 0 {
                        Rat::one()
                    } else {
                        -Rat::one()
                    };
                    let m = Mat::identity(a)
                        .kron(&other.diff_from(n - i))
                        .scale(&sign);
                    add_block(&mut d, toff, soff, &m);
                }
            }
            diffs.push(d);
        }
        ChainComplex {
            min_deg: lo,
            dims: (lo..=hi).map(dim_total).collect(),
            diffs,
        }
    }

    /// Restrict to degree-wise subspaces that are closed under the
    /// differential; the result is expressed in the subspace bases.
    pub fn subcomplex(&self, subspaces: &[Subspace]) -> ChainComplex {
        assert_eq!(subspaces.len(), self.dims.len());
        for (k, s) in subspaces.iter().enumerate() {
            assert_eq!(s.ambient_dim(), self.dims[k]);
        }
        let mut diffs = Vec::new();
        for k in 0..self.diffs.len() {
            let img = subspaces[k].image_under(&self.diffs[k]);
            assert!(
                subspaces[k + 1].contains(&img),
                "subspaces not closed under the differential"
            );
            let tgt_basis = subspaces[k + 1].basis_mat();
            let cols: Vec<Vec<Rat>> = subspaces[k]
                .basis()
                .iter()
                .map(|v| {
                    tgt_basis
                        .solve(&self.diffs[k].apply(v))
                        .expect("image lies in the target subspace")
                })
                .collect();
            diffs.push(Mat::from_cols(subspaces[k + 1].dim(), &cols));
        }
        ChainComplex {
            min_deg: self.min_deg,
            dims: subspaces.iter().map(Subspace::dim).collect(),
            diffs,
        }
    }
}

pub(crate) fn add_block(dst: &mut Mat, row_off: usize, col_off: usize, block: &Mat) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            let v = dst.at(row_off + i, col_off + j).clone() + block.at(i, j).clone();
            dst.set(row_off + i, col_off + j, v);
        }
    }
}

/// Left inverse of a full-column-rank matrix.
pub(crate) fn left_inverse(m: &Mat) -> Mat {
    let k = m.cols();
    let sub = Subspace::col_span(m);
    assert_eq!(sub.dim(), k, "matrix must have full column rank");
    // Complete the columns to a basis and invert.
    let q = sub.quotient_map();
    let mut cols: Vec<Vec<Rat>> = (0..k).map(|j| m.col(j)).collect();
    // complement: preimages of the standard basis under q
    for i in 0..q.rows() {
        let mut e = vec![Rat::zero(); q.rows()];
        e[i] = Rat::one();
        cols.push(q.solve(&e).expect("quotient map is surjective"));
    }
    let change = Mat::from_cols(m.rows(), &cols);
    let inv = change.inverse().expect("change of basis invertible");
    Mat::from_fn(k, m.rows(), |i, j| inv.at(i, j).clone())
}

/// Right inverse of a surjective matrix.
pub(crate) fn right_inverse(m: &Mat) -> Mat {
    let cols: Vec<Vec<Rat>> = (0..m.rows())
        .map(|i| {
            let mut e = vec![Rat::zero(); m.rows()];
            e[i] = Rat::one();
            m.solve(&e).expect("matrix must be surjective")
        })
        .collect();
    Mat::from_cols(m.cols(), &cols)
}
