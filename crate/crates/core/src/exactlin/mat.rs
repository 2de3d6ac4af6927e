use super::Rat;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A dense matrix over the exact rationals, row-major.
///
/// Linear maps are applied to column vectors: a `rows x cols` matrix maps
/// Q^cols to Q^rows.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        Mat { rows, cols, entries }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Mat { rows, cols, entries }
    }

    /// Build from integer entries given row by row.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Mat::from_fn(r, c, |i, j| Rat::from_int(rows[i][j]))
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat::from_fn(rows, cols, |_, _| Rat::zero())
    }

    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { Rat::one() } else { Rat::zero() })
    }

    pub fn scalar(n: usize, c: &Rat) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { c.clone() } else { Rat::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rat::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.at(i, j).is_one()
                    } else {
                        self.at(i, j).is_zero()
                    }
                })
            })
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn scale(&self, c: &Rat) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * c)
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Rat> {
        (0..self.cols).map(|j| self.at(i, j).clone()).collect()
    }

    pub fn from_cols(ambient: usize, cols: &[Vec<Rat>]) -> Mat {
        for c in cols {
            assert_eq!(c.len(), ambient);
        }
        Mat::from_fn(ambient, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn from_rows_vec(rows: Vec<Vec<Rat>>, cols: usize) -> Mat {
        let r = rows.len();
        for row in &rows {
            assert_eq!(row.len(), cols);
        }
        Mat::new(r, cols, rows.into_iter().flatten().collect())
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut s = Rat::zero();
                for j in 0..self.cols {
                    s += self.at(i, j) * &v[j];
                }
                s
            })
            .collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        })
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Mat) -> Mat {
        Mat::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| {
            if i < self.rows && j < self.cols {
                self.at(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.at(i - self.rows, j - self.cols).clone()
            } else {
                Rat::zero()
            }
        })
    }

    /// Kronecker product, acting on v ⊗ w by (A⊗B)(v⊗w) = Av ⊗ Bw.
    pub fn kron(&self, other: &Mat) -> Mat {
        Mat::from_fn(
            self.rows * other.rows,
            self.cols * other.cols,
            |i, j| {
                let (i1, i2) = (i / other.rows, i % other.rows);
                let (j1, j2) = (j / other.cols, j % other.cols);
                self.at(i1, j1) * other.at(i2, j2)
            },
        )
    }

    /// Gaussian elimination to reduced row echelon form; returns the reduced
    /// matrix together with the pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r >= a.rows {
                break;
            }
            let Some(pr) = (r..a.rows).find(|&i| !a.at(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..a.cols {
                    let x = a.at(pr, j).clone();
                    let y = a.at(r, j).clone();
                    a.set(pr, j, y);
                    a.set(r, j, x);
                }
            }
            let piv = a.at(r, c).clone();
            for j in 0..a.cols {
                a.set(r, j, &a.at(r, j).clone() / &piv);
            }
            for i in 0..a.rows {
                if i != r && !a.at(i, c).is_zero() {
                    let f = a.at(i, c).clone();
                    for j in 0..a.cols {
                        let v = a.at(i, j).clone() - (&f * a.at(r, j));
                        a.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the kernel (columns v with self·v = 0), in the canonical
    /// free-column order produced by back-substitution from the rref.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut m = vec![None; self.cols];
            for (row, &c) in pivots.iter().enumerate() {
                m[c] = Some(row);
            }
            m
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.at(row, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solve self·x = b; `None` when inconsistent. Returns the solution with
    /// zero free coordinates.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hcat(&Mat::from_cols(self.rows, &[b.to_vec()]));
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            x[c] = r.at(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = self.hcat(&Mat::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| r.at(i, n + j).clone()))
    }

    pub fn det(&self) -> Rat {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !a.at(i, c).is_zero()) else {
                return Rat::zero();
            };
            if pr != c {
                det = -det;
                for j in 0..n {
                    let x = a.at(pr, j).clone();
                    let y = a.at(c, j).clone();
                    a.set(pr, j, y);
                    a.set(c, j, x);
                }
            }
            let piv = a.at(c, c).clone();
            det *= piv.clone();
            for i in (c + 1)..n {
                if !a.at(i, c).is_zero() {
                    let f = &a.at(i, c).clone() / &piv;
                    for j in c..n {
                        let v = a.at(i, j).clone() - (&f * a.at(c, j));
                        a.set(i, j, v);
                    }
                }
            }
        }
        det
    }

    pub fn pow(&self, e: usize) -> Mat {
        assert!(self.is_square());
        let mut acc = Mat::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn is_nilpotent(&self) -> bool {
        assert!(self.is_square());
        self.pow(self.rows).is_zero()
    }

    pub fn trace(&self) -> Rat {
        assert!(self.is_square());
        let mut t = Rat::zero();
        for i in 0..self.rows {
            t += self.at(i, i).clone();
        }
        t
    }

    /// Entries flattened column-by-column; the coordinate vector of this
    /// matrix inside Hom(Q^cols, Q^rows) used by the Hom-space machinery.
    pub fn vec_coords(&self) -> Vec<Rat> {
        let mut v = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self.at(i, j).clone());
            }
        }
        v
    }

    pub fn from_vec_coords(rows: usize, cols: usize, v: &[Rat]) -> Mat {
        assert_eq!(v.len(), rows * cols);
        Mat::from_fn(rows, cols, |i, j| v[j * rows + i].clone())
    }

    /// Minimal polynomial, as coefficients c_0..c_d with c_d = 1 for
    /// p(x) = sum c_k x^k.
    pub fn min_poly(&self) -> Vec<Rat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut powers: Vec<Mat> = vec![Mat::identity(n)];
        loop {
            let cols: Vec<Vec<Rat>> = powers.iter().map(Mat::vec_coords).collect();
            let m = Mat::from_cols(n * n, &cols);
            let next = powers.last().unwrap() * self;
            let target = next.vec_coords();
            if let Some(x) = m.solve(&target) {
                let mut coeffs: Vec<Rat> = x.into_iter().map(|c| -c).collect();
                coeffs.push(Rat::one());
                return coeffs;
            }
            powers.push(next);
        }
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self.at(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + rhs.at(i, j))
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - rhs.at(i, j))
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        Mat::from_fn(self.rows, rhs.cols, |i, j| {
            let mut s = Rat::zero();
            for k in 0..self.cols {
                s += self.at(i, k) * rhs.at(k, j);
            }
            s
        })
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| -self.at(i, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_identity() {
        let m = Mat::identity(2);
        let (_, p) = m.rref();
        assert_eq!(p, vec![0, 1]);
        assert!(m.kernel_basis().is_empty());
    }

    #[test]
    fn rref_rank_one() {
        let m = Mat::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // kernel spanned by (-2, 1)
        assert_eq!(k[0], vec![Rat::from_int(-2), Rat::from_int(1)]);
    }

    #[test]
    fn inverse_and_det() {
        let m = Mat::from_int_rows(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.det(), Rat::from_int(1));
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        assert!(Mat::from_int_rows(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn min_poly_diag() {
        let m = Mat::from_int_rows(&[&[1, 0], &[0, 2]]);
        // (x-1)(x-2) = x^2 - 3x + 2
        assert_eq!(
            m.min_poly(),
            vec![Rat::from_int(2), Rat::from_int(-3), Rat::from_int(1)]
        );
    }

    #[test]
    fn kron_mixed_product() {
        let a = Mat::from_int_rows(&[&[1, 2], &[0, 1]]);
        let b = Mat::from_int_rows(&[&[0, 1], &[1, 0]]);
        let left = &a.kron(&b) * &a.kron(&b);
        let right = (&a * &a).kron(&(&b * &b));
        assert_eq!(left, right);
    }
}

/// Bundle of the row-reduction data of a matrix: rank, kernel, column-space
/// image and pivot columns, with rank–nullity holding by construction.
#[derive(Clone, Debug)]
pub struct RrefReport {
    pub rank: usize,
    pub kernel: super::Subspace,
    pub image: super::Subspace,
    pub pivot_cols: Vec<usize>,
}

pub fn rref_report(m: &Mat) -> RrefReport {
    let (_, pivot_cols) = m.rref();
    let kernel = super::Subspace::span(m.cols(), &m.kernel_basis());
    let image = super::Subspace::col_span(m);
    let rank = pivot_cols.len();
    debug_assert_eq!(rank + kernel.dim(), m.cols());
    debug_assert_eq!(image.dim(), rank);
    RrefReport { rank, kernel, image, pivot_cols }
}
