use super::{Mat, Rat};
use std::fmt;

/// A linear subspace of Q^n in canonical form: the basis is stored as the
/// reduced row echelon form of any spanning set, so two equal subspaces have
/// identical representations and `==` decides equality of subspaces.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    ambient: usize,
    /// dim x ambient matrix in reduced row echelon form, rows = basis vectors.
    rows: Mat,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SubspaceError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Mat::zero(0, ambient) }
    }

    pub fn whole(ambient: usize) -> Self {
        Subspace { ambient, rows: Mat::identity(ambient) }
    }

    /// Span of the given vectors.
    pub fn span(ambient: usize, vectors: &[Vec<Rat>]) -> Self {
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length mismatch");
        }
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        let m = Mat::from_rows_vec(vectors.to_vec(), ambient);
        let (r, pivots) = m.rref();
        let rows = Mat::from_fn(pivots.len(), ambient, |i, j| r.at(i, j).clone());
        Subspace { ambient, rows }
    }

    /// Span of the columns of a matrix.
    pub fn col_span(m: &Mat) -> Self {
        let cols: Vec<Vec<Rat>> = (0..m.cols()).map(|j| m.col(j)).collect();
        Subspace::span(m.rows(), &cols)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_whole(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Basis vectors (the canonical echelon rows).
    pub fn basis(&self) -> Vec<Vec<Rat>> {
        (0..self.dim()).map(|i| self.rows.row(i)).collect()
    }

    /// ambient x dim matrix whose columns are the basis; the inclusion map
    /// of the subspace into the ambient space.
    pub fn basis_mat(&self) -> Mat {
        self.rows.transpose()
    }

    pub fn contains_vec(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut vs = self.basis();
        vs.push(v.to_vec());
        Subspace::span(self.ambient, &vs).dim() == self.dim()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient);
        self.sum(other).unwrap().dim() == self.dim()
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, SubspaceError> {
        self.check_ambient(other)?;
        let mut vs = self.basis();
        vs.extend(other.basis());
        Ok(Subspace::span(self.ambient, &vs))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, SubspaceError> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        // x in both spans: x = A u = B v, i.e. (u, v) in ker [A | -B].
        let a = self.basis_mat();
        let b = other.basis_mat();
        let glued = a.hcat(&(-&b));
        let ker = glued.kernel_basis();
        let vectors: Vec<Vec<Rat>> = ker
            .iter()
            .map(|uv| a.apply(&uv[..self.dim()]))
            .collect();
        Ok(Subspace::span(self.ambient, &vectors))
    }

    /// A surjection Q^ambient -> Q^(ambient - dim) whose kernel is exactly
    /// this subspace, with the canonical complement spanned by the non-pivot
    /// standard basis vectors.
    pub fn quotient_map(&self) -> Mat {
        let n = self.ambient;
        let d = self.dim();
        let pivots: Vec<usize> = (0..d)
            .map(|i| (0..n).find(|&j| !self.rows.at(i, j).is_zero()).unwrap())
            .collect();
        let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
        // Change of basis: x = B a + E b with B the subspace basis columns and
        // E the free standard vectors; the quotient map reads off b.
        let mut cols = self.basis();
        for &j in &free {
            let mut e = vec![Rat::zero(); n];
            e[j] = Rat::one();
            cols.push(e);
        }
        let change = Mat::from_cols(n, &cols);
        let inv = change.inverse().expect("basis completion is invertible");
        Mat::from_fn(n - d, n, |i, j| inv.at(d + i, j).clone())
    }

    /// Image of this subspace under a linear map.
    pub fn image_under(&self, m: &Mat) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        let vectors: Vec<Vec<Rat>> = self.basis().iter().map(|v| m.apply(v)).collect();
        Subspace::span(m.rows(), &vectors)
    }

    /// Preimage {x : m x in self} under a linear map m into this ambient.
    pub fn preimage_under(&self, m: &Mat) -> Subspace {
        assert_eq!(m.rows(), self.ambient);
        if self.is_whole() {
            return Subspace::whole(m.cols());
        }
        let q = self.quotient_map();
        Subspace::kernel_of(&(&q * m))
    }

    pub fn kernel_of(m: &Mat) -> Subspace {
        Subspace::span(m.cols(), &m.kernel_basis())
    }

    pub fn image_of(m: &Mat) -> Subspace {
        Subspace::col_span(m)
    }

    /// Coordinates of a vector of this subspace in its canonical basis.
    pub fn coords_of(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        self.basis_mat().solve(v)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), SubspaceError> {
        if self.ambient != other.ambient {
            Err(SubspaceError::AmbientMismatch(self.ambient, other.ambient))
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} of Q^{}) {:?}", self.dim(), self.ambient, self.rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| Rat::from_int(x)).collect()
    }

    #[test]
    fn canonical_equality() {
        let a = Subspace::span(3, &[v(&[1, 1, 0]), v(&[0, 1, 1])]);
        let b = Subspace::span(3, &[v(&[1, 2, 1]), v(&[2, 3, 1])]);
        assert_eq!(a, b);
    }

    #[test]
    fn sum_intersect_dims() {
        // two generic planes in dim 3: intersect dim 1, sum dim 3
        let a = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, &[v(&[0, 0, 1]), v(&[1, 1, 1])]);
        let s = a.sum(&b).unwrap();
        let i = a.intersect(&b).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(i.dim(), 1);
        assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
    }

    #[test]
    fn whole_intersect() {
        let w = Subspace::whole(2);
        let l = Subspace::span(2, &[v(&[1, 2])]);
        assert_eq!(w.intersect(&l).unwrap(), l);
    }

    #[test]
    fn quotient_map_kernel() {
        let s = Subspace::span(3, &[v(&[1, 2, 3])]);
        let q = s.quotient_map();
        assert_eq!(q.rows(), 2);
        assert_eq!(Subspace::kernel_of(&q), s);
        assert_eq!(q.rank(), 2);
    }

    #[test]
    fn ambient_mismatch_reported() {
        let a = Subspace::whole(2);
        let b = Subspace::whole(3);
        assert!(matches!(a.sum(&b), Err(SubspaceError::AmbientMismatch(2, 3))));
    }

    #[test]
    fn preimage() {
        let m = Mat::from_int_rows(&[&[1, 0], &[0, 0]]);
        let target = Subspace::zero(2);
        let pre = target.preimage_under(&m);
        assert_eq!(pre, Subspace::span(2, &[v(&[0, 1])]));
    }
}
