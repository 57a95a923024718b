use std::fmt;

use super::{LinalgError, Matrix, Vector};
use crate::scalar::Scalar;

/// A linear subspace of `Q^n`, stored by its reduced row-echelon basis.
///
/// The basis rows are nonzero, pivots strictly increase, and every pivot
/// column is a unit column. That form is unique, so two subspaces are equal
/// exactly when their basis matrices are identical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Canonical subspace spanned by the rows of `m`.
    pub fn row_space(m: &Matrix) -> Self {
        let (red, pivots) = m.rref();
        let basis = Matrix::from_fn(pivots.len(), m.cols(), |i, j| red.get(i, j).clone());
        Subspace {
            ambient_dim: m.cols(),
            basis,
            pivots,
        }
    }

    /// Span of `vectors`, each of length `ambient_dim`.
    pub fn span<'a>(ambient_dim: usize, vectors: impl IntoIterator<Item = &'a Vector>) -> Self {
        let rows: Vec<Vec<Scalar>> = vectors
            .into_iter()
            .inspect(|v| assert_eq!(v.len(), ambient_dim, "spanning vector has wrong length"))
            .filter(|v| !v.is_zero())
            .map(|v| v.to_vec())
            .collect();
        if rows.is_empty() {
            return Self::zero(ambient_dim);
        }
        Self::row_space(&Matrix::from_rows(rows, ambient_dim).expect("checked lengths"))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Basis matrix (one basis vector per row) in reduced row-echelon form.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        (0..self.dim()).map(|i| self.basis.row_vector(i)).collect()
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        self.basis.row_vector(i)
    }

    /// Whether `v` lies in the subspace. Panics if the lengths differ.
    pub fn contains(&self, v: &Vector) -> bool {
        self.residual(v).is_zero()
    }

    /// `v` minus its expansion along the basis pivots; zero iff `v` is a member.
    fn residual(&self, v: &Vector) -> Vector {
        assert_eq!(v.len(), self.ambient_dim, "vector length does not match ambient dimension");
        let mut r = v.clone();
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = r[p].clone();
            if !c.is_zero() {
                r.axpy(&-c, &self.basis.row_vector(i));
            }
        }
        r
    }

    /// Coordinates of `v` in the canonical basis, if `v` is a member.
    pub fn coordinates(&self, v: &Vector) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Vector with the given coordinates in the canonical basis.
    pub fn from_coordinates(&self, coords: &[Scalar]) -> Vector {
        assert_eq!(coords.len(), self.dim(), "coordinate vector has wrong length");
        let mut v = Vector::zeros(self.ambient_dim);
        for (i, c) in coords.iter().enumerate() {
            v.axpy(c, &self.basis.row_vector(i));
        }
        v
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim
            && (0..self.dim()).all(|i| other.contains(&self.basis.row_vector(i)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        Ok(Subspace::row_space(&Matrix::vstack(
            self.ambient_dim,
            &[self.basis.clone(), other.basis.clone()],
        )))
    }

    /// `{ w : <w, v> = 0 for all v in self }` under the standard pairing.
    pub fn annihilator(&self) -> Subspace {
        kernel(&self.basis)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        if self.is_full() || other.is_zero() {
            return Ok(other.clone());
        }
        if other.is_full() || self.is_zero() {
            return Ok(self.clone());
        }
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    /// Image of the subspace under `m`.
    pub fn image(&self, m: &Matrix) -> Subspace {
        let images: Vec<Vector> = self.basis_vectors().iter().map(|b| m.mul_vec(b)).collect();
        Subspace::span(m.rows(), &images)
    }

    /// Whether `m` maps the subspace into itself.
    pub fn is_invariant_under(&self, m: &Matrix) -> bool {
        (0..self.dim()).all(|i| self.contains(&m.mul_vec(&self.basis.row_vector(i))))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{:?} in Q^{}", self.basis_vectors(), self.ambient_dim)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, b) in self.basis_vectors().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "}} (dim {} of {})", self.dim(), self.ambient_dim)
    }
}

/// Null space `{ v : m v = 0 }` in canonical form.
pub fn kernel(m: &Matrix) -> Subspace {
    let n = m.cols();
    let (red, pivots) = m.rref();
    let mut generators = Vec::with_capacity(n - pivots.len());
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..n).filter(|&j| !is_pivot[j]) {
        let mut v = Vector::zeros(n);
        v[free] = Scalar::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -red.get(r, free);
        }
        generators.push(v);
    }
    Subspace::span(n, &generators)
}

/// Matrix of `m` restricted to the invariant subspace `s`, in the canonical
/// basis of `s` (column `j` holds the coordinates of `m b_j`).
pub fn restrict_operator(m: &Matrix, s: &Subspace) -> Result<Matrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() != s.ambient_dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: s.ambient_dim(),
            found: m.rows(),
        });
    }
    let d = s.dim();
    let mut out = Matrix::zeros(d, d);
    for j in 0..d {
        let image = m.mul_vec(&s.basis_vector(j));
        let coords = s.coordinates(&image).ok_or(LinalgError::NotInvariant)?;
        for (i, c) in coords.iter().enumerate() {
            out.set(i, j, c.clone());
        }
    }
    Ok(out)
}
