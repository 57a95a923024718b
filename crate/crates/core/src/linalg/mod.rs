//! Exact dense linear algebra over the rationals.

mod eigen;
mod matrix;
mod subspace;
mod vector;

use thiserror::Error;

pub use eigen::{
    char_poly, eigenspace, eval_poly, joint_eigenspace, joint_eigenvector, rational_eigenvalues,
    Spectrum,
};
pub use matrix::Matrix;
pub use subspace::{kernel, restrict_operator, Subspace};
pub use vector::Vector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("subspace is not invariant under the operator")]
    NotInvariant,
    #[error("characteristic polynomial does not split over the rationals")]
    NonSplitSpectrum,
    #[error("operators have no common eigenvector in the subspace")]
    NoJointEigenvector,
    #[error("subspace is zero")]
    EmptySubspace,
}

pub fn subspace_intersect(a: &Subspace, b: &Subspace) -> Result<Subspace, LinalgError> {
    a.intersect(b)
}

pub fn subspace_contains(a: &Subspace, v: &Vector) -> bool {
    a.contains(v)
}
