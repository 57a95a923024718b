//! Lie-like algebras given by structure constants.
//!
//! An algebra of dimension `n` with `s` brackets stores, for every index `k`
//! and basis pair `(i, j)`, the coordinate vector of `<e_i, e_j>_k`. The two
//! defining identities are
//!
//! ```text
//! <<x,y>_k, z>_h = <x, <y,z>_h>_k + <<x,z>_h, y>_k      (Jacobi-like)
//! <<x,y>_k, z>_h = <<x,y>_h, z>_k                       (index swap)
//! ```
//!
//! With `s = 1` the first is the (right) Leibniz identity and the second is
//! vacuous.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::linalg::{LinalgError, Matrix, Subspace, Vector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("structure constants have the wrong shape: {0}")]
    Shape(String),
    #[error("bracket index {index} out of range for s = {s}")]
    IndexOutOfRange { index: usize, s: usize },
    #[error("vector of length {found} where the algebra has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("algebra is not solvable (derived algebra is the whole algebra)")]
    NotSolvable,
    #[error("zero-dimensional algebra has no codimension-one ideal")]
    ZeroDimensional,
    #[error("subspace is not closed under the brackets")]
    NotClosed,
    #[error("algebras have different numbers of brackets ({0} vs {1})")]
    IndexCountMismatch(usize, usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Which defining identity failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Identity {
    JacobiLike,
    IndexSwap,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Identity::JacobiLike => "jacobi-like",
            Identity::IndexSwap => "index-swap",
        })
    }
}

/// A failure of an identity at basis triple `(e_i, e_j, e_l)` and brackets `(k, h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraViolation {
    pub identity: Identity,
    pub i: usize,
    pub j: usize,
    pub l: usize,
    pub k: usize,
    pub h: usize,
    /// Left side minus right side; never zero.
    pub residual: Vector,
}

impl fmt::Display for AlgebraViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails at (e{}, e{}, e{}) with k = {}, h = {}: residual {}",
            self.identity,
            self.i + 1,
            self.j + 1,
            self.l + 1,
            self.k,
            self.h,
            self.residual
        )
    }
}

/// Witness for a trivial algebra: every bracket is `phi[k]` times bracket `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triviality {
    pub base: usize,
    pub phi: Vec<Scalar>,
}

/// Finite-dimensional Lie-like algebra with brackets indexed by `0..s`.
#[derive(Clone)]
pub struct LieLikeAlgebra {
    dim: usize,
    s: usize,
    // c[k][i][j] = coordinates of <e_i, e_j>_k
    c: Vec<Vec<Vec<Vector>>>,
    validated: bool,
}

impl PartialEq for LieLikeAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.s == other.s && self.c == other.c
    }
}

impl Eq for LieLikeAlgebra {}

impl fmt::Debug for LieLikeAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieLikeAlgebra")
            .field("dim", &self.dim)
            .field("s", &self.s)
            .field("c", &self.c)
            .finish()
    }
}

impl LieLikeAlgebra {
    pub fn new(dim: usize, s: usize, c: Vec<Vec<Vec<Vector>>>) -> Result<Self, AlgebraError> {
        if s == 0 && dim > 0 {
            return Err(AlgebraError::Shape("s must be at least 1".into()));
        }
        if c.len() != s {
            return Err(AlgebraError::Shape(format!("{} tensors for s = {s}", c.len())));
        }
        for (k, tensor) in c.iter().enumerate() {
            if tensor.len() != dim || tensor.iter().any(|row| row.len() != dim) {
                return Err(AlgebraError::Shape(format!("tensor {k} is not {dim}x{dim}")));
            }
            if tensor.iter().flatten().any(|v| v.len() != dim) {
                return Err(AlgebraError::Shape(format!(
                    "tensor {k} has a bracket vector not of length {dim}"
                )));
            }
        }
        Ok(LieLikeAlgebra {
            dim,
            s,
            c,
            validated: false,
        })
    }

    /// The abelian algebra: every bracket is zero.
    pub fn abelian(dim: usize, s: usize) -> Self {
        let c = vec![vec![vec![Vector::zeros(dim); dim]; dim]; s];
        LieLikeAlgebra {
            dim,
            s,
            c,
            validated: true,
        }
    }

    /// Builds an algebra from its nonzero brackets `(k, i, j, <e_i, e_j>_k)`.
    pub fn from_brackets(
        dim: usize,
        s: usize,
        brackets: impl IntoIterator<Item = (usize, usize, usize, Vector)>,
    ) -> Result<Self, AlgebraError> {
        let mut alg = Self::abelian(dim, s);
        alg.validated = false;
        for (k, i, j, v) in brackets {
            if k >= s {
                return Err(AlgebraError::IndexOutOfRange { index: k, s });
            }
            if i >= dim || j >= dim || v.len() != dim {
                return Err(AlgebraError::Shape(format!("bracket ({k}, {i}, {j}) out of shape")));
            }
            alg.c[k][i][j] = v;
        }
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// `<e_i, e_j>_k`.
    pub fn structure_constant(&self, k: usize, i: usize, j: usize) -> &Vector {
        &self.c[k][i][j]
    }

    pub fn tensors(&self) -> &[Vec<Vec<Vector>>] {
        &self.c
    }

    /// Whether `check_algebra` has passed for this value.
    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// Runs [`check_algebra`](Self::check_algebra) and marks the algebra valid.
    pub fn validate(mut self) -> Result<Self, Vec<AlgebraViolation>> {
        let violations = self.check_algebra();
        if violations.is_empty() {
            self.validated = true;
            Ok(self)
        } else {
            Err(violations)
        }
    }

    /// `<x, y>_k` for arbitrary coordinate vectors.
    pub fn bracket(&self, x: &Vector, y: &Vector, k: usize) -> Result<Vector, AlgebraError> {
        if k >= self.s {
            return Err(AlgebraError::IndexOutOfRange { index: k, s: self.s });
        }
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(AlgebraError::DimensionMismatch {
                    expected: self.dim,
                    found: v.len(),
                });
            }
        }
        Ok(self.bracket_unchecked(x, y, k))
    }

    pub(crate) fn bracket_unchecked(&self, x: &Vector, y: &Vector, k: usize) -> Vector {
        let mut out = Vector::zeros(self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                out.axpy(&(xi * yj), &self.c[k][i][j]);
            }
        }
        out
    }

    /// Matrix of `a -> <a, e_i>_k`.
    pub fn right_mult(&self, k: usize, i: usize) -> Matrix {
        Matrix::from_fn(self.dim, self.dim, |r, a| self.c[k][a][i][r].clone())
    }

    /// Matrix of `a -> <e_i, a>_k`.
    pub fn left_mult(&self, k: usize, i: usize) -> Matrix {
        Matrix::from_fn(self.dim, self.dim, |r, a| self.c[k][i][a][r].clone())
    }

    /// All failures of the two defining identities on basis elements.
    ///
    /// Jacobi-like failures come first, ordered by `(k, h, i, j, l)`, then
    /// index-swap failures for `k < h`.
    pub fn check_algebra(&self) -> Vec<AlgebraViolation> {
        let n = self.dim;
        let right: Vec<Vec<Matrix>> = (0..self.s)
            .map(|k| (0..n).map(|i| self.right_mult(k, i)).collect())
            .collect();
        let left: Vec<Vec<Matrix>> = (0..self.s)
            .map(|k| (0..n).map(|i| self.left_mult(k, i)).collect())
            .collect();
        let mut out = Vec::new();
        for k in 0..self.s {
            for h in 0..self.s {
                for i in 0..n {
                    for j in 0..n {
                        for l in 0..n {
                            let lhs = right[h][l].mul_vec(&self.c[k][i][j]);
                            let rhs = &left[k][i].mul_vec(&self.c[h][j][l])
                                + &right[k][j].mul_vec(&self.c[h][i][l]);
                            let residual = &lhs - &rhs;
                            if !residual.is_zero() {
                                out.push(AlgebraViolation {
                                    identity: Identity::JacobiLike,
                                    i,
                                    j,
                                    l,
                                    k,
                                    h,
                                    residual,
                                });
                            }
                        }
                    }
                }
            }
        }
        for k in 0..self.s {
            for h in k + 1..self.s {
                for i in 0..n {
                    for j in 0..n {
                        for l in 0..n {
                            let residual = &right[h][l].mul_vec(&self.c[k][i][j])
                                - &right[k][l].mul_vec(&self.c[h][i][j]);
                            if !residual.is_zero() {
                                out.push(AlgebraViolation {
                                    identity: Identity::IndexSwap,
                                    i,
                                    j,
                                    l,
                                    k,
                                    h,
                                    residual,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn flat_tensor(&self, k: usize) -> Vector {
        self.c[k].iter().flatten().flat_map(|v| v.iter().cloned()).collect()
    }

    /// Whether all brackets are scalar multiples of a single bracket.
    ///
    /// Returns the witness when trivial. With every tensor zero the witness is
    /// bracket 0 with all scalars 1.
    pub fn is_trivial(&self) -> Option<Triviality> {
        let flats: Vec<Vector> = (0..self.s).map(|k| self.flat_tensor(k)).collect();
        let Some(base) = flats.iter().position(|t| !t.is_zero()) else {
            return Some(Triviality {
                base: 0,
                phi: vec![Scalar::one(); self.s],
            });
        };
        let phi = flats
            .iter()
            .map(|t| t.ratio_to(&flats[base]))
            .collect::<Option<Vec<_>>>()?;
        Some(Triviality { base, phi })
    }

    /// Whether `ideal` is a two-sided ideal for every bracket.
    pub fn is_ideal(&self, ideal: &Subspace) -> bool {
        assert_eq!(ideal.ambient_dim(), self.dim, "ideal lives in the wrong space");
        let basis = ideal.basis_vectors();
        (0..self.s).all(|k| {
            basis.iter().all(|b| {
                (0..self.dim).all(|i| {
                    let e = Vector::basis(self.dim, i);
                    ideal.contains(&self.bracket_unchecked(b, &e, k))
                        && ideal.contains(&self.bracket_unchecked(&e, b, k))
                })
            })
        })
    }

    /// Sum over all brackets of `<S, S>_k` for a subspace `S`.
    pub fn bracket_span(&self, sub: &Subspace) -> Subspace {
        let basis = sub.basis_vectors();
        let mut products = Vec::new();
        for k in 0..self.s {
            for a in &basis {
                for b in &basis {
                    let v = self.bracket_unchecked(a, b, k);
                    if !v.is_zero() {
                        products.push(v);
                    }
                }
            }
        }
        Subspace::span(self.dim, &products)
    }

    /// `D^1 = L`, `D^{m+1} = sum_k <D^m, D^m>_k`, listed until it stabilizes.
    pub fn derived_series(&self) -> Vec<Subspace> {
        let mut series = vec![Subspace::full(self.dim)];
        loop {
            let last = series.last().expect("nonempty");
            if last.is_zero() {
                break;
            }
            let next = self.bracket_span(last);
            if &next == last {
                break;
            }
            series.push(next);
        }
        series
    }

    /// Solvability and the first `m` with `D^m = 0` (or the series length
    /// when it stalls at a nonzero term).
    pub fn is_solvable(&self) -> (bool, usize) {
        let series = self.derived_series();
        let solvable = series.last().is_some_and(Subspace::is_zero);
        (solvable, series.len())
    }

    /// Splits `L = A + kx` with `A` a codimension-one ideal containing `D^2 L`.
    ///
    /// The canonical basis of `D^2 L` is extended by standard basis vectors in
    /// index order; `x` is the last vector added and `A` is spanned by the rest.
    pub fn split_codim1(&self) -> Result<(Subspace, Vector), AlgebraError> {
        if self.dim == 0 {
            return Err(AlgebraError::ZeroDimensional);
        }
        let derived = self.bracket_span(&Subspace::full(self.dim));
        if derived.is_full() {
            return Err(AlgebraError::NotSolvable);
        }
        let mut current = derived.clone();
        let mut added = Vec::new();
        for i in 0..self.dim {
            if current.is_full() {
                break;
            }
            let e = Vector::basis(self.dim, i);
            if !current.contains(&e) {
                current = Subspace::span(
                    self.dim,
                    current.basis_vectors().iter().chain(std::iter::once(&e)),
                );
                added.push(e);
            }
        }
        let x = added.pop().expect("derived algebra is proper");
        let ideal = Subspace::span(
            self.dim,
            derived.basis_vectors().iter().chain(added.iter()),
        );
        Ok((ideal, x))
    }

    /// Subalgebra on `sub`, written in the canonical basis of `sub`.
    pub fn restrict(&self, sub: &Subspace) -> Result<LieLikeAlgebra, AlgebraError> {
        if sub.ambient_dim() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: sub.ambient_dim(),
            });
        }
        let basis = sub.basis_vectors();
        let d = basis.len();
        let mut c = Vec::with_capacity(self.s);
        for k in 0..self.s {
            let mut tensor = Vec::with_capacity(d);
            for a in &basis {
                let mut row = Vec::with_capacity(d);
                for b in &basis {
                    let v = self.bracket_unchecked(a, b, k);
                    row.push(sub.coordinates(&v).ok_or(AlgebraError::NotClosed)?);
                }
                tensor.push(row);
            }
            c.push(tensor);
        }
        Ok(LieLikeAlgebra {
            dim: d,
            s: self.s,
            c,
            validated: self.validated,
        })
    }

    /// The same algebra in coordinates `y = P x`.
    pub fn transform(&self, p: &Matrix) -> Result<LieLikeAlgebra, AlgebraError> {
        if p.rows() != self.dim || p.cols() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: p.rows(),
            });
        }
        let inv = p.inverse()?;
        let old_basis: Vec<Vector> = (0..self.dim).map(|i| inv.column(i)).collect();
        let c = (0..self.s)
            .map(|k| {
                old_basis
                    .iter()
                    .map(|a| {
                        old_basis
                            .iter()
                            .map(|b| p.mul_vec(&self.bracket_unchecked(a, b, k)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(LieLikeAlgebra {
            dim: self.dim,
            s: self.s,
            c,
            validated: self.validated,
        })
    }

    /// Direct sum with brackets acting blockwise; both summands need the same `s`.
    pub fn direct_sum(&self, other: &LieLikeAlgebra) -> Result<LieLikeAlgebra, AlgebraError> {
        if self.s != other.s {
            return Err(AlgebraError::IndexCountMismatch(self.s, other.s));
        }
        let n = self.dim + other.dim;
        let embed = |v: &Vector, offset: usize| {
            let mut out = Vector::zeros(n);
            for (i, x) in v.iter().enumerate() {
                out[offset + i] = x.clone();
            }
            out
        };
        let mut sum = Self::abelian(n, self.s);
        for k in 0..self.s {
            for i in 0..self.dim {
                for j in 0..self.dim {
                    sum.c[k][i][j] = embed(&self.c[k][i][j], 0);
                }
            }
            for i in 0..other.dim {
                for j in 0..other.dim {
                    sum.c[k][self.dim + i][self.dim + j] = embed(&other.c[k][i][j], self.dim);
                }
            }
        }
        sum.validated = self.validated && other.validated;
        Ok(sum)
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    dim: usize,
    s: usize,
    #[serde(default)]
    c: Vec<Vec<Vec<Option<Vector>>>>,
}

impl Serialize for LieLikeAlgebra {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        AlgebraJson {
            dim: self.dim,
            s: self.s,
            c: self
                .c
                .iter()
                .map(|t| t.iter().map(|r| r.iter().cloned().map(Some).collect()).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LieLikeAlgebra {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = AlgebraJson::deserialize(deserializer)?;
        let (n, s) = (raw.dim, raw.s);
        if raw.c.len() > s {
            return Err(D::Error::custom(format!("{} tensors for s = {s}", raw.c.len())));
        }
        let mut alg = LieLikeAlgebra::abelian(n, s);
        alg.validated = false;
        for (k, tensor) in raw.c.into_iter().enumerate() {
            if tensor.len() > n {
                return Err(D::Error::custom(format!("tensor {k} has {} rows", tensor.len())));
            }
            for (i, row) in tensor.into_iter().enumerate() {
                if row.len() > n {
                    return Err(D::Error::custom(format!("tensor {k} row {i} too long")));
                }
                for (j, v) in row.into_iter().enumerate() {
                    match v {
                        Some(v) if v.len() != n => {
                            return Err(D::Error::custom(format!(
                                "bracket ({k}, {i}, {j}) has length {}",
                                v.len()
                            )))
                        }
                        Some(v) => alg.c[k][i][j] = v,
                        None => {}
                    }
                }
            }
        }
        if s == 0 && n > 0 {
            return Err(D::Error::custom("s must be at least 1"));
        }
        Ok(alg)
    }
}
