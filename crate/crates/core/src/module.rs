//! Ordinary modules over a Lie-like algebra.
//!
//! A module on `Q^m` is given by two operator families `f_k` and `g_k`,
//! stored on the algebra basis as `F[k][i] = f_k(e_i)` and `G[k][i] = g_k(e_i)`.
//! The axioms, for all `x, y` and indices `h, k`, are
//!
//! ```text
//! f_h(<x,y>_k) = [f_h(x), f_k(y)]
//! g_h(<x,y>_k) = [g_h(x), f_k(y)]
//! g_k(x) g_h(y) = g_h(x) f_k(y) = g_k(x) f_h(y)
//! f_k(x) f_h(y) = f_h(x) f_k(y)
//! f_k(x) g_h(y) = f_h(x) g_k(y)
//! ```

use std::fmt;
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, LieLikeAlgebra};
use crate::linalg::{LinalgError, Matrix, Subspace, Vector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("operator families have the wrong shape: {0}")]
    Shape(String),
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One of the five module axioms, named by what it constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    /// `g_k(x) g_h(y) = g_h(x) f_k(y) = g_k(x) f_h(y)`
    LeftProducts,
    /// `f_k(x) f_h(y) = f_h(x) f_k(y)`
    RightCommute,
    /// `f_k(x) g_h(y) = f_h(x) g_k(y)`
    MixedCommute,
    /// `f_h(<x,y>_k) = [f_h(x), f_k(y)]`
    RightBracket,
    /// `g_h(<x,y>_k) = [g_h(x), f_k(y)]`
    LeftBracket,
}

impl Axiom {
    pub fn tag(self) -> &'static str {
        match self {
            Axiom::LeftProducts => "left-products",
            Axiom::RightCommute => "right-commute",
            Axiom::MixedCommute => "mixed-commute",
            Axiom::RightBracket => "right-bracket",
            Axiom::LeftBracket => "left-bracket",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            Axiom::LeftProducts => "g_k(x)g_h(y) = g_h(x)f_k(y) = g_k(x)f_h(y)",
            Axiom::RightCommute => "f_k(x)f_h(y) = f_h(x)f_k(y)",
            Axiom::MixedCommute => "f_k(x)g_h(y) = f_h(x)g_k(y)",
            Axiom::RightBracket => "f_h(<x,y>_k) = [f_h(x), f_k(y)]",
            Axiom::LeftBracket => "g_h(<x,y>_k) = [g_h(x), f_k(y)]",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.tag(), self.formula())
    }
}

/// Failure of an axiom at `x = e_i`, `y = e_j` and indices `(k, h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleViolation {
    pub axiom: Axiom,
    pub k: usize,
    pub h: usize,
    pub i: usize,
    pub j: usize,
    /// Difference of the two sides; never zero.
    pub residual: Matrix,
}

impl fmt::Display for ModuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails at x = e{}, y = e{}, k = {}, h = {}",
            self.axiom,
            self.i + 1,
            self.j + 1,
            self.k,
            self.h
        )
    }
}

/// Which consequence of the axioms failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivedIdentity {
    /// `f_h(<x,y>_k) = f_k(<x,y>_h)`
    RightSwap,
    /// `g_h(<x,y>_k) = g_k(<x,y>_h)`
    LeftSwap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedFailure {
    pub identity: DerivedIdentity,
    pub k: usize,
    pub h: usize,
    pub i: usize,
    pub j: usize,
    pub residual: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DerivedReport {
    /// Number of `(identity, k, h, i, j)` instances evaluated.
    pub checked: usize,
    pub failures: Vec<DerivedFailure>,
}

impl DerivedReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Ordinary module over a shared algebra.
#[derive(Clone)]
pub struct OrdinaryModule {
    algebra: Arc<LieLikeAlgebra>,
    vdim: usize,
    // indexed by k * n + i
    f: Vec<Matrix>,
    g: Vec<Matrix>,
}

impl PartialEq for OrdinaryModule {
    fn eq(&self, other: &Self) -> bool {
        *self.algebra == *other.algebra
            && self.vdim == other.vdim
            && self.f == other.f
            && self.g == other.g
    }
}

impl Eq for OrdinaryModule {}

impl fmt::Debug for OrdinaryModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrdinaryModule")
            .field("vdim", &self.vdim)
            .field("f", &self.f)
            .field("g", &self.g)
            .finish_non_exhaustive()
    }
}

impl OrdinaryModule {
    /// `f[k][i]` and `g[k][i]` are the operators of basis element `e_i` under index `k`.
    pub fn new(
        algebra: Arc<LieLikeAlgebra>,
        vdim: usize,
        f: Vec<Vec<Matrix>>,
        g: Vec<Vec<Matrix>>,
    ) -> Result<Self, ModuleError> {
        let (s, n) = (algebra.s(), algebra.dim());
        let flatten = |fam: Vec<Vec<Matrix>>, name: &str| -> Result<Vec<Matrix>, ModuleError> {
            if fam.len() != s || fam.iter().any(|row| row.len() != n) {
                return Err(ModuleError::Shape(format!("{name} is not {s}x{n}")));
            }
            let flat: Vec<Matrix> = fam.into_iter().flatten().collect();
            if flat.iter().any(|m| m.rows() != vdim || m.cols() != vdim) {
                return Err(ModuleError::Shape(format!(
                    "{name} has an operator that is not {vdim}x{vdim}"
                )));
            }
            Ok(flat)
        };
        let f = flatten(f, "F")?;
        let g = flatten(g, "G")?;
        Ok(OrdinaryModule { algebra, vdim, f, g })
    }

    /// Module with every operator zero.
    pub fn zero(algebra: Arc<LieLikeAlgebra>, vdim: usize) -> Self {
        let count = algebra.s() * algebra.dim();
        OrdinaryModule {
            algebra,
            vdim,
            f: vec![Matrix::zeros(vdim, vdim); count],
            g: vec![Matrix::zeros(vdim, vdim); count],
        }
    }

    /// The algebra acting on itself with `f_k = -r_k` and `g_k = l_k`,
    /// where `r_k(x)a = <a, x>_k` and `l_k(x)a = <x, a>_k`.
    pub fn adjoint(algebra: Arc<LieLikeAlgebra>) -> Self {
        let (s, n) = (algebra.s(), algebra.dim());
        let mut f = Vec::with_capacity(s * n);
        let mut g = Vec::with_capacity(s * n);
        for k in 0..s {
            for i in 0..n {
                f.push(algebra.right_mult(k, i).scale(&-Scalar::one()));
                g.push(algebra.left_mult(k, i));
            }
        }
        OrdinaryModule {
            algebra,
            vdim: n,
            f,
            g,
        }
    }

    pub fn algebra(&self) -> &LieLikeAlgebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<LieLikeAlgebra> {
        &self.algebra
    }

    pub fn vdim(&self) -> usize {
        self.vdim
    }

    /// `f_k(e_i)`.
    pub fn f(&self, k: usize, i: usize) -> &Matrix {
        &self.f[k * self.algebra.dim() + i]
    }

    /// `g_k(e_i)`.
    pub fn g(&self, k: usize, i: usize) -> &Matrix {
        &self.g[k * self.algebra.dim() + i]
    }

    /// `f_k(z)` for an algebra vector `z`.
    pub fn f_at(&self, k: usize, z: &Vector) -> Matrix {
        self.combine(&self.f, k, z)
    }

    /// `g_k(z)` for an algebra vector `z`.
    pub fn g_at(&self, k: usize, z: &Vector) -> Matrix {
        self.combine(&self.g, k, z)
    }

    fn combine(&self, family: &[Matrix], k: usize, z: &Vector) -> Matrix {
        let n = self.algebra.dim();
        assert_eq!(z.len(), n, "algebra vector has wrong length");
        let mut out = Matrix::zeros(self.vdim, self.vdim);
        for (i, c) in z.iter().enumerate() {
            out.axpy(c, &family[k * n + i]);
        }
        out
    }

    /// Every operator `f_k(e_i)` followed by every `g_k(e_i)`, both in `(k, i)` order.
    pub fn all_operators(&self) -> impl Iterator<Item = &Matrix> {
        self.f.iter().chain(self.g.iter())
    }

    /// `F` as an `s x n` grid.
    pub fn f_family(&self) -> Vec<Vec<Matrix>> {
        self.grid(&self.f)
    }

    /// `G` as an `s x n` grid.
    pub fn g_family(&self) -> Vec<Vec<Matrix>> {
        self.grid(&self.g)
    }

    fn grid(&self, family: &[Matrix]) -> Vec<Vec<Matrix>> {
        let n = self.algebra.dim();
        (0..self.algebra.s())
            .map(|k| family[k * n..(k + 1) * n].to_vec())
            .collect()
    }

    /// All axiom failures on basis pairs.
    ///
    /// The product identities are checked before the bracket identities; within
    /// an axiom the order is `(k, h, i, j)`.
    pub fn check_module(&self) -> Vec<ModuleViolation> {
        let (s, n) = (self.algebra.s(), self.algebra.dim());
        let mut out = Vec::new();
        let mut push = |axiom, k, h, i, j, residual: Matrix| {
            if !residual.is_zero() {
                out.push(ModuleViolation {
                    axiom,
                    k,
                    h,
                    i,
                    j,
                    residual,
                });
            }
        };
        for axiom in [Axiom::LeftProducts, Axiom::RightCommute, Axiom::MixedCommute] {
            for k in 0..s {
                for h in 0..s {
                    for i in 0..n {
                        for j in 0..n {
                            match axiom {
                                Axiom::LeftProducts => {
                                    let a = self.g(k, i).mul(self.g(h, j));
                                    let b = self.g(h, i).mul(self.f(k, j));
                                    let first = a.sub(&b);
                                    if first.is_zero() {
                                        let c = self.g(k, i).mul(self.f(h, j));
                                        push(axiom, k, h, i, j, b.sub(&c));
                                    } else {
                                        push(axiom, k, h, i, j, first);
                                    }
                                }
                                Axiom::RightCommute => {
                                    if k < h {
                                        let r = self
                                            .f(k, i)
                                            .mul(self.f(h, j))
                                            .sub(&self.f(h, i).mul(self.f(k, j)));
                                        push(axiom, k, h, i, j, r);
                                    }
                                }
                                Axiom::MixedCommute => {
                                    if k < h {
                                        let r = self
                                            .f(k, i)
                                            .mul(self.g(h, j))
                                            .sub(&self.f(h, i).mul(self.g(k, j)));
                                        push(axiom, k, h, i, j, r);
                                    }
                                }
                                _ => unreachable!(),
                            }
                        }
                    }
                }
            }
        }
        for axiom in [Axiom::RightBracket, Axiom::LeftBracket] {
            for k in 0..s {
                for h in 0..s {
                    for i in 0..n {
                        for j in 0..n {
                            let br = self.algebra.structure_constant(k, i, j);
                            let r = match axiom {
                                Axiom::RightBracket => self
                                    .f_at(h, br)
                                    .sub(&self.f(h, i).commutator(self.f(k, j))),
                                _ => self
                                    .g_at(h, br)
                                    .sub(&self.g(h, i).commutator(self.f(k, j))),
                            };
                            push(axiom, k, h, i, j, r);
                        }
                    }
                }
            }
        }
        out
    }

    /// Checks `f_h(<x,y>_k) = f_k(<x,y>_h)` and `g_h(<x,y>_k) = g_k(<x,y>_h)`
    /// on basis pairs; on a valid module over a valid algebra these always hold.
    pub fn check_derived_identities(&self) -> DerivedReport {
        let (s, n) = (self.algebra.s(), self.algebra.dim());
        let mut report = DerivedReport::default();
        for k in 0..s {
            for h in k + 1..s {
                for i in 0..n {
                    for j in 0..n {
                        let a = self.algebra.structure_constant(k, i, j);
                        let b = self.algebra.structure_constant(h, i, j);
                        for identity in [DerivedIdentity::RightSwap, DerivedIdentity::LeftSwap] {
                            report.checked += 1;
                            let residual = match identity {
                                DerivedIdentity::RightSwap => self.f_at(h, a).sub(&self.f_at(k, b)),
                                DerivedIdentity::LeftSwap => self.g_at(h, a).sub(&self.g_at(k, b)),
                            };
                            if !residual.is_zero() {
                                report.failures.push(DerivedFailure {
                                    identity,
                                    k,
                                    h,
                                    i,
                                    j,
                                    residual,
                                });
                            }
                        }
                    }
                }
            }
        }
        report
    }

    /// Span of `(g_h(e_i) - f_k(e_i)) b` over all indices `h, k`, basis
    /// elements `e_i` and vectors `b`.
    pub fn plus_annihilator(&self) -> Subspace {
        let (s, n) = (self.algebra.s(), self.algebra.dim());
        let mut blocks = Vec::with_capacity(s * s * n);
        for h in 0..s {
            for k in 0..s {
                for i in 0..n {
                    // Rows of the transpose are the columns of the difference.
                    blocks.push(self.g(h, i).sub(self.f(k, i)).transpose());
                }
            }
        }
        Subspace::row_space(&Matrix::vstack(self.vdim, &blocks))
    }

    /// Whether `sub` is invariant under every `f_k(e_i)` and `g_k(e_i)`.
    pub fn is_submodule(&self, sub: &Subspace) -> bool {
        assert_eq!(sub.ambient_dim(), self.vdim, "subspace lives in the wrong space");
        self.all_operators().all(|m| sub.is_invariant_under(m))
    }

    /// The module over the subalgebra on `sub`, with operators reindexed to
    /// the canonical basis of `sub`.
    pub fn restrict(&self, sub: &Subspace) -> Result<OrdinaryModule, ModuleError> {
        let sub_algebra = Arc::new(self.algebra.restrict(sub)?);
        let s = self.algebra.s();
        let basis = sub.basis_vectors();
        let mut f = Vec::with_capacity(s * basis.len());
        let mut g = Vec::with_capacity(s * basis.len());
        for k in 0..s {
            for b in &basis {
                f.push(self.f_at(k, b));
                g.push(self.g_at(k, b));
            }
        }
        Ok(OrdinaryModule {
            algebra: sub_algebra,
            vdim: self.vdim,
            f,
            g,
        })
    }

    /// Conjugates every operator: `X -> P X P^{-1}`.
    pub fn change_basis(&self, p: &Matrix) -> Result<OrdinaryModule, ModuleError> {
        if p.rows() != self.vdim || p.cols() != self.vdim {
            return Err(ModuleError::Shape(format!(
                "basis change is {}x{}, module has dimension {}",
                p.rows(),
                p.cols(),
                self.vdim
            )));
        }
        let inv = p.inverse()?;
        let conj = |m: &Matrix| p.mul(m).mul(&inv);
        Ok(OrdinaryModule {
            algebra: Arc::clone(&self.algebra),
            vdim: self.vdim,
            f: self.f.iter().map(conj).collect(),
            g: self.g.iter().map(conj).collect(),
        })
    }

    /// The same module over `algebra`, which must be this module's algebra
    /// rewritten in coordinates `y = P x` (see [`LieLikeAlgebra::transform`]).
    pub fn transport_algebra_basis(
        &self,
        p: &Matrix,
        algebra: Arc<LieLikeAlgebra>,
    ) -> Result<OrdinaryModule, ModuleError> {
        let n = self.algebra.dim();
        if algebra.dim() != n || algebra.s() != self.algebra.s() {
            return Err(ModuleError::AlgebraMismatch);
        }
        let inv = p.inverse()?;
        let s = self.algebra.s();
        let mut f = Vec::with_capacity(s * n);
        let mut g = Vec::with_capacity(s * n);
        for k in 0..s {
            for i in 0..n {
                let old = inv.column(i);
                f.push(self.f_at(k, &old));
                g.push(self.g_at(k, &old));
            }
        }
        Ok(OrdinaryModule {
            algebra,
            vdim: self.vdim,
            f,
            g,
        })
    }

    /// Block-diagonal sum of two modules over the same algebra.
    pub fn direct_sum(&self, other: &OrdinaryModule) -> Result<OrdinaryModule, ModuleError> {
        if *self.algebra != *other.algebra {
            return Err(ModuleError::AlgebraMismatch);
        }
        let f = self
            .f
            .iter()
            .zip(&other.f)
            .map(|(a, b)| Matrix::block_diag(a, b))
            .collect();
        let g = self
            .g
            .iter()
            .zip(&other.g)
            .map(|(a, b)| Matrix::block_diag(a, b))
            .collect();
        Ok(OrdinaryModule {
            algebra: Arc::clone(&self.algebra),
            vdim: self.vdim + other.vdim,
            f,
            g,
        })
    }

    /// Replaces one operator; used to build perturbed test instances.
    pub fn with_operator(mut self, left: bool, k: usize, i: usize, m: Matrix) -> Self {
        assert!(m.rows() == self.vdim && m.cols() == self.vdim, "operator has wrong shape");
        let idx = k * self.algebra.dim() + i;
        if left {
            self.g[idx] = m;
        } else {
            self.f[idx] = m;
        }
        self
    }
}

#[derive(Serialize, Deserialize)]
struct ModuleJson {
    vdim: usize,
    #[serde(default, rename = "F")]
    f: Vec<Vec<Option<Matrix>>>,
    #[serde(default, rename = "G")]
    g: Vec<Vec<Option<Matrix>>>,
}

impl OrdinaryModule {
    /// JSON value `{"vdim", "F", "G"}` with full operator grids.
    pub fn to_json(&self) -> serde_json::Value {
        let wrap = |fam: Vec<Vec<Matrix>>| -> Vec<Vec<Option<Matrix>>> {
            fam.into_iter().map(|row| row.into_iter().map(Some).collect()).collect()
        };
        serde_json::to_value(ModuleJson {
            vdim: self.vdim,
            f: wrap(self.f_family()),
            g: wrap(self.g_family()),
        })
        .expect("module serializes")
    }

    /// Parses a module JSON value over `algebra`; missing operators are zero.
    pub fn from_json(
        algebra: Arc<LieLikeAlgebra>,
        value: &serde_json::Value,
    ) -> Result<Self, serde_json::Error> {
        let raw: ModuleJson = serde_json::from_value(value.clone())?;
        let (s, n, m) = (algebra.s(), algebra.dim(), raw.vdim);
        let fill = |fam: Vec<Vec<Option<Matrix>>>, name: &str| {
            if fam.len() > s || fam.iter().any(|row| row.len() > n) {
                return Err(serde_json::Error::custom(format!(
                    "{name} has more entries than the algebra allows ({s}x{n})"
                )));
            }
            let mut out = vec![Matrix::zeros(m, m); s * n];
            for (k, row) in fam.into_iter().enumerate() {
                for (i, op) in row.into_iter().enumerate() {
                    match op {
                        // An empty grid is an explicit zero operator (also for m = 0).
                        Some(op) if op.rows() == 0 => {}
                        Some(op) if op.rows() != m || op.cols() != m => {
                            return Err(serde_json::Error::custom(format!(
                                "{name}[{k}][{i}] is {}x{}, expected {m}x{m}",
                                op.rows(),
                                op.cols()
                            )))
                        }
                        Some(op) => out[k * n + i] = op,
                        None => {}
                    }
                }
            }
            Ok(out)
        };
        let f = fill(raw.f, "F")?;
        let g = fill(raw.g, "G")?;
        Ok(OrdinaryModule {
            algebra,
            vdim: m,
            f,
            g,
        })
    }
}
