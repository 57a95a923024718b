//! Common weight vectors for modules over solvable Lie-like algebras.
//!
//! Given a solvable algebra `L` and a nonzero module `V`, [`solve`] finds a
//! nonzero `v` and functionals `phi_k`, `psi_k` with
//! `f_k(z) v = phi_k(z) v` and `g_k(z) v = psi_k(z) v` for every `z` and `k`.
//! The search follows the classical induction: split `L = A + kx` along a
//! codimension-one ideal, solve over `A`, and extend the weight to `x` by one
//! of the cases below.
//!
//! * `U` is the joint weight space of the weight found over `A`, `Ann` the
//!   plus annihilator of `V`.
//! * If `U ∩ Ann ≠ 0`, take a joint eigenvector `v0` of the `f_k(x)` there.
//!   If every `g_k(x) v0` vanishes, extend `psi` by zero. Otherwise the first
//!   nonzero `g_h(x) v0` is the candidate, with zero weight.
//! * If `U ∩ Ann = 0` and some `f_h(x) - g_h(x)` is nonzero on `U`, its image
//!   lies in the weight space with `psi` dropped to zero and in `Ann`, and the
//!   first case applies there.
//! * Otherwise `U` is stable under all `f_k(x)` and `g_k(x)`; take a joint
//!   eigenspace of the `f_k(x)` and inside it a joint eigenvector of the
//!   `g_k(x)`.
//!
//! The zero-weight candidate `g_h(x) v0` is only guaranteed to be a weight
//! vector when the annihilator is spanned by the same-index differences
//! `(g_k - f_k)(y) w`. With two or more brackets the cross-index differences
//! can break this (see `fixtures::scaled_affine2(&[1, 2])`). When the
//! candidate fails, the solver falls back to the submodule spanned by `v0`
//! and the `g_k(x) v0`, which is always stable, and searches it directly; the
//! trace records that level as `ann-nonzero/g-nonzero/repaired`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, LieLikeAlgebra};
use crate::linalg::{joint_eigenspace, kernel, LinalgError, Matrix, Subspace, Vector};
use crate::module::{ModuleError, OrdinaryModule};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("an operator spectrum does not split over the rationals")]
    NonSplitSpectrum,
    #[error("algebra is not solvable")]
    NotSolvable,
    #[error("guaranteed step failed: {0}")]
    TheoremViolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl From<ModuleError> for SolveError {
    fn from(e: ModuleError) -> Self {
        match e {
            ModuleError::Algebra(AlgebraError::NotSolvable) => SolveError::NotSolvable,
            other => SolveError::TheoremViolation(other.to_string()),
        }
    }
}

fn eigen_error(context: &str) -> impl Fn(LinalgError) -> SolveError + '_ {
    move |e| match e {
        LinalgError::NonSplitSpectrum => SolveError::NonSplitSpectrum,
        other => SolveError::TheoremViolation(format!("{context}: {other}")),
    }
}

/// Functionals `phi_k`, `psi_k`, stored by their values on a basis:
/// `phi[k][i] = phi_k(e_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub phi: Vec<Vec<Scalar>>,
    pub psi: Vec<Vec<Scalar>>,
}

impl Weight {
    pub fn zero(s: usize, n: usize) -> Self {
        Weight {
            phi: vec![vec![Scalar::zero(); n]; s],
            psi: vec![vec![Scalar::zero(); n]; s],
        }
    }

    pub fn s(&self) -> usize {
        self.phi.len()
    }

    pub fn dim(&self) -> usize {
        self.phi.first().map_or(0, Vec::len)
    }

    pub fn is_zero(&self) -> bool {
        self.phi.iter().chain(&self.psi).flatten().all(Scalar::is_zero)
    }

    /// Same `phi`, zero `psi`.
    pub fn without_psi(&self) -> Self {
        Weight {
            phi: self.phi.clone(),
            psi: vec![vec![Scalar::zero(); self.dim()]; self.s()],
        }
    }

    /// `phi_k(z)` for a coordinate vector `z`.
    pub fn phi_at(&self, k: usize, z: &Vector) -> Scalar {
        Vector::new(self.phi[k].clone()).dot(z)
    }

    /// `psi_k(z)` for a coordinate vector `z`.
    pub fn psi_at(&self, k: usize, z: &Vector) -> Scalar {
        Vector::new(self.psi[k].clone()).dot(z)
    }
}

/// Which alternative of the weight dichotomy a weight satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dichotomy {
    /// Every `psi_k` is zero.
    PsiZero,
    /// `phi_k = psi_k` for every `k`.
    PhiEqualsPsi,
    /// Both hold, so the whole weight is zero.
    Both,
    /// Neither holds.
    Violation,
}

impl fmt::Display for Dichotomy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dichotomy::PsiZero => "psi-zero",
            Dichotomy::PhiEqualsPsi => "phi-equals-psi",
            Dichotomy::Both => "both",
            Dichotomy::Violation => "violation",
        })
    }
}

pub fn check_dichotomy(w: &Weight) -> Dichotomy {
    let psi_zero = w.psi.iter().flatten().all(Scalar::is_zero);
    let equal = w.phi == w.psi;
    match (psi_zero, equal) {
        (true, true) => Dichotomy::Both,
        (true, false) => Dichotomy::PsiZero,
        (false, true) => Dichotomy::PhiEqualsPsi,
        (false, false) => Dichotomy::Violation,
    }
}

/// How one level of the induction extended the weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "ann-nonzero/g-zero")]
    AnnNonzeroGZero,
    #[serde(rename = "ann-nonzero/g-nonzero")]
    AnnNonzeroGNonzero,
    #[serde(rename = "ann-nonzero/g-nonzero/repaired")]
    AnnNonzeroGNonzeroRepaired,
    #[serde(rename = "case-1")]
    Case1,
    #[serde(rename = "case-2")]
    Case2,
}

impl Branch {
    pub fn tag(self) -> &'static str {
        match self {
            Branch::AnnNonzeroGZero => "ann-nonzero/g-zero",
            Branch::AnnNonzeroGNonzero => "ann-nonzero/g-nonzero",
            Branch::AnnNonzeroGNonzeroRepaired => "ann-nonzero/g-nonzero/repaired",
            Branch::Case1 => "case-1",
            Branch::Case2 => "case-2",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A common weight vector with its weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub v: Vector,
    #[serde(flatten)]
    pub weight: Weight,
    pub dichotomy: Dichotomy,
    /// Branch tags, innermost level first. A `case-1` level contributes two
    /// tags: `case-1` followed by the branch it re-entered.
    pub branch_trace: Vec<Branch>,
}

/// One step of the induction, for the lemma checks.
#[derive(Debug, Clone)]
pub struct Level {
    /// The module over this level's algebra.
    pub module: OrdinaryModule,
    /// Codimension-one ideal and the complementary vector, in this level's coordinates.
    pub ideal: Subspace,
    pub x: Vector,
    /// Weight vector and weight found over the ideal (weight in the ideal's canonical basis).
    pub sub_vector: Vector,
    pub sub_weight: Weight,
    /// Joint weight space of `sub_weight` and the plus annihilator.
    pub weight_space: Subspace,
    pub annihilator: Subspace,
    pub branches: Vec<Branch>,
    pub v: Vector,
    pub weight: Weight,
}

/// Result plus the per-level records, outermost level last.
#[derive(Debug, Clone)]
pub struct DetailedSolve {
    pub result: SolveResult,
    pub levels: Vec<Level>,
}

/// Joint space where `f_k(a) = phi_k(a)` and `g_k(a) = psi_k(a)` for every
/// `a` in `basis`; `w` holds the values on `basis`.
pub fn weight_space(m: &OrdinaryModule, basis: &[Vector], w: &Weight) -> Subspace {
    let vdim = m.vdim();
    let s = m.algebra().s();
    let mut blocks = Vec::with_capacity(2 * s * basis.len());
    for k in 0..s {
        for (p, a) in basis.iter().enumerate() {
            blocks.push(m.f_at(k, a).shift(&w.phi[k][p]));
            blocks.push(m.g_at(k, a).shift(&w.psi[k][p]));
        }
    }
    kernel(&Matrix::vstack(vdim, &blocks))
}

/// Exact check of `f_k(e_i) v = phi_k(e_i) v` and `g_k(e_i) v = psi_k(e_i) v`.
pub fn verify_weight(m: &OrdinaryModule, v: &Vector, w: &Weight) -> bool {
    let (s, n) = (m.algebra().s(), m.algebra().dim());
    if v.len() != m.vdim() || w.s() != s || (s > 0 && w.dim() != n) || v.is_zero() {
        return false;
    }
    (0..s).all(|k| {
        (0..n).all(|i| {
            m.f(k, i).mul_vec(v) == v.scale(&w.phi[k][i])
                && m.g(k, i).mul_vec(v) == v.scale(&w.psi[k][i])
        })
    })
}

/// Reads the weight of a vector known to be a joint eigenvector.
fn weight_of(m: &OrdinaryModule, v: &Vector) -> Option<Weight> {
    let (s, n) = (m.algebra().s(), m.algebra().dim());
    let mut w = Weight::zero(s, n);
    for k in 0..s {
        for i in 0..n {
            w.phi[k][i] = m.f(k, i).mul_vec(v).ratio_to(v)?;
            w.psi[k][i] = m.g(k, i).mul_vec(v).ratio_to(v)?;
        }
    }
    Some(w)
}

/// Finds a common weight vector of `m` over the solvable algebra `alg`.
pub fn solve(alg: &LieLikeAlgebra, m: &OrdinaryModule) -> Result<SolveResult, SolveError> {
    solve_detailed(alg, m).map(|d| d.result)
}

/// [`solve`] together with the record of every induction step.
pub fn solve_detailed(alg: &LieLikeAlgebra, m: &OrdinaryModule) -> Result<DetailedSolve, SolveError> {
    if m.algebra() != alg {
        return Err(SolveError::InvalidInput("module is over a different algebra".into()));
    }
    if m.vdim() == 0 {
        return Err(SolveError::InvalidInput("module is zero-dimensional".into()));
    }
    if let Some(v) = alg.check_algebra().first() {
        return Err(SolveError::InvalidInput(format!("algebra: {v}")));
    }
    if let Some(v) = m.check_module().first() {
        return Err(SolveError::InvalidInput(format!("module: {v}")));
    }
    if !alg.is_solvable().0 {
        return Err(SolveError::NotSolvable);
    }
    let mut levels = Vec::new();
    let (v, weight, branch_trace) = solve_level(m, &mut levels)?;
    let dichotomy = check_dichotomy(&weight);
    if dichotomy == Dichotomy::Violation {
        return Err(SolveError::TheoremViolation(
            "weight satisfies neither psi = 0 nor phi = psi".into(),
        ));
    }
    Ok(DetailedSolve {
        result: SolveResult {
            v,
            weight,
            dichotomy,
            branch_trace,
        },
        levels,
    })
}

type LevelOutput = (Vector, Weight, Vec<Branch>);

fn solve_level(m: &OrdinaryModule, levels: &mut Vec<Level>) -> Result<LevelOutput, SolveError> {
    let alg = m.algebra();
    let (s, n) = (alg.s(), alg.dim());
    if n == 0 {
        return Ok((Vector::basis(m.vdim(), 0), Weight::zero(s, 0), Vec::new()));
    }
    let (ideal, x) = alg.split_codim1().map_err(|e| match e {
        AlgebraError::NotSolvable => SolveError::NotSolvable,
        other => SolveError::TheoremViolation(other.to_string()),
    })?;
    let sub_module = m.restrict(&ideal)?;
    let (sub_vector, sub_weight, mut trace) = solve_level(&sub_module, levels)?;
    let level = extend_weight(m, ideal, x, sub_vector, sub_weight).map_err(|e| match e {
        SolveError::InvalidInput(msg) => SolveError::TheoremViolation(msg),
        other => other,
    })?;
    trace.extend(level.branches.iter().copied());
    let out = (level.v.clone(), level.weight.clone(), trace);
    levels.push(level);
    Ok(out)
}

/// One induction step: extends a weight vector of the ideal to one of the
/// whole algebra.
///
/// `ideal` must be a codimension-one ideal containing every bracket, `x` a
/// vector outside it, and `sub_vector` a nonzero weight vector for the
/// ideal with weight `sub_weight` (values on the canonical basis of
/// `ideal`). [`solve`] feeds this the output of its own recursion; other
/// choices of the inner weight can reach other branches.
pub fn extend_weight(
    m: &OrdinaryModule,
    ideal: Subspace,
    x: Vector,
    sub_vector: Vector,
    sub_weight: Weight,
) -> Result<Level, SolveError> {
    let alg = m.algebra();
    let (s, n) = (alg.s(), alg.dim());
    if ideal.ambient_dim() != n || x.len() != n || ideal.dim() + 1 != n || ideal.contains(&x) {
        return Err(SolveError::InvalidInput("ideal and x do not split the algebra".into()));
    }
    if !alg.bracket_span(&Subspace::full(n)).is_subspace_of(&ideal) {
        return Err(SolveError::InvalidInput("some bracket leaves the ideal".into()));
    }
    if sub_weight.s() != s || (s > 0 && sub_weight.dim() != ideal.dim()) {
        return Err(SolveError::InvalidInput("inner weight has the wrong shape".into()));
    }
    let ideal_basis = ideal.basis_vectors();
    let u = weight_space(m, &ideal_basis, &sub_weight);
    if sub_vector.len() != m.vdim() || sub_vector.is_zero() || !u.contains(&sub_vector) {
        return Err(SolveError::InvalidInput(
            "inner vector is not a weight vector for the ideal".into(),
        ));
    }
    let ann = m.plus_annihilator();
    let fx: Vec<Matrix> = (0..s).map(|k| m.f_at(k, &x)).collect();
    let gx: Vec<Matrix> = (0..s).map(|k| m.g_at(k, &x)).collect();
    let ctx = LevelContext {
        m,
        ideal_basis: &ideal_basis,
        x: &x,
        fx: &fx,
        gx: &gx,
    };

    let mut branches = Vec::new();
    let intersection = u.intersect(&ann).map_err(eigen_error("intersection"))?;
    let (v, extension) = if !intersection.is_zero() {
        let (v, ext, b) = ctx.annihilator_branch(&intersection, &sub_weight)?;
        branches.push(b);
        (v, ext)
    } else if let Some(w_tilde) = ctx.case1_witness(&u) {
        branches.push(Branch::Case1);
        let dropped = sub_weight.without_psi();
        let u_tilde = weight_space(m, &ideal_basis, &dropped);
        let w_space = u_tilde.intersect(&ann).map_err(eigen_error("intersection"))?;
        if !w_space.contains(&w_tilde) {
            return Err(SolveError::TheoremViolation(
                "image of f_h(x) - g_h(x) is not a weight vector in the annihilator".into(),
            ));
        }
        let (v, ext, b) = ctx.annihilator_branch(&w_space, &dropped)?;
        branches.push(b);
        (v, ext)
    } else {
        branches.push(Branch::Case2);
        ctx.case2(&u, &sub_weight)?
    };

    let weight = match extension {
        Extension::Weight(w) => w,
        Extension::Extend { base, phi_x, psi_x } => ctx.assemble(&base, &phi_x, &psi_x)?,
    };
    if !verify_weight(m, &v, &weight) {
        return Err(SolveError::TheoremViolation(format!(
            "branch {} produced a vector that is not a weight vector",
            branches.last().expect("one branch per level")
        )));
    }
    Ok(Level {
        module: m.clone(),
        ideal,
        x,
        sub_vector,
        sub_weight,
        weight_space: u,
        annihilator: ann,
        branches,
        v,
        weight,
    })
}

enum Extension {
    /// Weight over the ideal plus values at `x`.
    Extend {
        base: Weight,
        phi_x: Vec<Scalar>,
        psi_x: Vec<Scalar>,
    },
    /// A weight already expressed on the standard basis.
    Weight(Weight),
}

struct LevelContext<'a> {
    m: &'a OrdinaryModule,
    ideal_basis: &'a [Vector],
    x: &'a Vector,
    fx: &'a [Matrix],
    gx: &'a [Matrix],
}

impl LevelContext<'_> {
    fn annihilator_branch(
        &self,
        space: &Subspace,
        base: &Weight,
    ) -> Result<(Vector, Extension, Branch), SolveError> {
        if let Some(k) = (0..self.fx.len()).find(|&k| !space.is_invariant_under(&self.fx[k])) {
            return Err(SolveError::TheoremViolation(format!(
                "f_{k}(x) does not preserve the weight space inside the annihilator"
            )));
        }
        let (eig_space, lambda) =
            joint_eigenspace(self.fx, space).map_err(eigen_error("eigenvector of f_k(x)"))?;
        let v0 = eig_space.basis_vector(0);
        let images: Vec<Vector> = self.gx.iter().map(|g| g.mul_vec(&v0)).collect();
        let Some(h0) = images.iter().position(|y| !y.is_zero()) else {
            let ext = Extension::Extend {
                base: base.clone(),
                phi_x: lambda,
                psi_x: vec![Scalar::zero(); self.fx.len()],
            };
            return Ok((v0, ext, Branch::AnnNonzeroGZero));
        };
        let (s, n) = (self.m.algebra().s(), self.m.algebra().dim());
        let candidate = images[h0].clone();
        let zero = Weight::zero(s, n);
        if verify_weight(self.m, &candidate, &zero) {
            return Ok((candidate, Extension::Weight(zero), Branch::AnnNonzeroGNonzero));
        }

        // v0 and its g_k(x) images span a submodule; search it directly.
        let stable = Subspace::span(self.m.vdim(), std::iter::once(&v0).chain(images.iter()));
        if !self.m.is_submodule(&stable) {
            return Err(SolveError::TheoremViolation(
                "span of v0 and g_k(x) v0 is not a submodule".into(),
            ));
        }
        let ops: Vec<Matrix> = self.m.all_operators().cloned().collect();
        let (found, _) =
            joint_eigenspace(&ops, &stable).map_err(eigen_error("weight vector in span of v0, g_k(x) v0"))?;
        let v = found.basis_vector(0);
        let w = weight_of(self.m, &v).ok_or_else(|| {
            SolveError::TheoremViolation("joint eigenvector is not a weight vector".into())
        })?;
        Ok((v, Extension::Weight(w), Branch::AnnNonzeroGNonzeroRepaired))
    }

    /// First `(f_h(x) - g_h(x)) w` that is nonzero, `h` ascending then `w`
    /// over the canonical basis of `u`.
    fn case1_witness(&self, u: &Subspace) -> Option<Vector> {
        let basis = u.basis_vectors();
        for h in 0..self.fx.len() {
            let diff = self.fx[h].sub(&self.gx[h]);
            for w in &basis {
                let image = diff.mul_vec(w);
                if !image.is_zero() {
                    return Some(image);
                }
            }
        }
        None
    }

    fn case2(&self, u: &Subspace, base: &Weight) -> Result<(Vector, Extension), SolveError> {
        for (k, (f, g)) in self.fx.iter().zip(self.gx).enumerate() {
            if !u.is_invariant_under(f) || !u.is_invariant_under(g) {
                return Err(SolveError::TheoremViolation(format!(
                    "f_{k}(x) or g_{k}(x) does not preserve the weight space"
                )));
            }
        }
        let (u_lambda, lambda) =
            joint_eigenspace(self.fx, u).map_err(eigen_error("eigenspace of f_k(x)"))?;
        if let Some(k) = (0..self.gx.len()).find(|&k| !u_lambda.is_invariant_under(&self.gx[k])) {
            return Err(SolveError::TheoremViolation(format!(
                "g_{k}(x) does not preserve the joint eigenspace of the f_k(x)"
            )));
        }
        let (space, mu) =
            joint_eigenspace(self.gx, &u_lambda).map_err(eigen_error("eigenvector of g_k(x)"))?;
        let ext = Extension::Extend {
            base: base.clone(),
            phi_x: lambda,
            psi_x: mu,
        };
        Ok((space.basis_vector(0), ext))
    }

    /// Turns values on the basis `[ideal basis, x]` into values on `e_1..e_n`.
    fn assemble(
        &self,
        base: &Weight,
        phi_x: &[Scalar],
        psi_x: &[Scalar],
    ) -> Result<Weight, SolveError> {
        let n = self.x.len();
        let mut columns = self.ideal_basis.to_vec();
        columns.push(self.x.clone());
        let inv = Matrix::from_columns(n, &columns)
            .inverse()
            .map_err(|_| SolveError::TheoremViolation("ideal and x do not span the algebra".into()))?;
        let convert = |values: Vec<Scalar>| -> Vec<Scalar> {
            let r = Vector::new(values);
            (0..n).map(|i| r.dot(&inv.column(i))).collect()
        };
        let s = phi_x.len();
        let mut w = Weight::zero(s, n);
        for k in 0..s {
            let mut phi = base.phi[k].clone();
            phi.push(phi_x[k].clone());
            w.phi[k] = convert(phi);
            let mut psi = base.psi[k].clone();
            psi.push(psi_x[k].clone());
            w.psi[k] = convert(psi);
        }
        Ok(w)
    }
}

/// Leibniz specialization (one bracket).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeibnizWeight {
    pub v: Vector,
    pub phi: Vec<Scalar>,
    pub psi: Vec<Scalar>,
}

impl LeibnizWeight {
    /// `psi = phi` or `psi = 0`.
    pub fn is_phi_phi_or_phi_zero(&self) -> bool {
        self.psi == self.phi || self.psi.iter().all(Scalar::is_zero)
    }
}

/// [`solve`] for a single bracket, returning plain functionals.
pub fn solve_leibniz(alg: &LieLikeAlgebra, m: &OrdinaryModule) -> Result<LeibnizWeight, SolveError> {
    if alg.s() != 1 {
        return Err(SolveError::InvalidInput(format!(
            "expected one bracket, found {}",
            alg.s()
        )));
    }
    let r = solve(alg, m)?;
    let Weight { mut phi, mut psi } = r.weight;
    Ok(LeibnizWeight {
        v: r.v,
        phi: phi.pop().expect("one bracket"),
        psi: psi.pop().expect("one bracket"),
    })
}

/// Convenience for callers holding the algebra behind an `Arc`.
pub fn solve_module(m: &OrdinaryModule) -> Result<SolveResult, SolveError> {
    let alg: Arc<LieLikeAlgebra> = Arc::clone(m.algebra_arc());
    solve(&alg, m)
}
