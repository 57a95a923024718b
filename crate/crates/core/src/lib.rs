//! Exact computations for Lie-like algebras (bracket families indexed by a
//! finite set) and their ordinary modules, including a constructive common
//! weight vector search for solvable algebras.

pub mod algebra;
pub mod fixtures;
pub mod generate;
pub mod io;
pub mod lemmas;
pub mod linalg;
pub mod module;
pub mod oracle;
pub mod scalar;
pub mod solver;
pub mod verify;

pub use algebra::{AlgebraError, AlgebraViolation, Identity, LieLikeAlgebra, Triviality};
pub use linalg::{LinalgError, Matrix, Subspace, Vector};
pub use module::{Axiom, ModuleError, ModuleViolation, OrdinaryModule};
pub use scalar::Scalar;
pub use io::InstanceFile;
pub use solver::{check_dichotomy, solve, verify_weight, Branch, Dichotomy, SolveError, SolveResult, Weight};
