//! Small hand-built algebras used throughout the tests and the CLI docs.

use std::sync::Arc;

use crate::algebra::LieLikeAlgebra;
use crate::linalg::{Matrix, Vector};
use crate::module::OrdinaryModule;
use crate::scalar::Scalar;

fn e(n: usize, i: usize) -> Vector {
    Vector::basis(n, i)
}

fn checked(alg: LieLikeAlgebra) -> LieLikeAlgebra {
    alg.validate()
        .unwrap_or_else(|v| panic!("fixture violates the identities: {}", v[0]))
}

/// Two-dimensional Leibniz algebra with the single bracket `<e2, e2> = e1`.
pub fn leib2() -> LieLikeAlgebra {
    checked(LieLikeAlgebra::from_brackets(2, 1, [(0, 1, 1, e(2, 0))]).unwrap())
}

/// `leib2` with a second bracket equal to twice the first.
pub fn bundle2() -> LieLikeAlgebra {
    checked(
        LieLikeAlgebra::from_brackets(
            2,
            2,
            [(0, 1, 1, e(2, 0)), (1, 1, 1, e(2, 0).scale(&Scalar::from_integer(2)))],
        )
        .unwrap(),
    )
}

/// Three dimensions, two brackets: `<e3, e3>_0 = e1`, `<e3, e3>_1 = e2`.
/// The brackets are not proportional, so the algebra is non-trivial.
pub fn nt3() -> LieLikeAlgebra {
    checked(LieLikeAlgebra::from_brackets(3, 2, [(0, 2, 2, e(3, 0)), (1, 2, 2, e(3, 1))]).unwrap())
}

/// The two-dimensional non-abelian Lie algebra `<e1, e2> = e1`, with bracket
/// `k` scaled by `scales[k]`.
pub fn scaled_affine2(scales: &[i64]) -> LieLikeAlgebra {
    let mut brackets = Vec::new();
    for (k, &c) in scales.iter().enumerate() {
        let c = Scalar::from_integer(c);
        brackets.push((k, 0, 1, e(2, 0).scale(&c)));
        brackets.push((k, 1, 0, e(2, 0).scale(&-c)));
    }
    checked(LieLikeAlgebra::from_brackets(2, scales.len(), brackets).unwrap())
}

/// A four-dimensional module over the one-dimensional abelian algebra with
/// two brackets, where a joint eigenvector `v0` of the `f_k(x)` inside the
/// plus annihilator has `g_1(x) v0 != 0` and `g_1(x) v0` is a zero weight
/// vector.
///
/// With basis `y, z, w, u`: `f_0 = g_0 = 0`, `f_1: y -> z, u -> w` and
/// `g_1: y -> u, z -> w, u -> w`.
pub fn left_image_module() -> OrdinaryModule {
    let alg = Arc::new(LieLikeAlgebra::abelian(1, 2));
    let f1 = Matrix::from_ints(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 0, 0]]);
    let g1 = Matrix::from_ints(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 1, 0, 1], &[1, 0, 0, 0]]);
    let zero = Matrix::zeros(4, 4);
    let m = OrdinaryModule::new(alg, 4, vec![vec![zero.clone()], vec![f1]], vec![vec![zero], vec![g1]])
        .expect("shapes agree");
    assert!(m.check_module().is_empty(), "fixture violates the module axioms");
    m
}

/// A two-dimensional module over the two-dimensional abelian algebra with
/// one bracket: `f(e1) = f(e2) = I`, `g(e1) = diag(1, 0)` and
/// `g(e2)` mapping `e1 -> e1 + e2`, `e2 -> 0`.
///
/// Over the ideal `span{e1}` the vector `e1` has weight `phi = psi = 1`,
/// which leads the induction step into case 1. The recursion in `solve`
/// finds the other weight (`psi = 0`, vector `e2`) instead.
pub fn case1_module() -> OrdinaryModule {
    let alg = Arc::new(LieLikeAlgebra::abelian(2, 1));
    let id = Matrix::identity(2);
    let g1 = Matrix::from_ints(&[&[1, 0], &[0, 0]]);
    let g2 = Matrix::from_ints(&[&[1, 0], &[1, 0]]);
    let m = OrdinaryModule::new(alg, 2, vec![vec![id.clone(), id]], vec![vec![g1, g2]]).expect("shapes agree");
    assert!(m.check_module().is_empty(), "fixture violates the module axioms");
    m
}
