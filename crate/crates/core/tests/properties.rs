use std::sync::Arc;

use proptest::prelude::*;

use lielike_core::generate::{generate, Construction, GeneratorSpec};
use lielike_core::linalg::{char_poly, eval_poly, joint_eigenvector, kernel, rational_eigenvalues, Matrix, Subspace, Vector};
use lielike_core::solver::solve_leibniz;
use lielike_core::verify::run_verify;
use lielike_core::{solve, verify_weight, InstanceFile, LieLikeAlgebra, OrdinaryModule, Scalar};

fn matrix(rows: usize, cols: usize, entries: &[i64]) -> Matrix {
    Matrix::from_fn(rows, cols, |i, j| Scalar::from_integer(entries[i * cols + j]))
}

fn int_matrix(max: usize) -> impl Strategy<Value = Matrix> {
    (0..=max, 0..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(-3i64..=3, r * c).prop_map(move |e| matrix(r, c, &e))
    })
}

fn square(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max).prop_flat_map(|n| prop::collection::vec(-3i64..=3, n * n).prop_map(move |e| matrix(n, n, &e)))
}

/// Two sets of spanning vectors in the same ambient space.
fn subspace_pair() -> impl Strategy<Value = (Subspace, Subspace)> {
    (1usize..=5).prop_flat_map(|n| {
        let vecs = move || {
            prop::collection::vec(prop::collection::vec(-2i64..=2, n), 0..=n)
                .prop_map(move |vs| Subspace::span(n, &vs.iter().map(|v| Vector::from_ints(v)).collect::<Vec<_>>()))
        };
        (vecs(), vecs())
    })
}

fn construction() -> impl Strategy<Value = Construction> {
    prop::sample::select(Construction::ALL.to_vec())
}

fn instance() -> impl Strategy<Value = InstanceFile> {
    (construction(), 1usize..=5, 1usize..=3, any::<u64>())
        .prop_map(|(c, dim, s, seed)| generate(&GeneratorSpec::new(c, dim, s, seed)).expect("valid spec"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_plus_nullity(m in int_matrix(5)) {
        prop_assert_eq!(m.rank() + kernel(&m).dim(), m.cols());
        for v in kernel(&m).basis_vectors() {
            prop_assert!(m.mul_vec(&v).is_zero());
        }
    }

    #[test]
    fn rref_is_idempotent(m in int_matrix(5)) {
        let (r, pivots) = m.rref();
        let (r2, pivots2) = r.rref();
        prop_assert_eq!(r, r2);
        prop_assert_eq!(pivots, pivots2);
    }

    #[test]
    fn subspace_canonical_form((a, _) in subspace_pair()) {
        let again = Subspace::span(a.ambient_dim(), &a.basis_vectors());
        prop_assert_eq!(&again, &a);
        for v in a.basis_vectors() {
            prop_assert!(a.contains(&v));
        }
    }

    #[test]
    fn intersection_and_sum_dimensions((a, b) in subspace_pair()) {
        let meet = a.intersect(&b).unwrap();
        let join = a.sum(&b).unwrap();
        prop_assert_eq!(meet.dim() + join.dim(), a.dim() + b.dim());
        prop_assert!(meet.is_subspace_of(&a) && meet.is_subspace_of(&b));
        prop_assert!(a.is_subspace_of(&join) && b.is_subspace_of(&join));
    }

    #[test]
    fn eigenvalues_are_roots(m in square(4)) {
        let p = char_poly(&m).unwrap();
        prop_assert_eq!(p.len(), m.rows() + 1);
        let spectrum = rational_eigenvalues(&m).unwrap();
        let total: usize = spectrum.eigenvalues.iter().map(|(_, mult)| mult).sum();
        prop_assert!(total <= m.rows());
        prop_assert_eq!(spectrum.fully_rational, total == m.rows());
        for (lam, _) in &spectrum.eigenvalues {
            prop_assert!(eval_poly(&p, lam).is_zero());
            prop_assert!(!kernel(&m.shift(lam)).is_zero());
        }
    }

    /// Polynomials in one triangular matrix commute and share eigenvectors.
    #[test]
    fn joint_eigenvector_is_exact(
        n in 1usize..=4,
        entries in prop::collection::vec(-3i64..=3, 16),
        coeffs in prop::collection::vec(-2i64..=2, 3),
    ) {
        let t = Matrix::from_fn(n, n, |i, j| if i <= j { Scalar::from_integer(entries[i * 4 + j]) } else { Scalar::zero() });
        let mut p = Matrix::scalar(n, &Scalar::from_integer(coeffs[0]));
        p.axpy(&Scalar::from_integer(coeffs[1]), &t);
        p.axpy(&Scalar::from_integer(coeffs[2]), &t.mul(&t));
        let family = vec![t, p];
        let (v, eigs) = joint_eigenvector(&family, &Subspace::full(n)).unwrap();
        prop_assert!(!v.is_zero());
        for (m, lam) in family.iter().zip(&eigs) {
            prop_assert_eq!(m.mul_vec(&v), v.scale(lam));
        }
    }

    #[test]
    fn subspaces_over_the_square_are_ideals(inst in instance(), extra in prop::collection::vec(prop::collection::vec(-2i64..=2, 5), 0..3)) {
        let alg = &inst.algebra;
        let n = alg.dim();
        let d2 = alg.bracket_span(&Subspace::full(n));
        let mut vs = d2.basis_vectors();
        vs.extend(extra.iter().map(|v| Vector::from_ints(&v[..n])));
        prop_assert!(alg.is_ideal(&Subspace::span(n, &vs)));
    }

    #[test]
    fn split_and_restriction(inst in instance()) {
        let alg = &inst.algebra;
        let (ideal, x) = alg.split_codim1().unwrap();
        prop_assert_eq!(ideal.dim() + 1, alg.dim());
        prop_assert!(!ideal.contains(&x));
        prop_assert!(alg.bracket_span(&Subspace::full(alg.dim())).is_subspace_of(&ideal));
        let sub = alg.restrict(&ideal).unwrap();
        prop_assert!(sub.check_algebra().is_empty());
        prop_assert!(sub.is_solvable().0);
        let series = alg.derived_series();
        prop_assert!(series.windows(2).all(|w| w[1].is_subspace_of(&w[0])));
    }

    #[test]
    fn adjoint_and_annihilator(inst in instance()) {
        let adj = OrdinaryModule::adjoint(Arc::clone(&inst.algebra));
        prop_assert!(adj.check_module().is_empty());
        prop_assert!(adj.check_derived_identities().passed());
        for m in [&adj, &inst.module] {
            prop_assert!(m.is_submodule(&m.plus_annihilator()));
        }
    }

    #[test]
    fn basis_change_and_sum_preserve_modules(inst in instance(), seed in any::<u64>()) {
        let m = &inst.module;
        let other = OrdinaryModule::adjoint(Arc::clone(&inst.algebra));
        let sum = m.direct_sum(&other).unwrap();
        prop_assert!(sum.check_module().is_empty());
        // a unipotent upper triangular change of basis
        let n = sum.vdim();
        let p = Matrix::from_fn(n, n, |i, j| {
            if i == j { Scalar::one() } else if i < j { Scalar::from_integer(((seed >> ((i * n + j) % 60)) & 3) as i64 - 1) } else { Scalar::zero() }
        });
        let changed = sum.change_basis(&p).unwrap();
        prop_assert!(changed.check_module().is_empty());
        let r = solve(&inst.algebra, &changed).unwrap();
        prop_assert!(verify_weight(&changed, &r.v, &r.weight));
    }

    #[test]
    fn transformed_algebra_keeps_adjoint(inst in instance(), seed in any::<u64>()) {
        let n = inst.algebra.dim();
        let p = Matrix::from_fn(n, n, |i, j| {
            if i == j { Scalar::one() } else if j < i { Scalar::from_integer(((seed >> ((i * n + j) % 60)) & 3) as i64 - 1) } else { Scalar::zero() }
        });
        let moved = Arc::new(inst.algebra.transform(&p).unwrap());
        prop_assert!(moved.check_algebra().is_empty());
        let adj = OrdinaryModule::adjoint(Arc::clone(&inst.algebra));
        let transported = adj.transport_algebra_basis(&p, Arc::clone(&moved)).unwrap().change_basis(&p).unwrap();
        prop_assert_eq!(transported, OrdinaryModule::adjoint(moved));
    }

    #[test]
    fn solve_is_sound_and_deterministic(inst in instance()) {
        let a = solve(&inst.algebra, &inst.module).unwrap();
        let b = solve(&inst.algebra, &inst.module).unwrap();
        prop_assert!(verify_weight(&inst.module, &a.v, &a.weight));
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn json_round_trip(inst in instance()) {
        let text = inst.to_json_string();
        let back = InstanceFile::parse(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        let alg: LieLikeAlgebra = serde_json::from_str(&serde_json::to_string(&*inst.algebra).unwrap()).unwrap();
        prop_assert_eq!(&alg, &*inst.algebra);
        let r = solve(&inst.algebra, &inst.module).unwrap();
        let r2: lielike_core::SolveResult = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(r, r2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn every_generated_instance_verifies(c in construction(), dim in 0usize..=6, s in 1usize..=3, seed in any::<u64>()) {
        let inst = generate(&GeneratorSpec::new(c, dim, s, seed)).unwrap();
        let report = run_verify(&inst);
        prop_assert_eq!(report.exit_code, 0, "{}", report);
    }
}

/// Module axioms for one bracket, written out with `f`, `g` only:
/// `g(x)g(y) = g(x)f(y)`, `f(<x,y>) = [f(x), f(y)]`, `g(<x,y>) = [g(x), f(y)]`.
fn leibniz_module_ok(m: &OrdinaryModule) -> bool {
    let alg = m.algebra();
    let n = alg.dim();
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (Vector::basis(n, i), Vector::basis(n, j));
            let xy = alg.bracket(&x, &y, 0).unwrap();
            if m.g(0, i).mul(m.g(0, j)) != m.g(0, i).mul(m.f(0, j))
                || m.f_at(0, &xy) != m.f(0, i).commutator(m.f(0, j))
                || m.g_at(0, &xy) != m.g(0, i).commutator(m.f(0, j))
            {
                return false;
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn one_bracket_axioms_reduce_to_leibniz_modules(
        c in construction(),
        dim in 1usize..=4,
        seed in any::<u64>(),
        left in any::<bool>(),
        pos in any::<(usize, usize, usize)>(),
        delta in prop::sample::select(vec![-1i64, 1]),
    ) {
        let inst = generate(&GeneratorSpec::new(c, dim, 1, seed)).unwrap();
        let m = inst.module.clone();
        prop_assert_eq!(m.check_module().is_empty(), leibniz_module_ok(&m));
        let (i, r, col) = (pos.0 % dim, pos.1 % m.vdim(), pos.2 % m.vdim());
        let mut op = if left { m.g(0, i) } else { m.f(0, i) }.clone();
        op.set(r, col, op.get(r, col) + &Scalar::from_integer(delta));
        let perturbed = m.with_operator(left, 0, i, op);
        prop_assert_eq!(perturbed.check_module().is_empty(), leibniz_module_ok(&perturbed));
        if inst.module.vdim() > 0 {
            let w = solve_leibniz(&inst.algebra, &inst.module).unwrap();
            prop_assert!(w.is_phi_phi_or_phi_zero());
        }
    }
}
