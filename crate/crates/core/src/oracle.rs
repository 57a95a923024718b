//! Brute-force enumeration of joint weight spaces.
//!
//! Independent of the solver: every operator `f_k(e_i)` and `g_k(e_i)` is
//! diagonalized against the running intersection, one operator at a time,
//! keeping every nonzero branch.

use crate::linalg::{kernel, rational_eigenvalues, Subspace};
use crate::module::OrdinaryModule;
use crate::scalar::Scalar;
use crate::solver::{SolveError, Weight};

/// A joint weight space together with its weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleEntry {
    pub space: Subspace,
    pub weight: Weight,
}

/// All nonzero joint weight spaces of the module.
///
/// Operators are processed as all `f_k(e_i)` in `(k, i)` order, then all
/// `g_k(e_i)`. Entries come out ordered by their eigenvalue tuples in that
/// operator order.
pub fn oracle_solve(m: &OrdinaryModule) -> Result<Vec<OracleEntry>, SolveError> {
    let (s, n) = (m.algebra().s(), m.algebra().dim());
    let mut states: Vec<(Subspace, Vec<Scalar>)> = vec![(Subspace::full(m.vdim()), Vec::new())];
    for op in m.all_operators() {
        let spectrum = rational_eigenvalues(op).map_err(|e| SolveError::InvalidInput(e.to_string()))?;
        if !spectrum.fully_rational {
            return Err(SolveError::NonSplitSpectrum);
        }
        let eigenspaces: Vec<(Scalar, Subspace)> = spectrum
            .eigenvalues
            .iter()
            .map(|(lam, _)| (lam.clone(), kernel(&op.shift(lam))))
            .collect();
        let mut next = Vec::new();
        for (space, eigs) in &states {
            for (lam, eig) in &eigenspaces {
                let meet = space.intersect(eig).expect("same ambient dimension");
                if !meet.is_zero() {
                    let mut e = eigs.clone();
                    e.push(lam.clone());
                    next.push((meet, e));
                }
            }
        }
        states = next;
        if states.is_empty() {
            break;
        }
    }
    Ok(states
        .into_iter()
        .map(|(space, eigs)| {
            let mut weight = Weight::zero(s, n);
            for (idx, lam) in eigs.into_iter().enumerate() {
                let (block, rest) = (idx / (s * n), idx % (s * n));
                let (k, i) = (rest / n, rest % n);
                if block == 0 {
                    weight.phi[k][i] = lam;
                } else {
                    weight.psi[k][i] = lam;
                }
            }
            OracleEntry { space, weight }
        })
        .collect())
}

/// Whether `(v, weight)` lies in one of the oracle's entries with the same weight.
pub fn agrees_with_oracle(entries: &[OracleEntry], v: &crate::linalg::Vector, weight: &Weight) -> bool {
    entries.iter().any(|e| &e.weight == weight && e.space.contains(v))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fixtures::{leib2, nt3};
    use crate::linalg::{Matrix, Vector};
    use crate::{LieLikeAlgebra, OrdinaryModule};

    fn e(n: usize, i: usize) -> Vector {
        Vector::basis(n, i)
    }

    #[test]
    fn zero_module_has_one_entry() {
        let m = OrdinaryModule::zero(Arc::new(leib2()), 2);
        assert_eq!(
            oracle_solve(&m).unwrap(),
            vec![OracleEntry {
                space: Subspace::full(2),
                weight: Weight::zero(1, 2)
            }]
        );
    }

    #[test]
    fn adjoint_examples() {
        let m = OrdinaryModule::adjoint(Arc::new(leib2()));
        assert_eq!(
            oracle_solve(&m).unwrap(),
            vec![OracleEntry {
                space: Subspace::span(2, &[e(2, 0)]),
                weight: Weight::zero(1, 2)
            }]
        );
        let m = OrdinaryModule::adjoint(Arc::new(nt3()));
        assert_eq!(
            oracle_solve(&m).unwrap(),
            vec![OracleEntry {
                space: Subspace::span(3, &[e(3, 0), e(3, 1)]),
                weight: Weight::zero(2, 3)
            }]
        );
    }

    #[test]
    fn distinct_weights_are_separated() {
        // One-dimensional abelian algebra acting diagonally.
        let alg = Arc::new(LieLikeAlgebra::abelian(1, 1));
        let d = Matrix::from_ints(&[&[1, 0], &[0, 2]]);
        let m = OrdinaryModule::new(alg, 2, vec![vec![d.clone()]], vec![vec![d]]).unwrap();
        let entries = oracle_solve(&m).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].space, Subspace::span(2, &[e(2, 0)]));
        assert_eq!(entries[1].weight.psi, vec![vec![Scalar::from_integer(2)]]);
        assert!(agrees_with_oracle(&entries, &e(2, 1), &entries[1].weight));
        assert!(!agrees_with_oracle(&entries, &e(2, 1), &entries[0].weight));
    }

    #[test]
    fn rotation_is_non_split() {
        let alg = Arc::new(LieLikeAlgebra::abelian(1, 1));
        let rot = Matrix::from_ints(&[&[0, -1], &[1, 0]]);
        let m = OrdinaryModule::new(alg, 2, vec![vec![rot.clone()]], vec![vec![rot]]).unwrap();
        assert_eq!(oracle_solve(&m), Err(SolveError::NonSplitSpectrum));
    }
}
