//! Characteristic polynomials, rational spectra and joint eigenvectors.
//!
//! Everything here is exact. The characteristic polynomial is computed with
//! the division-free Berkowitz recurrence on an integer rescaling of the
//! matrix, and rational eigenvalues are recovered as integer roots of that
//! monic integer polynomial.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{kernel, restrict_operator, LinalgError, Matrix, Subspace, Vector};
use crate::scalar::Scalar;

/// Rational part of a spectrum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    /// Distinct rational eigenvalues in ascending order with algebraic multiplicity.
    pub eigenvalues: Vec<(Scalar, usize)>,
    /// True when the multiplicities account for the whole dimension.
    pub fully_rational: bool,
}

impl Spectrum {
    pub fn values(&self) -> impl Iterator<Item = &Scalar> {
        self.eigenvalues.iter().map(|(v, _)| v)
    }
}

fn check_square(m: &Matrix) -> Result<(), LinalgError> {
    if m.is_square() {
        Ok(())
    } else {
        Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

/// Least common multiple of all entry denominators.
fn common_denominator(m: &Matrix) -> BigInt {
    let mut d = BigInt::one();
    for i in 0..m.rows() {
        for x in m.row(i) {
            if !x.is_integer() {
                d = d.lcm(&x.denom());
            }
        }
    }
    d
}

/// Coefficients (highest degree first) of `det(tI - a)` for an integer matrix.
fn berkowitz(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let mut poly = vec![BigInt::one()];
    for r in 0..n {
        // Leading (r+1)x(r+1) block = [[A_r, C], [R, a_rr]].
        let mut col = Vec::with_capacity(r + 2);
        col.push(BigInt::one());
        col.push(-&a[r][r]);
        let mut v: Vec<BigInt> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let rv: BigInt = (0..r).map(|j| &a[r][j] * &v[j]).sum();
            col.push(-rv);
            v = (0..r)
                .map(|i| (0..r).map(|j| &a[i][j] * &v[j]).sum())
                .collect();
        }
        let mut next = vec![BigInt::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, p) in poly.iter().enumerate().take(i + 1) {
                *slot += &col[i - j] * p;
            }
        }
        poly = next;
    }
    poly
}

/// Integer rescaling `d * m` together with `d`.
fn integer_form(m: &Matrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let d = common_denominator(m);
    let rows = (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| x.numer() * (&d / x.denom()))
                .collect()
        })
        .collect();
    (rows, d)
}

/// Characteristic polynomial `det(tI - m)`, coefficients lowest degree first.
pub fn char_poly(m: &Matrix) -> Result<Vec<Scalar>, LinalgError> {
    check_square(m)?;
    let n = m.rows();
    let (int, d) = integer_form(m);
    let mut coeffs = berkowitz(&int);
    coeffs.reverse();
    // p_m(t) = d^{-n} p_{dm}(d t), so coefficient i picks up d^{i-n}.
    Ok(coeffs
        .into_iter()
        .enumerate()
        .map(|(i, c)| Scalar::from_big(num_rational::BigRational::new(c, num_traits::pow(d.clone(), n - i))))
        .collect())
}

/// Evaluates a polynomial given lowest degree first.
pub fn eval_poly(coeffs: &[Scalar], t: &Scalar) -> Scalar {
    coeffs.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * t) + c)
}

fn horner(poly: &[BigInt], t: &BigInt) -> BigInt {
    poly.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c)
}

/// Divides `poly` (lowest first) by `(t - r)`, assuming `r` is a root.
fn deflate(poly: &[BigInt], r: &BigInt) -> Vec<BigInt> {
    let deg = poly.len() - 1;
    let mut out = vec![BigInt::zero(); deg];
    let mut carry = BigInt::zero();
    for i in (1..=deg).rev() {
        carry = &poly[i] + carry * r;
        out[i - 1] = carry.clone();
    }
    out
}

/// All rational eigenvalues of `m` with algebraic multiplicities.
pub fn rational_eigenvalues(m: &Matrix) -> Result<Spectrum, LinalgError> {
    check_square(m)?;
    let n = m.rows();
    let (int, d) = integer_form(m);
    let mut poly = berkowitz(&int);
    poly.reverse();

    let mut roots: Vec<(BigInt, usize)> = Vec::new();
    let zeros = poly.iter().take_while(|c| c.is_zero()).count().min(n);
    if zeros > 0 {
        roots.push((BigInt::zero(), zeros));
        poly.drain(..zeros);
    }

    if poly.len() > 1 {
        // Integer roots of a monic integer polynomial divide the constant term
        // and are bounded by the row-sum norm of the integer matrix.
        let norm: BigInt = int
            .iter()
            .map(|row| row.iter().map(|x| x.abs()).sum::<BigInt>())
            .max()
            .unwrap_or_default();
        let cauchy = BigInt::one() + poly.iter().map(|c| c.abs()).max().unwrap_or_default();
        let bound = norm.min(cauchy);
        let c0 = poly[0].abs();
        let bound = bound.min(c0.clone());
        let limit = bound
            .to_u64()
            .expect("eigenvalue search bound exceeds u64; matrix entries are far beyond desk scale");
        let mut candidates = Vec::new();
        for t in 1..=limit {
            let t = BigInt::from(t);
            if (&c0 % &t).is_zero() {
                candidates.push(-&t);
                candidates.push(t);
            }
        }
        candidates.sort();
        for r in candidates {
            let mut mult = 0;
            while poly.len() > 1 && horner(&poly, &r).is_zero() {
                poly = deflate(&poly, &r);
                mult += 1;
            }
            if mult > 0 {
                roots.push((r, mult));
            }
        }
    }

    roots.sort();
    let total: usize = roots.iter().map(|(_, k)| k).sum();
    let eigenvalues = roots
        .into_iter()
        .map(|(r, k)| (Scalar::from_big(num_rational::BigRational::new(r, d.clone())), k))
        .collect();
    Ok(Spectrum {
        eigenvalues,
        fully_rational: total == n,
    })
}

/// `ker(m - lam I)`.
pub fn eigenspace(m: &Matrix, lam: &Scalar) -> Result<Subspace, LinalgError> {
    check_square(m)?;
    Ok(kernel(&m.shift(lam)))
}

/// Joint eigenspace of `family` inside `within`.
///
/// Operators are processed in order; for each one the rational eigenvalues of
/// its restriction to `within` are tried in ascending order, backtracking if a
/// later operator has no eigenvector in what is left. The returned subspace is
/// the full joint eigenspace for the selected eigenvalue tuple.
pub fn joint_eigenspace(
    family: &[Matrix],
    within: &Subspace,
) -> Result<(Subspace, Vec<Scalar>), LinalgError> {
    let n = within.ambient_dim();
    for m in family {
        check_square(m)?;
        if m.rows() != n {
            return Err(LinalgError::DimensionMismatch {
                expected: n,
                found: m.rows(),
            });
        }
    }
    if within.is_zero() {
        return Err(LinalgError::EmptySubspace);
    }
    let mut spectra = Vec::with_capacity(family.len());
    for m in family {
        let restricted = restrict_operator(m, within)?;
        spectra.push(rational_eigenvalues(&restricted)?);
    }

    fn search(
        family: &[Matrix],
        spectra: &[Spectrum],
        idx: usize,
        current: Subspace,
        chosen: &mut Vec<Scalar>,
    ) -> Option<Subspace> {
        if idx == family.len() {
            return Some(current);
        }
        for lam in spectra[idx].values() {
            let eig = kernel(&family[idx].shift(lam));
            let next = current.intersect(&eig).expect("same ambient");
            if next.is_zero() {
                continue;
            }
            chosen.push(lam.clone());
            if let Some(found) = search(family, spectra, idx + 1, next, chosen) {
                return Some(found);
            }
            chosen.pop();
        }
        None
    }

    let mut chosen = Vec::with_capacity(family.len());
    match search(family, &spectra, 0, within.clone(), &mut chosen) {
        Some(space) => Ok((space, chosen)),
        None if spectra.iter().any(|s| !s.fully_rational) => Err(LinalgError::NonSplitSpectrum),
        None => Err(LinalgError::NoJointEigenvector),
    }
}

/// A common eigenvector of `family` in `within` and its eigenvalues.
///
/// The vector is the first canonical basis vector of [`joint_eigenspace`].
pub fn joint_eigenvector(
    family: &[Matrix],
    within: &Subspace,
) -> Result<(Vector, Vec<Scalar>), LinalgError> {
    let (space, eigs) = joint_eigenspace(family, within)?;
    Ok((space.basis_vector(0), eigs))
}
