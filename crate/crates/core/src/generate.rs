//! Seeded generation of valid solvable instances.
//!
//! Every construction keeps all operator spectra rational, so the solver
//! never needs irrational eigenvalues on generated input.
//!
//! The graded-nilpotent family splits the basis as `V1 + V2` and only allows
//! brackets `<V2, V2>_k` with values in `V1`. Any bracket with an argument in
//! `V1` vanishes, and a bracket of two `V2` vectors lands in `V1`, so every
//! nested bracket `<<x, y>_k, z>_h` and `<x, <y, z>_h>_k` is zero. Both
//! identities then hold termwise.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::algebra::LieLikeAlgebra;
use crate::io::InstanceFile;
use crate::linalg::{Matrix, Vector};
use crate::module::OrdinaryModule;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    Abelian,
    ScaledLeibnizBundle,
    GradedNilpotent,
    DirectSum,
    BasisChanged,
}

impl Construction {
    pub const ALL: [Construction; 5] = [
        Construction::Abelian,
        Construction::ScaledLeibnizBundle,
        Construction::GradedNilpotent,
        Construction::DirectSum,
        Construction::BasisChanged,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Construction::Abelian => "abelian",
            Construction::ScaledLeibnizBundle => "scaled-leibniz-bundle",
            Construction::GradedNilpotent => "graded-nilpotent",
            Construction::DirectSum => "direct-sum",
            Construction::BasisChanged => "basis-changed",
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown construction {0:?}")]
pub struct UnknownConstruction(String);

impl FromStr for Construction {
    type Err = UnknownConstruction;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Construction::ALL
            .into_iter()
            .find(|c| c.tag() == s)
            .ok_or_else(|| UnknownConstruction(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("s must be at least 1")]
    ZeroS,
    #[error("coefficient bound must be at least 1")]
    ZeroBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub construction: Construction,
    pub dim: usize,
    pub s: usize,
    pub seed: u64,
    pub coefficient_bound: u32,
}

impl GeneratorSpec {
    pub fn new(construction: Construction, dim: usize, s: usize, seed: u64) -> Self {
        GeneratorSpec {
            construction,
            dim,
            s,
            seed,
            coefficient_bound: 2,
        }
    }

    pub fn with_bound(mut self, bound: u32) -> Self {
        self.coefficient_bound = bound;
        self
    }
}

struct Gen {
    rng: ChaCha8Rng,
    bound: i64,
}

impl Gen {
    fn coeff(&mut self) -> Scalar {
        Scalar::from_integer(self.rng.random_range(-self.bound..=self.bound))
    }

    fn nonzero_coeff(&mut self) -> Scalar {
        let c = self.rng.random_range(1..=self.bound);
        Scalar::from_integer(if self.rng.random_bool(0.5) { c } else { -c })
    }

    fn vector(&mut self, n: usize, support: std::ops::Range<usize>) -> Vector {
        let mut v = Vector::zeros(n);
        for i in support {
            v[i] = self.coeff();
        }
        v
    }

    fn graded_nilpotent(&mut self, dim: usize, s: usize) -> LieLikeAlgebra {
        let v1 = dim - dim / 2;
        let mut brackets = Vec::new();
        for k in 0..s {
            for i in v1..dim {
                for j in v1..dim {
                    brackets.push((k, i, j, self.vector(dim, 0..v1)));
                }
            }
        }
        LieLikeAlgebra::from_brackets(dim, s, brackets).expect("indices in range")
    }

    /// A one-bracket solvable algebra `A + kx` with `A` abelian and `x`
    /// acting on `A` by an upper triangular integer matrix, then copied to
    /// `s` brackets with random scale factors (the first is 1).
    fn scaled_bundle(&mut self, dim: usize, s: usize) -> LieLikeAlgebra {
        let mut brackets = Vec::new();
        if dim > 0 {
            let a = dim - 1;
            let x = a;
            let mut d = Matrix::zeros(a, a);
            for i in 0..a {
                for j in i..a {
                    d.set(i, j, self.coeff());
                }
            }
            let lie = self.rng.random_bool(0.5);
            for j in 0..a {
                let mut image = Vector::zeros(dim);
                for i in 0..a {
                    image[i] = d.get(i, j).clone();
                }
                if lie {
                    // <x, a> = D a, <a, x> = -D a
                    brackets.push((0, x, j, image.clone()));
                    brackets.push((0, j, x, image.scale(&Scalar::from_integer(-1))));
                } else {
                    // <a, x> = D a, <x, x> in A, everything else zero
                    brackets.push((0, j, x, image));
                }
            }
            if !lie {
                brackets.push((0, x, x, self.vector(dim, 0..a)));
            }
        }
        let mut scales = vec![Scalar::one()];
        for _ in 1..s {
            scales.push(self.coeff());
        }
        let all = brackets
            .iter()
            .flat_map(|(_, i, j, v)| {
                scales
                    .iter()
                    .enumerate()
                    .map(move |(k, c)| (k, *i, *j, v.scale(c)))
            })
            .collect::<Vec<_>>();
        LieLikeAlgebra::from_brackets(dim, s, all).expect("indices in range")
    }

    fn simple_part(&mut self, dim: usize, s: usize) -> LieLikeAlgebra {
        match self.rng.random_range(0..3) {
            0 => LieLikeAlgebra::abelian(dim, s),
            1 => self.graded_nilpotent(dim, s),
            _ => self.scaled_bundle(dim, s),
        }
    }

    fn direct_sum(&mut self, dim: usize, s: usize) -> LieLikeAlgebra {
        if dim < 2 {
            return self.simple_part(dim, s);
        }
        let first = self.rng.random_range(1..dim);
        let a = self.simple_part(first, s);
        let b = self.simple_part(dim - first, s);
        a.direct_sum(&b).expect("same s")
    }

    /// Integer matrix with determinant 1: a product of elementary row operations.
    fn unimodular(&mut self, n: usize) -> Matrix {
        let mut p = Matrix::identity(n);
        if n < 2 {
            return p;
        }
        for _ in 0..2 * n {
            let i = self.rng.random_range(0..n);
            let mut j = self.rng.random_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let c = self.nonzero_coeff();
            let row = p.row_vector(j).scale(&c);
            for col in 0..n {
                let v = p.get(i, col) + &row[col];
                p.set(i, col, v);
            }
        }
        p
    }
}

/// Builds the instance for `spec`. Equal specs give identical instances.
pub fn generate(spec: &GeneratorSpec) -> Result<InstanceFile, GeneratorError> {
    if spec.s == 0 {
        return Err(GeneratorError::ZeroS);
    }
    if spec.coefficient_bound == 0 {
        return Err(GeneratorError::ZeroBound);
    }
    let mut gen = Gen {
        rng: ChaCha8Rng::seed_from_u64(spec.seed),
        bound: i64::from(spec.coefficient_bound),
    };
    let (dim, s) = (spec.dim, spec.s);
    let (algebra, module) = match spec.construction {
        Construction::Abelian => adjoint_pair(LieLikeAlgebra::abelian(dim, s)),
        Construction::GradedNilpotent => adjoint_pair(gen.graded_nilpotent(dim, s)),
        Construction::ScaledLeibnizBundle => adjoint_pair(gen.scaled_bundle(dim, s)),
        Construction::DirectSum => adjoint_pair(gen.direct_sum(dim, s)),
        Construction::BasisChanged => {
            let base = Arc::new(validated(gen.direct_sum(dim, s)));
            let mut module = OrdinaryModule::adjoint(Arc::clone(&base));
            // Doubling keeps vdim within 12 for dim <= 6.
            if dim > 0 && gen.rng.random_bool(0.5) {
                module = module.direct_sum(&module).expect("same algebra");
            }
            let p = gen.unimodular(dim);
            let algebra = Arc::new(validated(base.transform(&p).expect("unimodular")));
            let q = gen.unimodular(module.vdim());
            let module = module
                .transport_algebra_basis(&p, Arc::clone(&algebra))
                .and_then(|m| m.change_basis(&q))
                .expect("unimodular");
            (algebra, module)
        }
    };
    Ok(InstanceFile {
        algebra,
        module,
        metadata: Some(json!({
            "construction": spec.construction.tag(),
            "dim": spec.dim,
            "s": spec.s,
            "seed": spec.seed,
            "coefficient_bound": spec.coefficient_bound,
        })),
    })
}

fn validated(alg: LieLikeAlgebra) -> LieLikeAlgebra {
    alg.validate()
        .unwrap_or_else(|v| panic!("generated algebra violates {}", v[0]))
}

fn adjoint_pair(alg: LieLikeAlgebra) -> (Arc<LieLikeAlgebra>, OrdinaryModule) {
    let alg = Arc::new(validated(alg));
    (Arc::clone(&alg), OrdinaryModule::adjoint(alg))
}
