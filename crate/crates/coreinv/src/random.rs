//! Deterministic random instance generation with controlled rank and
//! index. The generator is ChaCha12 seeded from a 64-bit value, so
//! identical seeds reproduce identical matrices on every platform.
//!
//! Index-1 instances are built as `p * blockdiag(c, 0) * p^{-1}` with `c`
//! invertible, which forces `rank(a) == rank(a^2)`; index->=2 instances
//! additionally embed a 2x2 nilpotent block, which forces
//! `rank(a^2) < rank(a)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::GenError;
use crate::mat::Mat;
use crate::morphism::Morphism;
use crate::scalar::{Field, Scalar};

/// Requested index class of a generated square matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexClass {
    /// `rank(a) == rank(a^2)`: group/core invertible.
    One,
    /// `rank(a^2) < rank(a)`: no group, core or dual core inverse.
    GeTwo,
}

const MAGNITUDE: i64 = 9;

fn random_scalar(rng: &mut ChaCha12Rng, field: Field, bound: i64) -> Scalar {
    match field {
        Field::Q => Scalar::from_i64(rng.random_range(-bound..=bound), Field::Q),
        Field::Qi => Scalar::gaussian_i64(
            (rng.random_range(-bound..=bound), 1),
            (rng.random_range(-bound..=bound), 1),
        ),
    }
}

/// Dense matrix with integer (or Gaussian-integer) entries of magnitude
/// at most 9, drawn from `rng`.
pub fn random_dense(rows: usize, cols: usize, field: Field, rng: &mut ChaCha12Rng) -> Mat {
    Mat::from_fn(rows, cols, field, |_, _| random_scalar(rng, field, MAGNITUDE))
}

fn random_invertible(n: usize, field: Field, rng: &mut ChaCha12Rng) -> Mat {
    loop {
        let c = random_dense(n, n, field, rng);
        if c.rank() == n {
            return c;
        }
    }
}

/// Product of a unit lower and a unit upper triangular matrix with small
/// integer entries: invertible with an exact integer inverse.
fn random_unimodular(n: usize, field: Field, rng: &mut ChaCha12Rng) -> Mat {
    let lower = Mat::from_fn(n, n, field, |i, j| {
        if i == j {
            Scalar::one(field)
        } else if j < i {
            random_scalar(rng, field, 2)
        } else {
            Scalar::zero(field)
        }
    });
    let upper = Mat::from_fn(n, n, field, |i, j| {
        if i == j {
            Scalar::one(field)
        } else if j > i {
            random_scalar(rng, field, 2)
        } else {
            Scalar::zero(field)
        }
    });
    &lower * &upper
}

fn embed_block(dim: usize, block: &Mat, field: Field) -> Mat {
    Mat::from_fn(dim, dim, field, |i, j| {
        if i < block.rows() && j < block.cols() {
            block.at(i, j).clone()
        } else {
            Scalar::zero(field)
        }
    })
}

/// Rectangular matrix of exactly the requested rank: a product of a full
/// column rank and a full row rank random factor.
pub fn random_with_rank(rows: usize, cols: usize, rank: usize, field: Field, rng: &mut ChaCha12Rng) -> Result<Mat, GenError> {
    if rank > rows.min(cols) {
        return Err(GenError::InfeasibleSpec(format!(
            "rank {rank} exceeds min({rows}, {cols})"
        )));
    }
    if rank == 0 {
        return Ok(Mat::zeros(rows, cols, field));
    }
    let f = loop {
        let c = random_dense(rows, rank, field, rng);
        if c.rank() == rank {
            break c;
        }
    };
    let g = loop {
        let c = random_dense(rank, cols, field, rng);
        if c.rank() == rank {
            break c;
        }
    };
    Ok(&f * &g)
}

/// Seeded random endomorphism of the requested dimension, rank and index
/// class. Deterministic: identical arguments give identical matrices.
pub fn gen_random(dim: usize, rank: usize, index: IndexClass, seed: u64, field: Field) -> Result<Morphism, GenError> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    gen_random_with(dim, rank, index, field, &mut rng)
}

/// Same as [`gen_random`] but drawing from a caller-owned generator, for
/// batch drivers that derive many instances from one stream.
pub fn gen_random_with(dim: usize, rank: usize, index: IndexClass, field: Field, rng: &mut ChaCha12Rng) -> Result<Morphism, GenError> {
    if rank > dim {
        return Err(GenError::InfeasibleSpec(format!("rank {rank} exceeds dim {dim}")));
    }
    let core = match index {
        IndexClass::One => {
            if rank == 0 {
                return Ok(Morphism::from_mat(Mat::zeros(dim, dim, field)));
            }
            random_invertible(rank, field, rng)
        }
        IndexClass::GeTwo => {
            if rank == 0 || dim - rank == 0 {
                return Err(GenError::InfeasibleSpec(format!(
                    "index >= 2 needs 1 <= rank <= dim - 1, got rank {rank}, dim {dim}"
                )));
            }
            let invertible_part = random_invertible(rank - 1, field, rng);
            // blockdiag(invertible part, [[0,1],[0,0]]): total rank is
            // `rank`, the square drops to `rank - 1`.
            Mat::from_fn(rank + 1, rank + 1, field, |i, j| {
                if i < rank - 1 && j < rank - 1 {
                    invertible_part.at(i, j).clone()
                } else if (i, j) == (rank - 1, rank) {
                    Scalar::one(field)
                } else {
                    Scalar::zero(field)
                }
            })
        }
    };
    let d = embed_block(dim, &core, field);
    let p = random_unimodular(dim, field, rng);
    let p_inv = p
        .inverse()
        .expect("square")
        .into_inverse()
        .expect("unimodular matrices are invertible");
    Ok(Morphism::from_mat(&(&p * &d) * &p_inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theorems::index_oracle;

    #[test]
    fn deterministic_per_seed() {
        let a = gen_random(4, 2, IndexClass::One, 42, Field::Q).unwrap();
        let b = gen_random(4, 2, IndexClass::One, 42, Field::Q).unwrap();
        assert_eq!(a, b);
        let c = gen_random(4, 2, IndexClass::One, 43, Field::Q).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rank_and_index_are_as_requested() {
        for seed in 0..40u64 {
            let a = gen_random(4, 2, IndexClass::One, seed, Field::Q).unwrap();
            assert_eq!(a.mat().rank(), 2);
            assert!(index_oracle(&a));

            let b = gen_random(4, 2, IndexClass::GeTwo, seed, Field::Q).unwrap();
            assert_eq!(b.mat().rank(), 2);
            assert!(!index_oracle(&b));
        }
    }

    #[test]
    fn gaussian_instances() {
        let a = gen_random(3, 2, IndexClass::One, 7, Field::Qi).unwrap();
        assert_eq!(a.field(), Field::Qi);
        assert_eq!(a.mat().rank(), 2);
        assert!(index_oracle(&a));
    }

    #[test]
    fn degenerate_specs() {
        let z = gen_random(3, 0, IndexClass::One, 1, Field::Q).unwrap();
        assert!(z.is_zero());
        assert!(gen_random(2, 3, IndexClass::One, 1, Field::Q).is_err());
        assert!(gen_random(2, 2, IndexClass::GeTwo, 1, Field::Q).is_err());
        assert!(gen_random(2, 0, IndexClass::GeTwo, 1, Field::Q).is_err());
        // 2x2 with a genuine nilpotent part.
        let n = gen_random(2, 1, IndexClass::GeTwo, 5, Field::Q).unwrap();
        assert_eq!(n.mat().rank(), 1);
        assert_eq!(n.then(&n).mat().rank(), 0);
    }

    #[test]
    fn rectangular_rank_control() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for (m, n, r) in [(3usize, 5usize, 2usize), (4, 2, 2), (5, 5, 0), (1, 1, 1)] {
            let a = random_with_rank(m, n, r, Field::Q, &mut rng).unwrap();
            assert_eq!((a.rows(), a.cols(), a.rank()), (m, n, r));
        }
        assert!(random_with_rank(2, 2, 3, Field::Q, &mut rng).is_err());
    }
}
