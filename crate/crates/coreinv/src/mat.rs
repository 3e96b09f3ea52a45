//! Exact dense matrices over ℚ or ℚ(i): product, adjoint, reduced row
//! echelon form with an accumulated row transform, inversion with
//! singularity witnesses, null-space bases and full-rank factorization.
//!
//! Zero-row and zero-column matrices are legal values throughout; the
//! 0x0 matrix counts as invertible with the 0x0 inverse.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::MatError;
use crate::scalar::{Field, Scalar};

/// Row-major dense matrix with a field tag so that empty matrices still
/// know which field they live in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<Scalar>,
}

/// Output of [`Mat::rref`]: `t * a == r` exactly, `t` square invertible,
/// `pivots` strictly increasing, `rank == pivots.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RrefResult {
    pub r: Mat,
    pub t: Mat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Constructive evidence that a square matrix is singular: a nonzero row
/// vector with `vector * matrix == 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularWitness {
    pub vector: Mat,
    pub matrix: Mat,
}

impl SingularWitness {
    /// Re-verifies the witness independently of how it was produced.
    pub fn verify(&self) -> bool {
        !self.vector.is_zero() && (&self.vector * &self.matrix).is_zero()
    }
}

/// Outcome of exact square inversion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Invertibility {
    Invertible(Mat),
    Singular(SingularWitness),
}

impl Invertibility {
    pub fn invertible(&self) -> bool {
        matches!(self, Invertibility::Invertible(_))
    }

    pub fn into_inverse(self) -> Option<Mat> {
        match self {
            Invertibility::Invertible(m) => Some(m),
            Invertibility::Singular(_) => None,
        }
    }
}

impl Mat {
    pub fn new(rows: usize, cols: usize, field: Field, entries: Vec<Scalar>) -> Result<Self, MatError> {
        if entries.len() != rows * cols {
            return Err(MatError::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|s| s.field() != field) {
            return Err(MatError::MixedField);
        }
        Ok(Mat { rows, cols, field, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, field: Field, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let s = f(i, j);
                assert_eq!(s.field(), field, "entry field must match the matrix field");
                entries.push(s);
            }
        }
        Mat { rows, cols, field, entries }
    }

    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        Mat::from_fn(rows, cols, field, |_, _| Scalar::zero(field))
    }

    pub fn identity(n: usize, field: Field) -> Self {
        Mat::from_fn(n, n, field, |i, j| {
            if i == j {
                Scalar::one(field)
            } else {
                Scalar::zero(field)
            }
        })
    }

    /// Convenience constructor from integer rows, mainly for tests and
    /// pinned examples.
    pub fn from_int_rows(field: Field, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat::from_fn(r, c, field, |i, j| Scalar::from_i64(rows[i][j], field))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.at(i, j).is_one()
                    } else {
                        self.at(i, j).is_zero()
                    }
                })
            })
    }

    pub fn checked_mul(&self, rhs: &Mat) -> Result<Mat, MatError> {
        if self.field != rhs.field {
            return Err(MatError::MixedField);
        }
        if self.cols != rhs.rows {
            return Err(MatError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let field = self.field;
        Ok(Mat::from_fn(self.rows, rhs.cols, field, |i, j| {
            let mut acc = Scalar::zero(field);
            for k in 0..self.cols {
                acc = &acc + &(self.at(i, k) * rhs.at(k, j));
            }
            acc
        }))
    }

    pub fn checked_add(&self, rhs: &Mat) -> Result<Mat, MatError> {
        if self.field != rhs.field {
            return Err(MatError::MixedField);
        }
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(MatError::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Mat::from_fn(self.rows, self.cols, self.field, |i, j| self.at(i, j) + rhs.at(i, j)))
    }

    /// Conjugate transpose. `adjoint(adjoint(a)) == a` and
    /// `adjoint(a*b) == adjoint(b)*adjoint(a)`.
    pub fn adjoint(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, self.field, |i, j| self.at(j, i).conj())
    }

    /// Entry-wise transpose without conjugation. Null-space computations
    /// use this; the involution uses [`Mat::adjoint`].
    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, self.field, |i, j| self.at(j, i).clone())
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        assert_eq!(s.field(), self.field, "scale factor field must match");
        Mat::from_fn(self.rows, self.cols, self.field, |i, j| self.at(i, j) * s)
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat {
        assert!(rows.end <= self.rows && cols.end <= self.cols);
        let (r0, c0) = (rows.start, cols.start);
        Mat::from_fn(rows.len(), cols.len(), self.field, |i, j| self.at(r0 + i, c0 + j).clone())
    }

    pub fn row(&self, i: usize) -> Mat {
        self.submatrix(i..i + 1, 0..self.cols)
    }

    pub fn column(&self, j: usize) -> Mat {
        self.submatrix(0..self.rows, j..j + 1)
    }

    /// Columns of `self` selected by `indices`, in order.
    pub fn select_columns(&self, indices: &[usize]) -> Mat {
        Mat::from_fn(self.rows, indices.len(), self.field, |i, j| self.at(i, indices[j]).clone())
    }

    pub fn hstack(&self, right: &Mat) -> Mat {
        assert_eq!(self.rows, right.rows, "hstack needs equal row counts");
        assert_eq!(self.field, right.field);
        Mat::from_fn(self.rows, self.cols + right.cols, self.field, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                right.at(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, below: &Mat) -> Mat {
        assert_eq!(self.cols, below.cols, "vstack needs equal column counts");
        assert_eq!(self.field, below.field);
        Mat::from_fn(self.rows + below.rows, self.cols, self.field, |i, j| {
            if i < self.rows {
                self.at(i, j).clone()
            } else {
                below.at(i - self.rows, j).clone()
            }
        })
    }

    /// 2x2 block assembly; block shapes must be consistent.
    pub fn block2x2(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
        a.hstack(b).vstack(&c.hstack(d))
    }

    /// Reduced row echelon form by exact Gauss-Jordan elimination with
    /// first-nonzero pivoting: leftmost pivot column, topmost nonzero row.
    /// Deterministic, and the accumulated transform satisfies `t*a == r`.
    pub fn rref(&self) -> RrefResult {
        let m = self.rows;
        let n = self.cols;
        let field = self.field;
        let mut r = self.entries.clone();
        let mut t = Mat::identity(m, field).entries;
        let mut pivots = Vec::new();
        let mut row = 0usize;

        let idx = |i: usize, j: usize| i * n + j;
        let tidx = |i: usize, j: usize| i * m + j;

        for col in 0..n {
            if row == m {
                break;
            }
            let Some(piv) = (row..m).find(|&i| !r[idx(i, col)].is_zero()) else {
                continue;
            };
            if piv != row {
                for j in 0..n {
                    r.swap(idx(piv, j), idx(row, j));
                }
                for j in 0..m {
                    t.swap(tidx(piv, j), tidx(row, j));
                }
            }
            let inv = r[idx(row, col)].checked_inv().expect("pivot is nonzero");
            if !r[idx(row, col)].is_one() {
                for j in 0..n {
                    r[idx(row, j)] = &r[idx(row, j)] * &inv;
                }
                for j in 0..m {
                    t[tidx(row, j)] = &t[tidx(row, j)] * &inv;
                }
            }
            for i in 0..m {
                if i == row || r[idx(i, col)].is_zero() {
                    continue;
                }
                let f = r[idx(i, col)].clone();
                for j in 0..n {
                    r[idx(i, j)] = &r[idx(i, j)] - &(&f * &r[idx(row, j)]);
                }
                for j in 0..m {
                    t[tidx(i, j)] = &t[tidx(i, j)] - &(&f * &t[tidx(row, j)]);
                }
            }
            pivots.push(col);
            row += 1;
        }

        RrefResult {
            r: Mat { rows: m, cols: n, field, entries: r },
            t: Mat { rows: m, cols: m, field, entries: t },
            rank: row,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Exact inverse of a square matrix, or a singularity witness: a
    /// nonzero row vector `x` with `x * self == 0`.
    pub fn inverse(&self) -> Result<Invertibility, MatError> {
        if !self.is_square() {
            return Err(MatError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let rr = self.rref();
        if rr.rank == self.rows {
            Ok(Invertibility::Invertible(rr.t))
        } else {
            // Row `rank` of T maps under A to the zero row of R.
            Ok(Invertibility::Singular(SingularWitness {
                vector: rr.t.row(rr.rank),
                matrix: self.clone(),
            }))
        }
    }

    /// Full-rank factorization `a == f * g` with `f` of full column rank,
    /// `g` of full row rank: `g` is the nonzero rows of the RREF, `f` the
    /// pivot columns of `a`. Deterministic.
    pub fn full_rank_factorization(&self) -> (Mat, Mat) {
        let rr = self.rref();
        let f = self.select_columns(&rr.pivots);
        let g = rr.r.submatrix(0..rr.rank, 0..self.cols);
        (f, g)
    }

    /// Canonical basis of the left null space `{x : x * self == 0}` as the
    /// rows of a matrix in reduced row echelon form (the unique RREF basis
    /// of that subspace). Shape `(rows - rank) x rows`.
    pub fn left_null_basis(&self) -> Mat {
        let rr = self.rref();
        let bottom = rr.t.submatrix(rr.rank..self.rows, 0..self.rows);
        let canon = bottom.rref();
        debug_assert_eq!(canon.rank, bottom.rows());
        canon.r
    }

    /// Canonical basis of the right null space `{y : self * y == 0}`,
    /// stored column-wise. Shape `cols x (cols - rank)`.
    pub fn right_null_basis(&self) -> Mat {
        self.transpose().left_null_basis().transpose()
    }

    /// Deterministic particular solution `x` of `self * x == b`, free
    /// variables set to zero; `None` when the system is inconsistent.
    pub fn solve_right(&self, b: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, b.rows, "solve_right shape mismatch");
        assert_eq!(self.field, b.field);
        let rr = self.rref();
        let tb = &rr.t * b;
        // Consistency: rows of t*b below the rank must vanish.
        for i in rr.rank..self.rows {
            for j in 0..b.cols {
                if !tb.at(i, j).is_zero() {
                    return None;
                }
            }
        }
        let mut x = Mat::zeros(self.cols, b.cols, self.field);
        for (i, &p) in rr.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.entries[p * b.cols + j] = tb.at(i, j).clone();
            }
        }
        Some(x)
    }

    /// Deterministic particular solution `y` of `y * self == b`.
    pub fn solve_left(&self, b: &Mat) -> Option<Mat> {
        self.transpose()
            .solve_right(&b.transpose())
            .map(|yt| yt.transpose())
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        self.at(r, c)
    }
}

impl Mul<&Mat> for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add<&Mat> for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        self.checked_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub<&Mat> for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        self + &(-rhs)
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat::from_fn(self.rows, self.cols, self.field, |i, j| -self.at(i, j))
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
        }
        write!(f, "]")
    }
}
