//! Dimension-typed morphisms with diagrammatic composition, canonical
//! kernels and cokernels, inner inverses and the monic/epic predicates.
//!
//! Composition is diagrammatic: for `f: X -> Y` and `g: Y -> Z` the
//! composite `f.then(g)` has matrix `mat(f) * mat(g)`, so products read
//! left to right exactly as they are written.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::mat::{Invertibility, Mat, SingularWitness};
use crate::scalar::Field;

/// An object of the matrix category: a finite dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Obj(pub usize);

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Obj({})", self.0)
    }
}

/// A morphism `dom -> cod` carried by a `dim(dom) x dim(cod)` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    dom: Obj,
    cod: Obj,
    mat: Mat,
}

/// Result of a monic/epic test; on failure a nonzero annihilating vector
/// is attached (a row `x` with `x * phi == 0`, or a column `y` with
/// `phi * y == 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateOutcome {
    pub holds: bool,
    pub witness: Option<Mat>,
}

impl Morphism {
    pub fn from_mat(mat: Mat) -> Self {
        Morphism { dom: Obj(mat.rows()), cod: Obj(mat.cols()), mat }
    }

    pub fn from_int_rows(field: Field, rows: &[&[i64]]) -> Self {
        Morphism::from_mat(Mat::from_int_rows(field, rows))
    }

    pub fn identity(obj: Obj, field: Field) -> Self {
        Morphism::from_mat(Mat::identity(obj.0, field))
    }

    pub fn zero(dom: Obj, cod: Obj, field: Field) -> Self {
        Morphism::from_mat(Mat::zeros(dom.0, cod.0, field))
    }

    pub fn dom(&self) -> Obj {
        self.dom
    }

    pub fn cod(&self) -> Obj {
        self.cod
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn field(&self) -> Field {
        self.mat.field()
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn is_endo(&self) -> bool {
        self.dom == self.cod
    }

    pub fn is_identity(&self) -> bool {
        self.mat.is_identity()
    }

    /// Checked diagrammatic composition `self` then `g`.
    pub fn compose(&self, g: &Morphism) -> Result<Morphism, EngineError> {
        if self.cod != g.dom {
            return Err(EngineError::ObjectMismatch(format!(
                "cod {} of the first morphism differs from dom {} of the second",
                self.cod, g.dom
            )));
        }
        if self.field() != g.field() {
            return Err(EngineError::ObjectMismatch(
                "morphisms live over different ground fields".into(),
            ));
        }
        Ok(Morphism { dom: self.dom, cod: g.cod, mat: &self.mat * &g.mat })
    }

    /// Unchecked diagrammatic composition for formula code whose shapes
    /// are correct by construction; panics on a mismatch.
    pub fn then(&self, g: &Morphism) -> Morphism {
        self.compose(g).expect("composition shape mismatch")
    }

    /// The involution: `adjoint` swaps dom and cod and conjugate-transposes.
    pub fn adjoint(&self) -> Morphism {
        Morphism { dom: self.cod, cod: self.dom, mat: self.mat.adjoint() }
    }

    /// `self` composed with itself `n` times; `n == 0` gives the identity.
    /// Defined for endomorphisms only.
    pub fn pow(&self, n: u32) -> Morphism {
        assert!(self.is_endo(), "pow is defined for endomorphisms");
        let mut acc = Morphism::identity(self.dom, self.field());
        for _ in 0..n {
            acc = acc.then(self);
        }
        acc
    }

    /// Exact inverse of an endomorphism, or a singularity witness.
    pub fn inverse(&self) -> Result<InvertOutcome, EngineError> {
        match self.mat.inverse()? {
            Invertibility::Invertible(m) => Ok(InvertOutcome::Invertible(Morphism::from_mat(m))),
            Invertibility::Singular(w) => Ok(InvertOutcome::Singular(w)),
        }
    }
}

/// Inverse of a morphism or constructive evidence that none exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvertOutcome {
    Invertible(Morphism),
    Singular(SingularWitness),
}

impl InvertOutcome {
    pub fn into_inverse(self) -> Option<Morphism> {
        match self {
            InvertOutcome::Invertible(m) => Some(m),
            InvertOutcome::Singular(_) => None,
        }
    }
}

impl Add<&Morphism> for &Morphism {
    type Output = Morphism;
    fn add(self, rhs: &Morphism) -> Morphism {
        assert_eq!((self.dom, self.cod), (rhs.dom, rhs.cod), "sum of unequal shapes");
        Morphism { dom: self.dom, cod: self.cod, mat: &self.mat + &rhs.mat }
    }
}

impl Sub<&Morphism> for &Morphism {
    type Output = Morphism;
    fn sub(self, rhs: &Morphism) -> Morphism {
        self + &(-rhs)
    }
}

impl Neg for &Morphism {
    type Output = Morphism;
    fn neg(self) -> Morphism {
        Morphism { dom: self.dom, cod: self.cod, mat: -&self.mat }
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}: {}", self.dom, self.cod, self.mat)
    }
}

/// Canonical kernel `kappa: K -> X` of `phi: X -> Y`: the rows of
/// `mat(kappa)` are the unique RREF basis of `{x : x * mat(phi) == 0}`,
/// so `kappa.then(phi) == 0`, `kappa` is monic and
/// `dim K == dim X - rank(phi)`.
pub fn kernel(phi: &Morphism) -> Morphism {
    Morphism::from_mat(phi.mat().left_null_basis())
}

/// Canonical cokernel `lambda: Y -> L` of `phi: X -> Y`: the columns of
/// `mat(lambda)` are the RREF basis of `{y : mat(phi) * y == 0}` written
/// column-wise, so `phi.then(lambda) == 0`, `lambda` is epic and
/// `dim L == dim Y - rank(phi)`.
pub fn cokernel(phi: &Morphism) -> Morphism {
    Morphism::from_mat(phi.mat().right_null_basis())
}

/// Canonical inner inverse `psi: Y -> X` with `phi.then(psi).then(phi) ==
/// phi`, built from the full-rank factorization; this particular choice is
/// reflexive and coincides with the Moore-Penrose inverse.
pub fn inner_inverse(phi: &Morphism) -> Morphism {
    let (f, g) = phi.mat().full_rank_factorization();
    let gs = g.adjoint();
    let fs = f.adjoint();
    let gg = (&g * &gs).inverse().expect("square").into_inverse().expect("Gram of a full-row-rank matrix");
    let ff = (&fs * &f).inverse().expect("square").into_inverse().expect("Gram of a full-column-rank matrix");
    Morphism::from_mat(&(&gs * &gg) * &(&ff * &fs))
}

/// `phi` is monic iff `rank(phi) == dim(dom)`; on failure attaches a
/// nonzero row `x` with `x * phi == 0`.
pub fn is_monic(phi: &Morphism) -> PredicateOutcome {
    let basis = phi.mat().left_null_basis();
    if basis.rows() == 0 {
        PredicateOutcome { holds: true, witness: None }
    } else {
        PredicateOutcome { holds: false, witness: Some(basis.row(0)) }
    }
}

/// `phi` is epic iff `rank(phi) == dim(cod)`; on failure attaches a
/// nonzero column `y` with `phi * y == 0`.
pub fn is_epic(phi: &Morphism) -> PredicateOutcome {
    let basis = phi.mat().right_null_basis();
    if basis.cols() == 0 {
        PredicateOutcome { holds: true, witness: None }
    } else {
        PredicateOutcome { holds: false, witness: Some(basis.column(0)) }
    }
}

/// Inverts an always-invertible Gram-type square morphism, panicking with
/// the given context when the positivity argument fails (which would be a
/// bug, not an input condition).
pub(crate) fn invert_positive(m: &Morphism, what: &str) -> Morphism {
    match m.inverse().expect("square by construction") {
        InvertOutcome::Invertible(inv) => inv,
        InvertOutcome::Singular(_) => panic!("{what} must be invertible over Q / Q(i)"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn mq(rows: &[&[i64]]) -> Morphism {
        Morphism::from_int_rows(Field::Q, rows)
    }

    #[test]
    fn composition_examples() {
        let kappa = mq(&[&[0, 1]]);
        let phi = mq(&[&[1, 1], &[0, 0]]);
        let comp = kappa.compose(&phi).unwrap();
        assert!(comp.is_zero());
        assert_eq!((comp.dom(), comp.cod()), (Obj(1), Obj(2)));

        let id = Morphism::identity(Obj(2), Field::Q);
        assert_eq!(id.compose(&phi).unwrap(), phi);

        let f = mq(&[&[1, 2, 3]]);
        assert!(matches!(phi.compose(&f), Err(EngineError::ObjectMismatch(_))));
    }

    #[test]
    fn kernel_examples() {
        let phi = mq(&[&[1, 1], &[0, 0]]);
        let k = kernel(&phi);
        assert_eq!(k, mq(&[&[0, 1]]));
        assert!(k.then(&phi).is_zero());
        assert!(is_monic(&k).holds);

        let id = Morphism::identity(Obj(2), Field::Q);
        assert_eq!(kernel(&id).dom(), Obj(0));

        let z = Morphism::zero(Obj(2), Obj(2), Field::Q);
        assert!(kernel(&z).is_identity());
    }

    #[test]
    fn cokernel_examples() {
        let phi = mq(&[&[1, 1], &[0, 0]]);
        let l = cokernel(&phi);
        assert_eq!(l, mq(&[&[1], &[-1]]));
        assert!(phi.then(&l).is_zero());
        assert!(is_epic(&l).holds);

        let id = Morphism::identity(Obj(2), Field::Q);
        assert_eq!(cokernel(&id).cod(), Obj(0));

        let n = mq(&[&[0, 1], &[0, 0]]);
        assert_eq!(cokernel(&n), mq(&[&[1], &[0]]));
    }

    #[test]
    fn inner_inverse_examples() {
        let phi = mq(&[&[1, 1], &[0, 0]]);
        let psi = inner_inverse(&phi);
        let half = Scalar::from_ratio_i64(1, 2, Field::Q);
        let expected = Morphism::from_mat(Mat::from_fn(2, 2, Field::Q, |i, j| {
            if j == 0 {
                let _ = i;
                half.clone()
            } else {
                Scalar::zero(Field::Q)
            }
        }));
        assert_eq!(psi, expected);
        assert_eq!(phi.then(&psi).then(&phi), phi);
        assert_eq!(psi.then(&phi).then(&psi), psi);

        let id = Morphism::identity(Obj(2), Field::Q);
        assert_eq!(inner_inverse(&id), id);

        let z = Morphism::zero(Obj(2), Obj(2), Field::Q);
        assert!(inner_inverse(&z).is_zero());
    }

    #[test]
    fn monic_epic_witnesses() {
        let phi = mq(&[&[1, 1], &[0, 0]]);
        let m = is_monic(&phi);
        assert!(!m.holds);
        let w = m.witness.unwrap();
        assert!(!w.is_zero());
        assert!((&w * phi.mat()).is_zero());
        assert_eq!(w, Mat::from_int_rows(Field::Q, &[&[0, 1]]));

        let lam = mq(&[&[1], &[-1]]);
        assert!(is_epic(&lam).holds);
    }

    #[test]
    fn kernel_dimension_accounting() {
        let cases: [&[&[i64]]; 3] = [
            &[&[1, 1], &[0, 0]],
            &[&[0, 1], &[0, 0]],
            &[&[1, 0], &[0, 1]],
        ];
        for rows in cases {
            let phi = mq(rows);
            let k = kernel(&phi);
            let l = cokernel(&phi);
            let r = phi.mat().rank();
            assert_eq!(k.dom().0 + r, phi.dom().0);
            assert_eq!(l.cod().0 + r, phi.cod().0);
        }
    }
}
