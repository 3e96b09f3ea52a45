//! Exact scalars of the two supported involutive fields: the rationals
//! (identity involution) and the Gaussian rationals (complex conjugation).
//!
//! Every operation returns a fully reduced value (positive denominator,
//! numerator and denominator coprime), so exact equality of scalars is
//! structural equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::complex::Complex;
use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::MatError;

/// The ground field a computation runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    /// Rationals with the identity involution.
    Q,
    /// Gaussian rationals with complex conjugation.
    Qi,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Qi => write!(f, "Qi"),
        }
    }
}

/// An exact field element. A whole computation sticks to one variant;
/// mixing variants in arithmetic is a `MixedField` error (or a panic in
/// the unchecked operator forms, which internal code reaches only after
/// construction-time validation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rational(BigRational),
    Gaussian(Complex<BigRational>),
}

/// Binary operation selector for [`Scalar::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Q,
            Scalar::Gaussian(_) => Field::Qi,
        }
    }

    pub fn zero(field: Field) -> Self {
        match field {
            Field::Q => Scalar::Rational(BigRational::zero()),
            Field::Qi => Scalar::Gaussian(Complex::new(BigRational::zero(), BigRational::zero())),
        }
    }

    pub fn one(field: Field) -> Self {
        match field {
            Field::Q => Scalar::Rational(BigRational::one()),
            Field::Qi => Scalar::Gaussian(Complex::new(BigRational::one(), BigRational::zero())),
        }
    }

    pub fn from_i64(v: i64, field: Field) -> Self {
        Self::from_ratio_i64(v, 1, field)
    }

    /// Builds `num/den` in the requested field. Panics if `den == 0`.
    pub fn from_ratio_i64(num: i64, den: i64, field: Field) -> Self {
        let r = BigRational::new(BigInt::from(num), BigInt::from(den));
        match field {
            Field::Q => Scalar::Rational(r),
            Field::Qi => Scalar::Gaussian(Complex::new(r, BigRational::zero())),
        }
    }

    /// Builds `re + im*i` over the Gaussian rationals.
    pub fn gaussian_i64(re: (i64, i64), im: (i64, i64)) -> Self {
        Scalar::Gaussian(Complex::new(
            BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        ))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Gaussian(z) => z.re.is_zero() && z.im.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Gaussian(z) => z.re.is_one() && z.im.is_zero(),
        }
    }

    /// The involution at scalar level: identity on rationals, complex
    /// conjugation on Gaussian rationals. Involutive: `s.conj().conj() == s`.
    pub fn conj(&self) -> Self {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.clone()),
            Scalar::Gaussian(z) => Scalar::Gaussian(Complex::new(z.re.clone(), -z.im.clone())),
        }
    }

    /// Fully checked field arithmetic.
    pub fn arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar, MatError> {
        if a.field() != b.field() {
            return Err(MatError::MixedField);
        }
        match op {
            ArithOp::Add => Ok(a + b),
            ArithOp::Sub => Ok(a - b),
            ArithOp::Mul => Ok(a * b),
            ArithOp::Div => a.checked_div(b),
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, MatError> {
        if self.field() != rhs.field() {
            return Err(MatError::MixedField);
        }
        if rhs.is_zero() {
            return Err(MatError::DivisionByZero);
        }
        Ok(match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a / b),
            (Scalar::Gaussian(a), Scalar::Gaussian(b)) => Scalar::Gaussian(a / b),
            _ => unreachable!("field equality checked above"),
        })
    }

    /// Multiplicative inverse of a nonzero scalar.
    pub fn checked_inv(&self) -> Result<Scalar, MatError> {
        Scalar::one(self.field()).checked_div(self)
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a $op b),
                    (Scalar::Gaussian(a), Scalar::Gaussian(b)) => Scalar::Gaussian(a $op b),
                    _ => panic!("mixed scalar fields in arithmetic"),
                }
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r.clone()),
            Scalar::Gaussian(z) => Scalar::Gaussian(Complex::new(-z.re.clone(), -z.im.clone())),
        }
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

struct RatDisplay<'a>(&'a BigRational);

impl fmt::Display for RatDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rational(self.0, f)
    }
}

impl fmt::Display for Scalar {
    /// Canonical exact string form: `p` or `p/q` for rationals and
    /// `re`, `imi`, `re+imi`, `re-imi` for Gaussian rationals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => fmt_rational(r, f),
            Scalar::Gaussian(z) => {
                if z.im.is_zero() {
                    fmt_rational(&z.re, f)
                } else if z.re.is_zero() {
                    write!(f, "{}i", RatDisplay(&z.im))
                } else if z.im.is_negative() {
                    write!(f, "{}-{}i", RatDisplay(&z.re), RatDisplay(&-z.im.clone()))
                } else {
                    write!(f, "{}+{}i", RatDisplay(&z.re), RatDisplay(&z.im))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio_i64(n, d, Field::Q)
    }

    #[test]
    fn rational_field_ops() {
        assert_eq!(Scalar::arith(&q(1, 2), &q(1, 3), ArithOp::Add).unwrap(), q(5, 6));
        assert_eq!(Scalar::arith(&q(7, 3), &q(7, 3), ArithOp::Div).unwrap(), q(1, 1));
        assert_eq!(Scalar::arith(&q(2, 4), &q(0, 1), ArithOp::Mul).unwrap(), q(0, 1));
    }

    #[test]
    fn gaussian_product_of_conjugates() {
        let z = Scalar::gaussian_i64((1, 1), (1, 1));
        let got = Scalar::arith(&z, &z.conj(), ArithOp::Mul).unwrap();
        assert_eq!(got, Scalar::from_i64(2, Field::Qi));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            Scalar::arith(&q(1, 1), &q(0, 1), ArithOp::Div),
            Err(MatError::DivisionByZero)
        );
    }

    #[test]
    fn mixed_fields_are_an_error() {
        let a = q(1, 1);
        let b = Scalar::from_i64(1, Field::Qi);
        assert_eq!(Scalar::arith(&a, &b, ArithOp::Add), Err(MatError::MixedField));
    }

    #[test]
    fn conjugation_is_an_involution() {
        let cases = [q(3, 4), Scalar::gaussian_i64((1, 1), (2, 1)), Scalar::zero(Field::Qi)];
        for s in &cases {
            assert_eq!(&s.conj().conj(), s);
        }
        assert_eq!(Scalar::zero(Field::Qi).conj(), Scalar::zero(Field::Qi));
        assert_eq!(q(3, 4).conj(), q(3, 4));
        assert_eq!(
            Scalar::gaussian_i64((1, 1), (2, 1)).conj(),
            Scalar::gaussian_i64((1, 1), (-2, 1))
        );
    }

    #[test]
    fn canonical_form_after_every_operation() {
        // 2/4 reduces, negative denominators normalize into the numerator.
        let s = Scalar::from_ratio_i64(2, 4, Field::Q);
        assert_eq!(s, q(1, 2));
        let t = Scalar::from_ratio_i64(1, -2, Field::Q);
        assert_eq!(t, q(-1, 2));
        match &t {
            Scalar::Rational(r) => assert!(r.denom() > &num::BigInt::from(0)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(q(-3, 2).to_string(), "-3/2");
        assert_eq!(q(5, 1).to_string(), "5");
        assert_eq!(Scalar::gaussian_i64((1, 2), (3, 4)).to_string(), "1/2+3/4i");
        assert_eq!(Scalar::gaussian_i64((1, 2), (-3, 4)).to_string(), "1/2-3/4i");
        assert_eq!(Scalar::gaussian_i64((0, 1), (-1, 1)).to_string(), "-1i");
        assert_eq!(Scalar::zero(Field::Qi).to_string(), "0");
    }
}
