//! Error types for the exact-linalg substrate and the inverse engine.

use thiserror::Error;

/// Errors raised by scalar and dense-matrix arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed scalar fields: operands must both be rational or both Gaussian rational")]
    MixedField,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// Errors raised by the morphism layer and the inverse routes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("objects do not match: {0}")]
    ObjectMismatch(String),
    #[error("shapes do not compose: {0}")]
    ShapeMismatch(String),
    #[error("supplied morphism is not an inner inverse (phi psi phi != phi)")]
    NotInnerInverse,
    #[error("exponent {n} is below the minimum {min} for this route")]
    BadExponent { n: u32, min: u32 },
    #[error("supplied morphism is not an annihilator (eta phi != 0)")]
    NotAnnihilator,
    #[error("morphism is not core invertible")]
    NotCoreInvertible,
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Errors raised by the controlled random-instance generator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("infeasible instance spec: {0}")]
    InfeasibleSpec(String),
}
