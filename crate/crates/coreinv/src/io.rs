//! Exact JSON wire formats: matrix files with fraction-string entries and
//! the certificate reports the command-line front end emits. Decimal
//! literals are rejected everywhere; serialization round-trips losslessly.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use num::{BigInt, BigRational, One, Zero};

use crate::geninv::{Certificate, GenInvResult, NotInvertibleReason};
use crate::mat::{Mat, SingularWitness};
use crate::morphism::Morphism;
use crate::scalar::{Field, Scalar};

/// Errors from reading a matrix file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FileError {
    #[error("parse error at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },
    #[error("malformed JSON at line {line}, column {col}: {msg}")]
    Json { line: usize, col: usize, msg: String },
    #[error("shape error: {0}")]
    Shape(String),
}

/// Exact matrix wire format: entries are fraction strings such as `"2"`,
/// `"-1/3"` or `"1/2+3/4i"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub field: Field,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    if s.contains('.') {
        return Err("decimal literals are not allowed; use p/q fractions".into());
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num_str
        .parse()
        .map_err(|_| format!("invalid integer {num_str:?}"))?;
    if den_str.starts_with('+') || den_str.starts_with('-') {
        return Err("denominators must be unsigned".into());
    }
    let den: BigInt = den_str
        .parse()
        .map_err(|_| format!("invalid denominator {den_str:?}"))?;
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(num, den))
}

/// Parses one entry string in the given field. Rational entries are
/// `p` or `p/q`; Gaussian entries additionally allow `ri` and
/// `p/q+r/si` / `p/q-r/si` forms.
pub fn parse_scalar(s: &str, field: Field) -> Result<Scalar, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty entry".into());
    }
    let (re, im) = if let Some(body) = s.strip_suffix('i') {
        // Split the imaginary form at the last interior sign.
        let split = body
            .char_indices()
            .rev()
            .find(|(i, c)| *i > 0 && (*c == '+' || *c == '-') && !body[..*i].ends_with('/'))
            .map(|(i, _)| i);
        match split {
            Some(i) => {
                let re = parse_rational(&body[..i])?;
                let sign = if body[i..].starts_with('-') { -1 } else { 1 };
                let im_body = &body[i + 1..];
                let im = if im_body.is_empty() {
                    BigRational::one()
                } else {
                    parse_rational(im_body)?
                };
                (re, im * BigRational::from_integer(BigInt::from(sign)))
            }
            None => {
                let im = if body.is_empty() {
                    BigRational::one()
                } else if body == "-" {
                    -BigRational::one()
                } else {
                    parse_rational(body)?
                };
                (BigRational::zero(), im)
            }
        }
    } else {
        (parse_rational(s)?, BigRational::zero())
    };

    match field {
        Field::Q => {
            if !im.is_zero() {
                Err("imaginary entry in a rational matrix".into())
            } else {
                Ok(Scalar::Rational(re))
            }
        }
        Field::Qi => Ok(Scalar::Gaussian(num::complex::Complex::new(re, im))),
    }
}

impl MatrixFile {
    pub fn from_mat(mat: &Mat) -> Self {
        let entries = (0..mat.rows())
            .map(|i| (0..mat.cols()).map(|j| mat.at(i, j).to_string()).collect())
            .collect();
        MatrixFile { field: mat.field(), rows: mat.rows(), cols: mat.cols(), entries }
    }

    pub fn from_morphism(m: &Morphism) -> Self {
        Self::from_mat(m.mat())
    }

    pub fn to_mat(&self) -> Result<Mat, FileError> {
        if self.entries.len() != self.rows {
            return Err(FileError::Shape(format!(
                "expected {} rows, found {}",
                self.rows,
                self.entries.len()
            )));
        }
        let mut scalars = Vec::with_capacity(self.rows * self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.cols {
                return Err(FileError::Shape(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    self.cols
                )));
            }
            for (j, cell) in row.iter().enumerate() {
                let s = parse_scalar(cell, self.field)
                    .map_err(|msg| FileError::Parse { row: i, col: j, msg })?;
                scalars.push(s);
            }
        }
        Mat::new(self.rows, self.cols, self.field, scalars)
            .map_err(|e| FileError::Shape(e.to_string()))
    }

    pub fn to_morphism(&self) -> Result<Morphism, FileError> {
        Ok(Morphism::from_mat(self.to_mat()?))
    }
}

/// Parses a matrix file from JSON text.
pub fn parse_matrix_json(text: &str) -> Result<MatrixFile, FileError> {
    serde_json::from_str(text).map_err(|e| FileError::Json {
        line: e.line(),
        col: e.column(),
        msg: e.to_string(),
    })
}

/// Reads a matrix file from JSON text and converts it to a morphism.
pub fn parse_matrix(text: &str) -> Result<Morphism, FileError> {
    parse_matrix_json(text)?.to_morphism()
}

/// Hex SHA-256 digest of raw input bytes, recorded in reports.
pub fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let mut out = String::with_capacity(2 * hash.len() + 7);
    out.push_str("sha256:");
    for b in hash {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

pub const REPORT_SCHEMA: &str = "coreinv/report/v1";

/// One equation verdict in serialized form, residual included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckFile {
    pub equation: String,
    pub holds: bool,
    pub residual: MatrixFile,
}

/// Serialized certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub kind: String,
    pub checks: Vec<CheckFile>,
}

impl CertificateFile {
    pub fn from_certificate(cert: &Certificate) -> Self {
        CertificateFile {
            kind: cert.kind.to_string(),
            checks: cert
                .checks
                .iter()
                .map(|c| CheckFile {
                    equation: c.equation.clone(),
                    holds: c.holds,
                    residual: MatrixFile::from_morphism(&c.residual),
                })
                .collect(),
        }
    }

    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Serialized singularity witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub vector: MatrixFile,
    pub matrix: MatrixFile,
}

impl WitnessFile {
    pub fn from_witness(w: &SingularWitness) -> Self {
        WitnessFile {
            vector: MatrixFile::from_mat(&w.vector),
            matrix: MatrixFile::from_mat(&w.matrix),
        }
    }
}

/// Per-route comparison entry when several routes were requested.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteResult {
    pub route: String,
    pub found: bool,
    pub agrees: bool,
}

/// A failing fuzz instance, dumped for reproduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailedInstance {
    pub seed: u64,
    pub failures: Vec<String>,
    pub matrix: MatrixFile,
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Found {
        inverse: MatrixFile,
        certificate: CertificateFile,
        routes: Vec<RouteResult>,
    },
    NotInvertible {
        reason: NotInvertibleReason,
        witness: WitnessFile,
    },
    Verified {
        certificate: CertificateFile,
        all_hold: bool,
    },
    FuzzSummary {
        count: u32,
        passes: u32,
        failures: u32,
        failed: Vec<FailedInstance>,
        reproducer: Option<String>,
    },
    Generated {
        matrix: MatrixFile,
    },
    Disagreement {
        details: Vec<String>,
    },
}

/// The requested operation, echoed back in the report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Operation {
    Inverse {
        kind: String,
        route: String,
        n: Option<u32>,
        input: String,
    },
    Verify {
        kind: String,
        input: String,
        candidate: String,
    },
    Fuzz {
        theorem: String,
        dim: usize,
        count: u32,
        seed: u64,
        field: Field,
    },
    Gen {
        dim: usize,
        rank: usize,
        index: String,
        seed: u64,
        field: Field,
    },
}

/// The single JSON document a command prints on stdout. Round-trips
/// losslessly: all matrix data is exact fraction strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub operation: Operation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route_agreement: Option<bool>,
    pub timing_ms: u64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Helper used by the CLI and the batch driver to serialize a result.
pub fn outcome_from_result(result: &GenInvResult, routes: Vec<RouteResult>) -> Outcome {
    match result {
        GenInvResult::Found { chi, cert, .. } => Outcome::Found {
            inverse: MatrixFile::from_morphism(chi),
            certificate: CertificateFile::from_certificate(cert),
            routes,
        },
        GenInvResult::NotInvertible { reason, witness } => Outcome::NotInvertible {
            reason: *reason,
            witness: WitnessFile::from_witness(witness),
        },
    }
}
