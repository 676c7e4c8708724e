use thiserror::Error;

use crate::transforms::CalibrationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The requested series (or the OGF an integrand needs) does not converge
    /// at the given point.
    #[error("divergent evaluation: {0}")]
    DivergentEvaluation(String),

    #[error("series logarithm needs a non-zero constant term")]
    ZeroConstantTerm,

    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tol:e}")]
    QuadratureFailure { estimate: f64, tol: f64 },

    #[error("argument outside the supported domain: {0}")]
    DomainError(String),

    #[error("numeric overflow computing {0}")]
    Overflow(String),

    #[error("kernel is not constant-consistent (spread {:e} > {threshold:e})", .report.residual_spread)]
    CalibrationMismatch { report: Box<CalibrationReport>, threshold: f64 },

    #[error("tail bound {tail:e} cannot reach tolerance {tol:e} within {terms} terms")]
    ToleranceUnreachable { tail: f64, tol: f64, terms: usize },

    #[error("mismatched targets: {0}")]
    MismatchedTarget(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Short machine-readable tag, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivergentEvaluation(_) => "DivergentEvaluation",
            Error::ZeroConstantTerm => "ZeroConstantTerm",
            Error::QuadratureFailure { .. } => "QuadratureFailure",
            Error::DomainError(_) => "DomainError",
            Error::Overflow(_) => "Overflow",
            Error::CalibrationMismatch { .. } => "CalibrationMismatch",
            Error::ToleranceUnreachable { .. } => "ToleranceUnreachable",
            Error::MismatchedTarget(_) => "MismatchedTarget",
            Error::InvalidParameter(_) => "InvalidParameter",
        }
    }
}
