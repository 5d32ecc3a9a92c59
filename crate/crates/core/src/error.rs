use thiserror::Error;

use crate::states::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: String, found: String },

    #[error("matrix is not Hermitian (max |M - M^dagger| = {defect:e})")]
    NonHermitian { defect: f64 },

    #[error("matrix is not symmetric (max |M - M^T| = {defect:e})")]
    NotSymmetric { defect: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NotConverged { sweeps: usize, off_norm: f64 },

    #[error("parameter {name} = {value} outside {domain}")]
    OutOfRange { name: &'static str, value: f64, domain: &'static str },

    #[error("invalid density matrix: {0}")]
    InvalidState(Violation),

    #[error("state is not pure (purity {purity})")]
    Impure { purity: f64 },

    #[error("state rank exceeds 2 (third eigenvalue {third:e})")]
    RankTooHigh { third: f64 },

    #[error("matrix is not X-shaped (largest off-X entry {defect:e})")]
    NotXShaped { defect: f64 },

    #[error("unknown subsystem selector '{0}'")]
    UnknownSelector(String),

    #[error("negative radicand {value:e} in {context}")]
    NegativeRadicand { value: f64, context: &'static str },

    #[error("energy basis check failed: max off-diagonal of U^dagger H U is {defect:e}")]
    BasisCheck { defect: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

/// Takes √x for values that may dip below zero by round-off.
pub(crate) fn clipped_sqrt(x: f64, context: &'static str) -> Result<f64> {
    if x >= 0.0 {
        Ok(x.sqrt())
    } else if x > -1e-12 {
        Ok(0.0)
    } else {
        Err(Error::NegativeRadicand { value: x, context })
    }
}

pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64, domain: &'static str) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value, domain })
    }
}
