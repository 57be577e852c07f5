//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by state construction, the bridge, and the audit machinery.
///
/// Validation of physical constraints never errors — it reports (see
/// [`crate::state::ValidationReport`]). These variants cover structural and
/// usage failures only.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("unknown functional name: {0}")]
    UnknownFunctional(String),

    #[error("non-holomorphic functional {0}: use flow_rate")]
    NonHolomorphic(String),

    #[error("explicit mode list carries no declared hermitian pairing")]
    NoDeclaredPairing,

    #[error("state carries no grid descriptor")]
    NoGrid,

    #[error("state is not hermitian-paired: max imaginary residue {residue:.3e} exceeds {tol:.3e}")]
    NotHermitian { residue: f64, tol: f64 },

    #[error("nyquist mode {mode} carries amplitude {magnitude:.3e} above tolerance {tol:.3e}")]
    NyquistNonzero { mode: usize, magnitude: f64, tol: f64 },

    #[error("non-finite sample in lattice field")]
    NonFiniteSample,

    #[error("non-finite value in functional evaluation of {0}")]
    NonFiniteValue(String),

    #[error("zero-mode charge constraint c(0) = {0} is unsatisfiable (gauss law requires 0)")]
    ZeroModeCharge(String),

    #[error("polarization is not orthogonal to the wave vector (|k.pol| = {0:.3e})")]
    PolarizationNotTransverse(f64),

    #[error("invalid state structure: {0}")]
    BadState(String),

    #[error("invalid parameter: {0}")]
    BadParameter(String),

    #[error("snapshot format error: {0}")]
    Format(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
