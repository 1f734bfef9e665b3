use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("quadrature did not converge: error estimate {estimate:.3e} exceeds tolerance {tol:.3e} on [{lo}, {hi}]")]
    QuadratureNotConverged {
        estimate: f64,
        tol: f64,
        lo: f64,
        hi: f64,
    },

    #[error("basis window too small: tail mass {tail:.3e} exceeds {limit:.3e} (need larger truncation)")]
    TruncationInsufficient { tail: f64, limit: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("hamiltonian is not Hermitian: max |H - H^dag| = {deviation:.3e}")]
    NonHermitianHamiltonian { deviation: f64 },

    #[error("series cutoff {cutoff} insufficient: boundary term {tail:.3e} above 1e-14")]
    CutoffInsufficient { cutoff: usize, tail: f64 },

    #[error("denominator vanishes at (J = {j}, phi = {phi}): |f + C| = {value:.3e}")]
    DenominatorVanishes { j: f64, phi: f64, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
