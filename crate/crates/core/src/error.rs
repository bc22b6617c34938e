use thiserror::Error;

/// Errors produced by state construction, channel evolution, eigensolves
/// and the teleportation protocol.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument outside the function domain: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The requested superposition vanishes identically (e.g. xi = 0 with phi = pi).
    #[error("degenerate state: normalization bracket {bracket:e} is below threshold")]
    DegenerateState { bracket: f64 },

    #[error(
        "truncation too small: discarded mass {tail:e} beyond n_max = {n_max} exceeds {limit:e}"
    )]
    TruncationTooSmall { tail: f64, n_max: usize, limit: f64 },

    #[error("integrator step check failed: halving the step changed an entry by {max_diff:e}")]
    StepCheckFailed { max_diff: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    ConvergenceFailure { sweeps: usize, off_norm: f64 },

    #[error("eigenvalue {value:e} is below the clipping window; source matrix is not PSD")]
    NegativeEigenvalue { value: f64 },

    #[error("witness coefficients f_{i} and f_{j} must both be nonzero")]
    ZeroCoefficient { i: usize, j: usize },

    #[error("measurement outcome N = {n_sum} has zero probability")]
    ZeroProbabilityOutcome { n_sum: usize },

    #[error("vector is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("matrix is not Hermitian: |A - A^H| = {defect:e}")]
    NotHermitian { defect: f64 },

    #[error("matrix trace {trace} differs from 1")]
    NotUnitTrace { trace: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
