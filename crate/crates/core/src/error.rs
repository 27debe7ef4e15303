//! Error type shared by all toolkit modules.

/// Errors raised by distribution construction, truncation, and quadrature.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("distribution has no outcomes")]
    EmptyDistribution,

    #[error("probabilities sum to {sum} (must equal 1 within {tolerance})")]
    ProbabilityMass { sum: f64, tolerance: f64 },

    #[error("negative payout {0} (payouts must be >= 0)")]
    NegativePayout(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range for {len} outcomes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error(
        "no finite truncation point: tail mass stays above epsilon = {epsilon} on infinite support"
    )]
    NoFiniteTruncation { epsilon: f64 },

    #[error("quadrature did not converge: error estimate {error_estimate} exceeds tolerance {tolerance} after {subdivisions} subdivisions")]
    ConvergenceFailure {
        error_estimate: f64,
        tolerance: f64,
        subdivisions: u64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
