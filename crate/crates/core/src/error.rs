use alloc::boxed::Box;
use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    /// Adaptive quadrature ran out of subdivisions before reaching tolerance.
    #[error(
        "quadrature did not converge on [{lower}, {upper}]: error estimate {estimate:e} > tolerance {tolerance:e}"
    )]
    Quadrature { lower: f64, upper: f64, estimate: f64, tolerance: f64 },

    /// A sweep replicate failed; `(n, stream_id)` reproduces it.
    #[error("replicate failed at n = {n}, stream {stream_id:#018x}: {source}")]
    Replicate { n: usize, stream_id: u64, source: Box<Error> },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
