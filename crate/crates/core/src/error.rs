use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A field was paired with a plan built on a different grid.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Plan construction failed a precondition or its self-test.
    #[error("plan construction failed: {0}")]
    Construction(String),

    /// The inversion constant could not be calibrated consistently.
    #[error("calibration failed: {0}")]
    Calibration(String),

    /// The caller asked for something the operation does not support.
    #[error("usage error: {0}")]
    Usage(String),

    /// The integrator produced non-finite values or crossed the blow-up sentinel.
    #[error("blow-up at t = {time}: {norm_name} = {norm}")]
    BlowUp { time: f64, norm_name: &'static str, norm: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
