use thiserror::Error;

use crate::rate::ProbeResidual;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A model parameter violates the model's schema.
    #[error("invalid parameter: {0}")]
    Param(String),

    /// The per-step increment probability left `[0, 1)`.
    #[error("rate f_t(k) = {value} outside [0, 1) at t = {t}, k = {k}")]
    InvalidRate { t: u64, k: u64, value: f64 },

    /// `t * f_t(k)` failed the convergence certificate.
    #[error("rate limit did not converge at {} probe degree(s): {residuals:?}", residuals.len())]
    NonConvergence { residuals: Vec<ProbeResidual> },

    #[error("rejection sampling exceeded {retries} retries at growth step {step}")]
    Rejection { step: u64, retries: u32 },

    #[error("trial {index}: {source}")]
    Trial {
        index: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Param(msg.into())
    }
}
