use thiserror::Error;

/// Errors raised by the analysis modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("time {t} is outside the domain {domain}")]
    Domain { t: f64, domain: String },

    #[error("degenerate spectrum: roots {0} and {1} coincide, the pole-residue form needs simple poles")]
    DegenerateSpectrum(String, String),

    #[error("spectrum is not oscillatory (three real roots); the I1/I2 split needs a complex pair")]
    NotOscillatory,

    #[error("step {dt} exceeds the resolution guard {limit}")]
    StepTooLarge { dt: f64, limit: f64 },

    #[error("invalid grid: {0}")]
    Grid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
