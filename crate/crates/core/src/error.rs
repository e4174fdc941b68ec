use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the interval where the Airy evaluator is supported.
    #[error("argument {x} outside supported interval [{min}, {max}]")]
    OutOfRange { x: f64, min: f64, max: f64 },

    /// A sign change that must exist was not found.
    #[error("failed to bracket root with index {index}")]
    Bracketing { index: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A sampled solution exceeded the magnitude cap.
    #[error("solution exceeded magnitude cap after node {last_valid} (r = {r})")]
    Truncated { last_valid: usize, r: f64 },

    #[error(
        "found {found} of {wanted} bound states below energy {energy_cap}; increase r_max"
    )]
    InsufficientDomain {
        found: usize,
        wanted: usize,
        energy_cap: f64,
    },

    /// The Gelfand-Levitan linear system is numerically singular at `x`.
    #[error("singular Gelfand-Levitan system at x = {x} (condition estimate {condition:e})")]
    Singular { x: f64, condition: f64 },

    #[error("unknown {kind} '{name}' (available: {available})")]
    UnknownName {
        kind: &'static str,
        name: String,
        available: String,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Bracketing { .. }
                | Error::Truncated { .. }
                | Error::InsufficientDomain { .. }
                | Error::Singular { .. }
        )
    }
}
