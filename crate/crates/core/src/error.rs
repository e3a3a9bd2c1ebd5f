use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a time-stepping run stopped early.
#[derive(Debug, Clone, PartialEq)]
pub enum FailureKind {
    MaxSteps(usize),
    StepUnderflow { h: f64, error: f64, bound: f64 },
    NegativeState { component: usize, value: f64 },
    NonFinite,
    Rhs(String),
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureKind::MaxSteps(n) => write!(f, "maximum of {n} steps exceeded"),
            FailureKind::StepUnderflow { h, error, bound } => write!(
                f,
                "step size underflow (h = {h:e}, error {error:e} > bound {bound:e})"
            ),
            FailureKind::NegativeState { component, value } => {
                write!(f, "component {component} went negative ({value:e})")
            }
            FailureKind::NonFinite => write!(f, "non-finite state"),
            FailureKind::Rhs(msg) => write!(f, "right-hand side failed: {msg}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("control out of bounds: {0}")]
    ControlBounds(String),

    #[error("integration failed at t = {t}: {kind}")]
    Integration { t: f64, kind: FailureKind },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("forward-backward sweep failed in iteration {iteration}: {source}")]
    Sweep {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
