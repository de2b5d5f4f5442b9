use std::fmt;

/// Which family of variables a collision refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Particle positions `z_n`.
    Positions,
    /// Polynomial coefficients `c_m`.
    Coefficients,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Positions => write!(f, "z"),
            Family::Coefficients => write!(f, "c"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("{family}-collision between indices {i} and {j} (distance {distance:e})")]
    Collision {
        family: Family,
        i: usize,
        j: usize,
        distance: f64,
    },

    #[error("vanishing denominator in {0}")]
    Denominator(&'static str),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("root finder did not converge (residual {residual:e})")]
    RootsNotConverged { residual: f64 },

    #[error("eigensolver did not converge after {sweeps} QR sweeps")]
    EigenNotConverged { sweeps: usize },

    #[error("root tracking is ambiguous near t = {time} (bisection depth exhausted)")]
    TrackingAmbiguity { time: f64 },

    #[error("step size underflow at t = {time}")]
    StepSizeUnderflow { time: f64 },

    #[error("integrator exceeded {steps} steps (last good t = {time})")]
    TooManySteps { steps: usize, time: f64 },

    #[error("equilibrium candidate failed certification (residual {residual:e})")]
    Uncertified { residual: f64 },

    #[error("unsupported omega = {0} (only omega = 1 is catalogued)")]
    UnsupportedOmega(f64),

    #[error("invalid time grid: {0}")]
    TimeGrid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics, as opposed to bad input or IO.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Collision { .. }
                | Error::Denominator(_)
                | Error::RootsNotConverged { .. }
                | Error::EigenNotConverged { .. }
                | Error::TrackingAmbiguity { .. }
                | Error::StepSizeUnderflow { .. }
                | Error::TooManySteps { .. }
                | Error::NonFinite(_)
                | Error::Uncertified { .. }
        )
    }

    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
