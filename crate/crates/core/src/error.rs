use thiserror::Error;

use crate::units::Dimension;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("dimension mismatch: {lhs} vs {rhs}")]
    DimensionMismatch { lhs: Dimension, rhs: Dimension },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("boundary condition violated: {0}")]
    BoundaryCondition(String),

    #[error("quadrature did not converge (estimate {estimate:e}, error {error:e})")]
    QuadratureNotConverged { estimate: f64, error: f64 },

    #[error("trajectory parameter a = {0} makes P_a vanish inside [0, 1)")]
    InadmissibleTrajectory(f64),

    #[error("ODE integration failed: {0}")]
    Ode(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("drive frequency {omega} sits on the intermediate pole {pole}")]
    Pole { omega: f64, pole: f64 },

    #[error("all {0} restarts failed positivity validation")]
    AllRestartsFailed(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::NonFinite(name));
    }
    if value <= 0.0 {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("must be positive, got {value}"),
        });
    }
    Ok(value)
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::NonFinite(name));
    }
    if value < 0.0 {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("must be non-negative, got {value}"),
        });
    }
    Ok(value)
}

pub(crate) fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite(name))
    }
}
