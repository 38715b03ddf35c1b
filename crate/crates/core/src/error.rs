use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid shift ({sigma}, {tau}): both shifts must be finite and > -1")]
    InvalidShift { sigma: f64, tau: f64 },

    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("Hurwitz zeta has a pole at s = 1")]
    ZetaPole,

    #[error("{what}: order {order} exceeds the supported cap {cap}")]
    OrderTooLarge {
        what: &'static str,
        order: usize,
        cap: usize,
    },

    #[error("quadrature did not converge: estimated error {error:e} > tolerance {tol:e}")]
    QuadratureDiverged { error: f64, tol: f64 },

    #[error("series did not reach tolerance {tol:e} (tail estimate {estimate:e})")]
    SeriesNotConverged { estimate: f64, tol: f64 },

    #[error("{0}")]
    Mismatch(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
