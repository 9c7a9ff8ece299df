use thiserror::Error;

use crate::parser::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The local imaginary unit is undefined this close to the real axis.
    #[error("point is too close to the real axis (vector norm {norm:e} < {eps:e})")]
    NearRealAxis { norm: f64, eps: f64 },

    #[error("function returned a non-finite value at {at:?}")]
    NonFinite { at: Vec<f64> },

    #[error("invalid involution sign pattern {0:?}")]
    InvalidPattern([i8; 3]),

    #[error("polynomial degree {degree} exceeds the cap of {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },

    #[error("polynomial is not an i-complex function of x0, x1: {0}")]
    NotComplexRestricted(String),

    #[error("expected a {expected} Weierstrass series, got a {got} one")]
    WrongSeriesSide { expected: &'static str, got: &'static str },

    #[error("constraint system needs at least one order")]
    EmptyOrders,

    #[error("derivative order {0} is not supported (allowed: 1..=16)")]
    InvalidOrder(u32),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("identity check failed: {0}")]
    IdentityViolation(String),

    #[error("expression uses {0}, which is not available in this mode")]
    ModeMismatch(&'static str),

    #[error(transparent)]
    Parse(#[from] ParseError),
}
