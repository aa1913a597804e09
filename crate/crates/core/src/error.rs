use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("conductivity is not positive and finite at x = {x} (value {value})")]
    NonPositiveConductivity { x: f64, value: f64 },

    #[error("malformed conductivity table: {0}")]
    MalformedTable(String),

    #[error("argument {value} outside the admissible domain {what}")]
    DomainError { what: &'static str, value: f64 },

    #[error("tolerance {tol:e} not reached after refinement to {panels} panels")]
    ToleranceNotReached { tol: f64, panels: usize },

    #[error("simplex order {order} exceeds the supported maximum {max}")]
    OrderTooHigh { order: usize, max: usize },

    #[error("regularization shift {shift} is smaller than the interval travel time {travel}")]
    ShiftTooSmall { shift: f64, travel: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("characteristic function nearly vanishes on the contour at k = {re}{im:+}i (|value| = {magnitude:e})")]
    DenominatorNearZero { re: f64, im: f64, magnitude: f64 },

    #[error("contour truncation tail {tail:e} exceeds tolerance; increase kmax for t = {t}")]
    TailTooLarge { tail: f64, t: f64 },

    #[error("root scan found only {found} of {wanted} sign changes below k = {ceiling}")]
    RootMissed { found: usize, wanted: usize, ceiling: f64 },

    #[error("root polishing did not converge near k = {0}")]
    NoConvergence(f64),

    #[error("partition cell {0} has zero width")]
    SingularPartition(usize),

    #[error("brute-force sum over 2^{} terms refused (N = {n} > {max})", n - 1)]
    TooManyTerms { n: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_unit(what: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::DomainError { what, value: x })
    }
}
