use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("walk length {0} is not a positive even number")]
    OddLength(usize),
    #[error("height drops below zero at step {position}")]
    NegativeHeight { position: usize },
    #[error("walk ends at height {height} instead of zero")]
    NonzeroEndpoint { height: u32 },
    #[error("down step {position} has color {found} but its matching up step has color {expected}")]
    ColorMismatch {
        position: usize,
        expected: u8,
        found: u8,
    },
    #[error("color {color} at step {position} is outside 1..={s}")]
    ColorOutOfRange { position: usize, color: u8, s: usize },
    #[error("cannot parse step token {0:?}")]
    ParseStep(String),
    #[error("estimated size {estimated} exceeds the configured cap {cap}")]
    SizeLimitExceeded { estimated: u128, cap: u128 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("theorem precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("operator is not positive semidefinite: eigenvalue {0:e}")]
    NotPsd(f64),
    #[error("operator has no eigenvalue above the zero tolerance")]
    NoPositiveEigenvalue,
    #[error("transition entry P({row},{col}) = {value:e} is negative")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("cut set A carries stationary mass {0} > 1/2")]
    PiAExceedsHalf(f64),
    #[error("invalid MCMC start state: {0}")]
    InvalidStart(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
