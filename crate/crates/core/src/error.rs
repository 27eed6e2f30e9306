use thiserror::Error;

pub type Result<T> = std::result::Result<T, HusError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HusError {
    #[error("step size must be positive and finite, got {0}")]
    InvalidStepSize(f64),

    #[error("coefficient cycle must contain at least one value")]
    EmptyCycle,

    #[error("non-finite value {value} at position {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("cycle of length {len} repeats with smaller period {period}")]
    NonMinimalPeriod { len: usize, period: usize },

    #[error("trajectory must contain at least one sample")]
    EmptyTrajectory,

    #[error("index {index} lies outside the window [{first}, {last}]")]
    OutOfWindow {
        index: usize,
        first: usize,
        last: usize,
    },

    #[error("window too short: need {needed} samples, got {got}")]
    WindowTooShort { needed: usize, got: usize },

    #[error("zero factor 1 + h*lambda at cycle position {index}")]
    Degenerate { index: usize },

    #[error("|e(nh)| = {modulus} is unit modulus; the equation is not Hyers-Ulam stable")]
    NotStable { modulus: f64 },

    #[error("window tail remainder {remainder:e} exceeds {threshold:e}; enlarge the window")]
    Inconclusive { remainder: f64, threshold: f64 },

    #[error("simulation overflow at step {index}")]
    Overflow { index: usize },

    #[error("invalid equation: {0}")]
    InvalidEquation(String),

    #[error("config: {0}")]
    Config(String),
}
