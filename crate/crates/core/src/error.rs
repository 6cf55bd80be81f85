use thiserror::Error;

/// Errors raised by the analysis, integration and sweep routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("state left the finite region at t = {time}")]
    NonFinite { time: f64 },

    #[error("slow flow is singular at v = {v} (fold point at {fold})")]
    SingularPoint { v: f64, fold: f64 },

    #[error("fixed point is not exponentially stable (max Re(lambda) = {max_real_part})")]
    NotExponentiallyStable { max_real_part: f64 },

    #[error("parameters are not bistable: {0}")]
    NotBistable(String),

    #[error("bracket [{lo}, {hi}] does not straddle a cycle existence boundary")]
    BadBracket { lo: f64, hi: f64 },

    #[error("basin undecided after {horizon} time units")]
    Undecided { horizon: f64 },

    #[error("cycle velocity vanishes at sample {index} (|x'| = {speed})")]
    DegenerateSpeed { index: usize, speed: f64 },

    #[error("{escaped} of {trials} trials escaped the fixed-point basin")]
    BasinEscape { escaped: usize, trials: usize },

    #[error("initial condition ({v}, {w}) is not in the {expected} basin at epsilon = {epsilon}")]
    BasinMismatch {
        v: f64,
        w: f64,
        expected: String,
        epsilon: f64,
    },

    #[error("trial {trial}: {source}")]
    Trial {
        trial: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
