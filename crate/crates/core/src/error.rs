use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("equilibrium reduction undefined without cannibalism (sigma = 0)")]
    NoCannibalism,

    #[error("degenerate equilibrium reduction: {0}")]
    DegenerateReduction(&'static str),

    #[error("equilibrium ({u}, {v}, {w}) is not feasible")]
    InfeasibleEquilibrium { u: f64, v: f64, w: f64 },

    #[error("trajectory diverged at step {step} (t = {time}): state {state:?}")]
    Divergence {
        step: usize,
        time: f64,
        state: [f64; 3],
    },

    #[error("explicit stability guard violated: max(d1,d2,d3)*dt*4/h^2 = {value} >= 1")]
    StabilityGuard { value: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid snapshot schedule: {0}")]
    InvalidSchedule(String),

    #[error("field `{field}` failed at node ({i}, {j}), t = {time}: value {value}")]
    FieldFailure {
        field: char,
        i: usize,
        j: usize,
        time: f64,
        value: f64,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("classification needs at least two snapshots separated by >= {min_gap} time units")]
    InsufficientSnapshots { min_gap: f64 },

    #[error("invalid settings: {0}")]
    InvalidSettings(String),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Divergence { .. } | Error::FieldFailure { .. } | Error::DegenerateReduction(_)
        )
    }
}
