use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not a linear forest: {0}")]
    NotLinearForest(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    /// A construction that must succeed did not; signals a bug or a gap in the
    /// argument being implemented.
    #[error("internal infeasibility: {0}")]
    InternalInfeasible(String),

    #[error("invariant violated in {stage}: {detail}")]
    InvariantViolation { stage: &'static str, detail: String },

    #[error("witness rejected (seed {seed}): {detail}")]
    WitnessRejected { seed: u64, detail: String },

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("node budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("infeasible input: {0}")]
    InfeasibleInput(String),
}

impl Error {
    pub(crate) fn invariant(stage: &'static str, detail: impl Into<String>) -> Self {
        Error::InvariantViolation { stage, detail: detail.into() }
    }
}
