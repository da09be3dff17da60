use thiserror::Error;

/// Errors raised by the core model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid state space: {0}")]
    InvalidStateSpace(String),
    #[error("invalid belief: {0}")]
    InvalidBelief(String),
    #[error("invalid community: {0}")]
    InvalidCommunity(String),
    #[error("unknown state label `{0}`")]
    UnknownState(String),
    #[error("state index {index} out of range for {len} states")]
    StateOutOfRange { index: usize, len: usize },
    #[error("dimension mismatch: expected {expected} states, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// A forecast assigned zero probability to the realized state under a
    /// rule that charges an unbounded penalty for that.
    #[error("infinite score: forecast assigns zero probability to state {state}")]
    InfiniteScore { state: usize },
    #[error("impossible evidence: outcome has zero predictive probability")]
    ImpossibleEvidence,
    #[error("outcome does not belong to this experiment's outcome domain")]
    OutcomeDomain,
    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),
    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),
    #[error("invalid decision problem: {0}")]
    InvalidDecisionProblem(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
