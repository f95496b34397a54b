use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the metric and consensus routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rankings are not permutations of the same candidate set")]
    CandidateSetMismatch,
    #[error("group `{group}` has no mixed pairs (it is empty or spans every candidate)")]
    NoMixedPairs { group: String },
    #[error("only one group exists; ARP is undefined")]
    SingleGroup,
    #[error("histogram bin count must be at least 1")]
    InvalidBins,
    #[error("no base rankings supplied")]
    EmptyRankingSet,
    #[error("{n} candidates exceeds the exhaustive search cap of {max_n}")]
    TooLarge { n: usize, max_n: usize },
    #[error("unknown candidate `{0}`")]
    UnknownCandidate(String),
    #[error("position {position} is outside 1..={n}")]
    PositionOutOfRange { position: usize, n: usize },
    #[error("fairness threshold {0} is outside [0, 1]")]
    ThresholdOutOfRange(f64),
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
}
