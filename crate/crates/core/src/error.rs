use thiserror::Error;

/// Errors raised by the packing harness, the heuristic catalog and the
/// instance generators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid heuristic parameters for {heuristic}: {reason}")]
    InvalidParameters { heuristic: String, reason: String },

    #[error("cannot parse heuristic `{input}`: {reason}")]
    ParseHeuristic { input: String, reason: String },

    #[error("cannot parse distribution `{input}`: {reason}")]
    ParseDistribution { input: String, reason: String },

    #[error(
        "heuristic {heuristic} produced non-finite score {value} for item #{item_index} \
         (size {item}) on candidate {candidate} of {candidates:?}"
    )]
    NonFiniteScore {
        heuristic: String,
        item_index: usize,
        item: u32,
        candidates: Vec<u32>,
        candidate: usize,
        value: f64,
    },

    #[error("heuristic {heuristic} returned {got} scores for {expected} candidates")]
    ScoreLength {
        heuristic: String,
        expected: usize,
        got: usize,
    },

    #[error("no feasible bin for item of size {item} (pool of {pool} bins exhausted)")]
    PoolExhausted { item: u32, pool: usize },

    #[error("{heuristic} on instance {instance}: {source}")]
    InRun {
        heuristic: String,
        instance: String,
        source: Box<Error>,
    },

    #[error("malformed instance file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
