use thiserror::Error;

use crate::word::Word;

/// Failures shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("word length {len} exceeds the oracle horizon {horizon}")]
    HorizonExceeded { len: usize, horizon: usize },
    #[error("exact count does not fit the requested integer width")]
    Overflow,
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("graph has no cycle")]
    NoCycle,
    #[error("no strongly connected component with an edge at this truncation")]
    NoComponent,
    #[error("graph is not irreducible: {0}")]
    Reducible(String),
    #[error("iteration did not converge: {0}")]
    NonConvergence(String),
    #[error("interval endpoints {0} and {1} are closer than the tolerance but not provably equal")]
    ToleranceCollision(f64, f64),
    #[error("language oracle was not built from a generator")]
    NotCoded,
    #[error("decomposition cannot factor {0}")]
    FactorizeIncomplete(Word),
    #[error("no connector of length at most {t} joins {left} to {right}")]
    NoConnector { left: Word, right: Word, t: usize },
    #[error("no word satisfies the selection bounds")]
    EmptySelection,
    #[error("automaton exploration exceeded {0} states")]
    StateLimit(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
