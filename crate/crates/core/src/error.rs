use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("article pair {0} has no sentences on at least one side")]
    EmptyMatrix(String),
    #[error("measure {0} needs a resource that was not supplied: {1}")]
    MissingResource(&'static str, &'static str),
    #[error("cannot build tf-idf statistics from an empty corpus")]
    EmptyCorpus,
    #[error("vector for {token:?} has dimension {got}, expected {expected}")]
    DimensionMismatch { token: String, expected: usize, got: usize },
    #[error("vector for {0:?} contains a non-finite component")]
    NonFinite(String),
    #[error("invalid article pair: {0}")]
    InvalidPair(String),
    #[error("simple index {0} appears more than once")]
    DuplicateSimpleIndex(usize),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("pair ids differ: {0} vs {1}")]
    PairMismatch(String, String),
    #[error("no labels for the requested variant")]
    NoLabels,
    #[error("histogram needs at least one bin")]
    NoBins,
    #[error("unknown {kind}: {value:?}")]
    Parse { kind: &'static str, value: String },
}
