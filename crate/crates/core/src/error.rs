use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("self-loop on node `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge `{0}`-`{1}`")]
    DuplicateEdge(String, String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("node `{id}` has peak {peak}; peaks must be at least 1")]
    NonPositivePeak { id: String, peak: i64 },
    #[error("edge `{u}`-`{v}` has capacity {cap}; capacities must be at least 1")]
    NonPositiveCapacity { u: String, v: String, cap: i64 },
    #[error("edge `{0}`-`{1}` has a finite capacity; node expansion needs an uncapacitated instance")]
    UnsupportedForExpansion(String, String),
    #[error("maximum matching needs unit peaks; node `{id}` has peak {peak}")]
    NonUnitPeak { id: String, peak: u32 },
    #[error("invalid flow network: {0}")]
    InvalidNetwork(String),
    #[error("flow is not maximum: {0}")]
    NotMaximum(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("instance too large for the oracle: size {expanded} exceeds the limit of {limit}")]
    TooLarge { expanded: u64, limit: u64 },
    #[error("profiles are defined over different agent sets")]
    MismatchedAgents,
    #[error("deviation touches `{0}`, who is not in the coalition")]
    OutsideCoalition(String),
}
