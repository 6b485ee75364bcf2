use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("entry {0} occurs more than once")]
    RepeatedEntry(u32),

    #[error("entries must be positive integers")]
    NonPositiveEntry,

    #[error("operation requires a nonempty permutation")]
    Empty,

    #[error("ground set is not {{1..{0}}}")]
    NotStandard(usize),

    #[error("set has {set} elements but the permutation has length {len}")]
    SizeMismatch { set: usize, len: usize },

    #[error("value {0} is not in the ground set")]
    NotSubset(u32),

    #[error("entry {0} does not occur in the permutation")]
    MissingEntry(u32),

    #[error("ground sets overlap at {0}")]
    OverlappingGroundSets(u32),

    #[error("invalid block structure {blocks:?} for a pattern of length {len}")]
    InvalidBlocks { blocks: Vec<usize>, len: usize },

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("{name} = {value} is out of range ({expected})")]
    OutOfRange {
        name: &'static str,
        value: usize,
        expected: String,
    },

    #[error("unsupported pattern set: {0}")]
    Unsupported(String),
}
