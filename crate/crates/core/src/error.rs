use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity must be at least 2, got {0}")]
    InvalidArity(usize),

    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("rule not applicable at position {pos}: x{left} x{right} ({reason})")]
    RuleNotApplicable {
        pos: usize,
        left: usize,
        right: usize,
        reason: &'static str,
    },

    #[error("position {pos} out of range for word of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },

    #[error("malformed sequence: {0}")]
    MalformedSequence(String),

    #[error("malformed forest: {0}")]
    MalformedForest(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("duplicate entry at position {0}")]
    DuplicateEntry(usize),

    #[error("value {value} out of range 1..{n}")]
    ValueOutOfRange { value: usize, n: usize },

    #[error("expected a single tree, found {0} trees")]
    NotSingleTree(usize),

    #[error("diagonal ({0},{1}) is not in the partition")]
    DiagonalNotPresent(usize, usize),

    #[error("diagonal ({0},{1}) has maximal size and cannot be flipped up")]
    MaximalDiagonal(usize, usize),

    #[error("enumeration cap exceeded: {what} = {value} > {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_arity(k: usize) -> Result<()> {
    if k < 2 {
        Err(Error::InvalidArity(k))
    } else {
        Ok(())
    }
}
