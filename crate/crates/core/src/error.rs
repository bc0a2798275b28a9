use thiserror::Error;

/// Errors raised by every operation in this crate.
///
/// Variants fall into two families: precondition violations (bad input,
/// out-of-range constants) and [`Error::ResourceLimit`], which signals that a
/// configured node budget or size cap was exhausted before an exact answer
/// was reached.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("not a bijection on 1..{n}: {detail}")]
    NotABijection { n: usize, detail: String },
    #[error("pattern must be nonempty")]
    EmptyPattern,
    #[error("sum operands must be nonempty")]
    EmptyOperand,
    #[error("skeleton has length {skeleton} but {blocks} blocks were given")]
    ArityMismatch { skeleton: usize, blocks: usize },
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("not a permutation matrix: {0}")]
    NotPermutationMatrix(String),
    #[error("cell ({row}, {col}) lies outside a {rows}x{cols} matrix")]
    CellOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("resource limit reached: {0}")]
    ResourceLimit(String),
    #[error("minimum row weight s = 0 makes the row count unbounded")]
    ZeroRowWeight,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("hypothesis unverified: {0}")]
    HypothesisUnverified(String),
    #[error("pattern is not {0}-blockable")]
    NotBlockable(usize),
    #[error("denominator is not positive: {0}")]
    DenominatorNonpositive(String),
    #[error("bad constants: {0}")]
    BadConstants(String),
    #[error("missing table entry for n = {0}")]
    MissingTableEntry(u64),
}

impl Error {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
