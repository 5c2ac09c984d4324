use thiserror::Error;

use crate::space::Point;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("signature mismatch")]
    SignatureMismatch,
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("digit {digit} out of range at level {level} (radix {radix})")]
    DigitOutOfRange { level: usize, digit: u32, radix: u32 },
    #[error("empty clopen set")]
    EmptySet,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("not a homeomorphism: {0}")]
    NotAHomeomorphism(String),
    #[error("incompatible tails: a level-{0} cylinder cannot be exchanged with a level-{1} cylinder")]
    IncompatibleTails(usize, usize),
    #[error("clopen sets cannot be exchanged by prefix replacement: {0}")]
    NotExchangeable(String),
    #[error("unresolvable at depth {0}")]
    Unresolvable(usize),
    #[error("indeterminate at depth {0}")]
    Indeterminate(usize),
    #[error("not exactly {0}-periodic")]
    NotPeriodic(usize),
    #[error("periodic point of period {period} found: {point}")]
    PeriodicPoint { period: usize, point: Point },
    #[error("search cap exceeded: {0}")]
    CapExceeded(String),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("not canonical: {0}")]
    NotCanonical(String),
}
