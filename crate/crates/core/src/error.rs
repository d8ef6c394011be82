use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("genus must be at least 1, got {0}")]
    InvalidGenus(u32),

    #[error("no built-in twist table for genus {0} (supported: {min}..={max})", min = crate::mcg::MIN_TABLE_GENUS, max = crate::mcg::MAX_TABLE_GENUS)]
    UnsupportedGenus(u32),

    #[error("generator index {index} out of range for genus {genus} (expected 1..={max})")]
    GeneratorOutOfRange { index: i64, genus: u32, max: usize },

    #[error("genus mismatch: {left} vs {right}")]
    GenusMismatch { left: u32, right: u32 },

    #[error("degree cap must be at least 1, got {0}")]
    InvalidCap(usize),

    #[error("degree cap mismatch: {left} vs {right}")]
    CapMismatch { left: usize, right: usize },

    #[error("degree cap {cap} too large for rank {rank} (at most {max})")]
    CapTooLarge { cap: usize, rank: usize, max: usize },

    #[error("parse error at column {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown twist `{name}` for genus {genus}")]
    UnknownTwist { name: String, genus: u32 },

    #[error("`{0}` is not the name of an essential curve")]
    NotACurve(String),

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("generator image of length {len} exceeds the limit of {limit} letters")]
    ImageTooLong { len: usize, limit: usize },

    #[error("twist table line {line}: {msg}")]
    Table { line: usize, msg: String },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
