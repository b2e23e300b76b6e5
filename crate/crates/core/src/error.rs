use std::io;

/// Errors produced while building, querying or persisting an index.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("input contains the reserved byte 0 at offset {offset}")]
    InputContainsZeroByte { offset: usize },

    #[error("text must contain at least one symbol")]
    EmptyText,

    #[error("invalid attractor: {0}")]
    InvalidAttractor(String),

    /// No window around any attractor position matched an unmarked block.
    /// The candidate set is not an attractor of the text (or, without source
    /// verification, a fingerprint collision hid the true source).
    #[error("no source occurrence for unmarked block {index} at level {level} (text offset {start}, length {len})")]
    SourceNotFound {
        level: usize,
        index: usize,
        start: usize,
        len: usize,
    },

    #[error("range {start}..{end} is out of bounds for a text of length {len}")]
    PositionOutOfRange { start: usize, end: usize, len: usize },

    #[error("pattern contains the reserved symbol 0 at offset {offset}")]
    PatternContainsReservedSymbol { offset: usize },

    #[error("pattern is empty")]
    EmptyPattern,

    #[error("no collision-free fingerprint function found after {attempts} attempts")]
    FingerprintSelectionFailed { attempts: u32 },

    #[error("text of length {n} exceeds the brute-force validator cap of {max}")]
    TooLargeForValidator { n: usize, max: usize },

    #[error("bad parameters: {0}")]
    BadParameters(String),

    #[error("not an index file (bad magic)")]
    BadMagic,

    #[error("unsupported index format version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("index checksum mismatch: stored {stored:#018x}, computed {computed:#018x}")]
    ChecksumMismatch { stored: u64, computed: u64 },

    #[error("corrupt index file: {0}")]
    Corrupt(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
