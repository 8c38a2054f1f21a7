use thiserror::Error;

/// Errors for the whole crate. Domain errors (bad parameters, degenerate
/// constructions, violated preconditions) are distinguished from I/O and
/// format errors so the CLI can map them to different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("word length {got} does not match code length {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("length {got} exceeds the exhaustive-search guard {max}")]
    LengthGuard { max: usize, got: usize },

    #[error("invalid k = {0}: need an odd k > 11 with k mod 11 != 0")]
    InvalidK(u64),

    #[error("invalid vertex pair ({u}, {v})")]
    InvalidSlot { u: usize, v: usize },

    #[error("vertex {v} out of range 1..={n}")]
    InvalidVertex { v: usize, n: usize },

    #[error("invalid slot index {index} for n = {n}")]
    InvalidSlotIndex { index: usize, n: usize },

    #[error("map is not a bijection on 1..={0}")]
    InvalidPermutation(usize),

    #[error("iterated-degree depth {got} exceeds guard {max}")]
    SignatureDepth { max: usize, got: usize },

    #[error("canonical order requested for an unresolved partition")]
    Unresolved,

    #[error("degree window degenerate for n = {n}: {detail}")]
    DegenerateWindow { n: usize, detail: String },

    #[error("threshold set undefined for n = {n}: {detail}")]
    InvalidThresholds { n: usize, detail: String },

    #[error("degree sum is odd; no graph realizes this sequence count")]
    OddDegreeSum,

    #[error("mean degree ratio mu = {0} outside (0, 1)")]
    DegenerateMu(f64),

    #[error("schedule has no threshold <= n = {0}")]
    NoScheduleEntry(u64),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("modulus {0} rejected: need an odd m >= 3")]
    InvalidModulus(u64),

    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),

    #[error("hard invariant violated: {0}")]
    InvariantViolation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// CLI exit code: 1 for domain errors, 2 for I/O and format errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
