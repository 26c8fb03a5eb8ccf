use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown blockage scenario id {0} (expected 1, 2 or 3)")]
    UnknownScenario(u8),

    #[error("non-monotonic sample timestamp: previous {prev} ms, got {got} ms (expected {expected} ms)")]
    NonMonotonicTimestamp { prev: u64, got: u64, expected: u64 },

    #[error("signal quality {0} outside [0, 10]")]
    QualityOutOfRange(f64),

    #[error("trace segments overlap: [{a_start}, {a_end}) ms and [{b_start}, {b_end}) ms")]
    OverlappingSegments {
        a_start: u64,
        a_end: u64,
        b_start: u64,
        b_end: u64,
    },

    #[error("segment [{start}, {end}) ms extends past trace end {duration} ms")]
    SegmentOutOfBounds { start: u64, end: u64, duration: u64 },

    #[error("mobility path has no waypoints")]
    EmptyPath,

    #[error("no candidate access point available for handoff")]
    NoCandidateAp,

    #[error("detector event out of order: {0}")]
    EventOutOfOrder(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: line {line}: {msg}")]
    TraceParse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("failed to read {path}: {source}")]
    ReadFile {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to write {path}: {source}")]
    WriteFile {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
