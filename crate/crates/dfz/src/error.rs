use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode surfaced by the library. Parsers return typed errors
/// on arbitrary input; they never panic.
#[derive(Debug, Error, PartialEq)]
pub enum Error {
    // --- point cloud I/O ---
    #[error("malformed coordinate line {0}")]
    MalformedLine(usize),
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("bad magic bytes")]
    BadMagic,
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("invalid header: {0}")]
    InvalidHeader(String),
    #[error("missing vertex property {0:?}")]
    MissingProperty(&'static str),
    #[error("body ends before all declared elements")]
    TruncatedBody,
    #[error("non-finite coordinate in vertex {0}")]
    NonFiniteCoordinate(usize),

    // --- DEM / spectral ---
    #[error("resolution must be positive")]
    NonPositiveResolution,
    #[error("grid has zero cells")]
    EmptyGrid,
    #[error("cutoff ratio {0} outside [0, 1]")]
    InvalidCutoff(f64),

    // --- container ---
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u16),
    #[error("container ends before all declared fields")]
    Truncated,
    #[error("occupancy runs do not sum to the grid size")]
    InconsistentRuns,
    #[error("stored coefficient count does not match the kept set")]
    CoefficientCountMismatch,
    #[error("declared grid dimensions exceed the supported size")]
    GridTooLarge,

    // --- metrics ---
    #[error("DEM geometry or occupancy mismatch")]
    GridMismatch,
    #[error("no occupied cells to compare")]
    NoOccupiedCells,
    #[error("point count must be at least 1")]
    ZeroPoints,

    // --- synthesis ---
    #[error("invalid terrain spec: {0}")]
    InvalidSpec(String),
}
