use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("fusion rules are not unital: {0}")]
    NonUnitalFusion(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("inconsistent module action: {0}")]
    InconsistentAction(String),
    #[error("{family}: block {block:?} is allowed by fusion but has no entries")]
    MissingBlock { family: String, block: [usize; 4] },
    #[error("{family}: block {block:?} is {rows}x{cols}")]
    BlockShape {
        family: String,
        block: [usize; 4],
        rows: usize,
        cols: usize,
    },
    #[error("{family}: block {block:?} is singular")]
    SingularBlock { family: String, block: [usize; 4] },
    #[error("{family}: entry {key} violates the unit normalization")]
    NotNormalized { family: String, key: String },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("element of dimension {found} used with algebra of dimension {expected}")]
    AlgebraMismatch { expected: usize, found: usize },
    #[error("decomposition failed: {0}")]
    DecompositionFailure(String),
    #[error("commutant spectrum stayed degenerate after {retries} retries")]
    DegenerateSpectrum { retries: usize },
    #[error("hom dimension estimate {value} is not close to an integer")]
    RankAmbiguous { value: f64 },
    #[error("grading mismatch: {0}")]
    GradingMismatch(String),
    #[error("assembled data failed validation: {0}")]
    PipelineInconsistent(String),
    #[error("pipeline found {pipeline} irreps, classical decomposition found {classical}")]
    MismatchedRank { pipeline: usize, classical: usize },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
