use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("column {0} has zero norm")]
    ZeroColumn(usize),

    #[error("sketch has no columns")]
    EmptySketch,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Shape(String),

    #[error("matrix entry at ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("requested {requested} samples without replacement from {available} columns")]
    TooManySamples { requested: usize, available: usize },

    #[error("column {column} has norm {norm}, expected unit norm")]
    NotNormalized { column: usize, norm: f64 },

    #[error("matrix is identically zero")]
    ZeroMatrix,

    #[error("k = {k} exceeds numerical rank {rank}")]
    RankDeficientK { k: usize, rank: usize },

    #[error("target dimension {p} is invalid for ambient dimension {ambient}")]
    BadTargetDim { p: usize, ambient: usize },

    #[error("arcs overlap: {0}")]
    ArcOverlap(String),

    #[error("arc lengths must be positive with tau1 + tau2 < pi (got {tau1}, {tau2})")]
    BadArcLengths { tau1: f64, tau2: f64 },

    #[error("{0}")]
    BadDims(String),

    #[error("beta = {beta} is below the required minimum {min}")]
    BadBeta { beta: f64, min: f64 },

    #[error("arc lengths violate tau1 + tau2 < pi (got {tau1}, {tau2})")]
    BadArcs { tau1: f64, tau2: f64 },

    #[error("{0}")]
    BadParams(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Variant name, used by the CLI's one-line diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ZeroColumn(_) => "ZeroColumn",
            Error::EmptySketch => "EmptySketch",
            Error::Parse { .. } => "ParseError",
            Error::Shape(_) => "ShapeError",
            Error::NonFinite { .. } => "NonFinite",
            Error::TooManySamples { .. } => "TooManySamples",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::ZeroMatrix => "ZeroMatrix",
            Error::RankDeficientK { .. } => "RankDeficientK",
            Error::BadTargetDim { .. } => "BadTargetDim",
            Error::ArcOverlap(_) => "ArcOverlap",
            Error::BadArcLengths { .. } => "BadArcLengths",
            Error::BadDims(_) => "BadDims",
            Error::BadBeta { .. } => "BadBeta",
            Error::BadArcs { .. } => "BadArcs",
            Error::BadParams(_) => "BadParams",
            Error::Io(_) => "IoError",
        }
    }
}
