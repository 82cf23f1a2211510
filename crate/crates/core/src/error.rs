use thiserror::Error;

/// Result alias used across the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures reported by the solvers and the file layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument out of domain: {what} = {value}")]
    Domain { what: &'static str, value: f64 },
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("invalid boundary constants: {0}")]
    InvalidBoundary(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("invalid spectrum{}: {reason}", row.map(|r| format!(" (row {r})")).unwrap_or_default())]
    InvalidSpectrum { row: Option<usize>, reason: String },
    #[error("non-finite state during integration at x = {x}")]
    NonFinite { x: f64 },
    #[error("integration step underflow ({steps} steps on an interval of length {length})")]
    StepUnderflow { steps: usize, length: f64 },
    #[error("no eigenvalue located in bracket n = {0}")]
    MissedRoot(i64),
    #[error("expected {expected} eigenvalues in the window, located {found}")]
    RootCount { expected: usize, found: usize },
    #[error("degenerate eigenfunction at lambda = {lambda}: {reason}")]
    DegenerateEigenfunction { lambda: f64, reason: String },
    #[error("singular kernel system at x = {x} (condition estimate {condition:e})")]
    SingularSystem { x: f64, condition: f64 },
    #[error("function has zero weighted norm")]
    ZeroFunction,
    #[error("degenerate system: {0}")]
    DegenerateSystem(String),
    #[error("verification failed: {0}")]
    CheckFailed(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps the error with the pipeline stage that produced it.
    pub fn at_stage(self, stage: &'static str) -> Error {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "Domain",
            Error::InvalidWeight(_) => "InvalidWeight",
            Error::InvalidBoundary(_) => "InvalidBoundary",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::InvalidPotential(_) => "InvalidPotential",
            Error::InvalidSpectrum { .. } => "InvalidSpectrum",
            Error::NonFinite { .. } => "NonFinite",
            Error::StepUnderflow { .. } => "StepUnderflow",
            Error::MissedRoot(_) => "MissedRoot",
            Error::RootCount { .. } => "RootCount",
            Error::DegenerateEigenfunction { .. } => "DegenerateEigenfunction",
            Error::SingularSystem { .. } => "SingularSystem",
            Error::ZeroFunction => "ZeroFunction",
            Error::DegenerateSystem(_) => "DegenerateSystem",
            Error::CheckFailed(_) => "CheckFailed",
            Error::Config(_) => "Config",
            Error::Parse { .. } => "Parse",
            Error::Io { .. } => "Io",
            Error::Stage { source, .. } => source.kind(),
        }
    }

    /// True for input and configuration problems, false for numeric failures.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Stage { source, .. } => source.is_input_error(),
            Error::Domain { .. }
            | Error::InvalidWeight(_)
            | Error::InvalidBoundary(_)
            | Error::InvalidGrid(_)
            | Error::InvalidPotential(_)
            | Error::InvalidSpectrum { .. }
            | Error::Config(_)
            | Error::Parse { .. }
            | Error::Io { .. } => true,
            _ => false,
        }
    }
}
