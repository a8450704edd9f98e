use thiserror::Error;

/// Errors raised by the cone calculus.
///
/// Variants fall into three families that the CLI maps to exit codes:
/// invalid input (1), numerical failure or insufficient coverage (2), and
/// Fredholm walls or indeterminate verdicts (3).
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("invalid rate {rate}: {reason}")]
    InvalidRate { rate: f64, reason: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("Hölder exponents p={p}, q={q} are not conjugate")]
    Exponent { p: f64, q: f64 },
    #[error("input is not a discrete eigenfunction: relative residual {residual:.3e} > {tol:.3e}")]
    InvalidMode { residual: f64, tol: f64 },
    #[error("link is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("spectral coverage {available} is below the required eigenvalue bound {required}")]
    Coverage { required: f64, available: f64 },
    #[error("numerical failure in {what}: residual {residual:.3e}")]
    NumericalFailure { what: String, residual: f64 },
    #[error("no solution: branch selection is obstructed (relative residual {residual:.3e})")]
    Solvability { residual: f64 },
    #[error("1-form is not closed: residual {residual:.3e}")]
    Closedness { residual: f64 },
    #[error("radial integral diverges: {0}")]
    Integrability(String),
    #[error("weight {beta} of cone {cone} lies on the exceptional weight {alpha}")]
    Wall { cone: usize, beta: f64, alpha: f64 },
    #[error("indeterminate decay verdict: residual margin {margin:.3} below threshold {threshold}")]
    Indeterminate { margin: f64, threshold: f64 },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Coverage { .. }
            | Error::NumericalFailure { .. }
            | Error::Solvability { .. }
            | Error::Integrability(_) => 2,
            Error::Wall { .. } | Error::Indeterminate { .. } => 3,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
