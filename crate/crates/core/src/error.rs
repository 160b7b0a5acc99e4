use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("rank error: {0}")]
    Rank(String),

    #[error("singular basis: the given vectors are linearly dependent")]
    SingularBasis,

    #[error("degenerate simplex: vertices are affinely dependent")]
    DegenerateSimplex,

    #[error("not unimodular: determinant is {0}, expected 1")]
    NotUnimodular(String),

    #[error("enumeration budget exceeded: {what} needs {needed}, cap is {cap}")]
    Budget { what: String, needed: String, cap: u64 },

    #[error("window error: {0}")]
    Window(String),

    #[error("oracle cap exceeded: {size} points, cap is {cap}")]
    OracleCap { size: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported system: {0}")]
    UnsupportedSystem(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code used by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "E_DIMENSION",
            Error::Rank(_) => "E_RANK",
            Error::SingularBasis => "E_SINGULAR_BASIS",
            Error::DegenerateSimplex => "E_DEGENERATE",
            Error::NotUnimodular(_) => "E_NOT_UNIMODULAR",
            Error::Budget { .. } => "E_BUDGET",
            Error::Window(_) => "E_WINDOW",
            Error::OracleCap { .. } => "E_ORACLE_CAP",
            Error::Precondition(_) => "E_PRECONDITION",
            Error::UnsupportedSystem(_) => "E_UNSUPPORTED_SYSTEM",
            Error::Parse(_) => "E_PARSE",
        }
    }
}
