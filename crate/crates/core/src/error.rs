use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A formula was evaluated outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Device or layout geometry is inconsistent.
    #[error("geometry error: {0}")]
    Geometry(String),
    /// A required input is missing or out of range.
    #[error("input error: {0}")]
    Input(String),
    #[error("size error: {what} is {got}, limit is {limit}")]
    Size {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    /// A numeric solve found no consistent answer.
    #[error("solver error: {message}")]
    Solver {
        message: String,
        diagnostics: Vec<String>,
    },
    /// The requested design point cannot be met.
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("unsupported structure: {0}")]
    Unsupported(String),
    #[error("netlist error: {0}")]
    Netlist(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Geometry(_) => "geometry",
            Error::Input(_) => "input",
            Error::Size { .. } => "size",
            Error::Solver { .. } => "solver",
            Error::Infeasible(_) => "infeasible",
            Error::Unsupported(_) => "unsupported",
            Error::Netlist(_) => "netlist",
            Error::Parse(_) => "parse",
        }
    }

    pub fn diagnostics(&self) -> &[String] {
        match self {
            Error::Solver { diagnostics, .. } => diagnostics,
            _ => &[],
        }
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn solver(msg: impl Into<String>, diagnostics: Vec<String>) -> Self {
        Error::Solver {
            message: msg.into(),
            diagnostics,
        }
    }
}
