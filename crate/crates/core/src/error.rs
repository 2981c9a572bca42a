use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid law, rule or experiment configuration.
    #[error("configuration error: {0}")]
    Config(String),
    /// Argument outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A configuration the toolkit deliberately does not support.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    /// Enumeration exceeded its simplex budget.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// A Monte Carlo estimate could not reach the requested accuracy.
    #[error("precision not reached: {message} (achieved std error {achieved:.3e})")]
    Precision { message: String, achieved: f64 },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resource(_) | Error::Precision { .. } => 3,
            _ => 2,
        }
    }
}
