//! Command-line front end for `delay_logistic_core`: argument handling,
//! report rendering and the CSV/JSON file formats.

pub mod cli;
pub mod formats;

use delay_logistic_core::jury::JuryError;
use delay_logistic_core::sweep::SweepError;
use delay_logistic_core::PolynomialError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad arguments or inputs; exit code 1.
    #[error("{0}")]
    Usage(String),
    /// A numerical routine failed; exit code 2.
    #[error("{0}")]
    Numeric(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => cli::EXIT_USAGE,
            _ => cli::EXIT_FAILURE,
        }
    }
}

impl From<PolynomialError> for CliError {
    fn from(e: PolynomialError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::InvalidTolerance(_) | SweepError::InvalidRate(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<JuryError> for CliError {
    fn from(e: JuryError) -> Self {
        CliError::Numeric(e.to_string())
    }
}
