use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Group(#[from] grpgeo::Error),
    #[error("{0}")]
    Usage(String),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use grpgeo::Error as E;
        match self {
            CliError::Group(
                E::BudgetExceeded { .. } | E::LatticeCapExceeded(_) | E::WidthCapExceeded { .. },
            ) => EXIT_BUDGET,
            CliError::Group(E::CharacterizationDisagreement(_)) => EXIT_FAILED,
            _ => EXIT_USAGE,
        }
    }
}
