//! Experiment harness for the tensor RPCA toolkit: Monte-Carlo validation of
//! the concentration behavior, certificate success rates, and exact-recovery
//! phase grids, with reproducible CSV output.

pub mod config;
pub mod csv;
pub mod experiments;
pub mod runner;
pub mod stats;

/// Process exit codes shared by every subcommand.
pub mod exit_code {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const IO: i32 = 2;
    pub const NUMERICAL: i32 = 3;
}

/// Classified CLI error carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit_code::USAGE,
            CliError::Io(_) => exit_code::IO,
            CliError::Numerical(_) => exit_code::NUMERICAL,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Numerical(m) => m,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

impl From<trpca_core::Error> for CliError {
    fn from(e: trpca_core::Error) -> Self {
        use trpca_core::Error::*;
        match e {
            Io(_) | BadMagic | BadVersion(_) | DimensionOverflow | TruncatedPayload { .. } => {
                CliError::Io(e.to_string())
            }
            InvalidParameter(_)
            | InvalidShape { .. }
            | IndexOutOfRange { .. }
            | DuplicateIndex(..) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}
