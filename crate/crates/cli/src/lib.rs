//! File formats, report types and subcommands for the `conjloc` binary.
//!
//! Every subcommand is a pure function of its input files and flags: the same
//! invocation always writes the same bytes.

pub mod commands;
pub mod csv;
pub mod io;
pub mod report;

use conjloc_core::Error;
use thiserror::Error;

/// Front-end failures, split by exit status.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad files or flags: exit status 1.
    #[error("input error: {0}")]
    Input(String),
    /// A numerical routine broke down: exit status 2.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::DegenerateFrame(_)
            | Error::NotDivisible
            | Error::ZeroPolynomial
            | Error::ConstantPolynomial
            | Error::DegenerateDraw { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}
