//! Front end for the `ukruskal` binary: argument-level parsing helpers, size
//! profiles and the property suite.

pub mod inputs;
pub mod profile;
pub mod suite;

use ukruskal::Error;

/// Exit status of every subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Failure = 1,
    Input = 2,
}

/// An error carrying the exit status it maps to.
#[derive(Debug)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            status: Status::Input,
            message: message.into(),
        }
    }

    pub fn failure(message: impl Into<String>) -> Self {
        CliError {
            status: Status::Failure,
            message: message.into(),
        }
    }
}

/// Unparsable input exits with 2, everything else the library rejects with 1.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => CliError::input(e.to_string()),
            _ => CliError::failure(e.to_string()),
        }
    }
}
