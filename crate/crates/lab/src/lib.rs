//! File formats, the experiment suite and the command line for `potlab-core`.

pub mod cli;
pub mod config;
pub mod formats;
pub mod report;
pub mod svg;
pub mod verify;

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum LabError {
    /// Bad arguments, descriptors or configuration.
    Usage(String),
    /// A computation failed or did not converge.
    Compute(String),
    /// Reading or writing a file failed.
    Io(String),
}

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Compute(_) => 1,
            LabError::Usage(_) | LabError::Io(_) => 2,
        }
    }
}

impl fmt::Display for LabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabError::Usage(m) => write!(f, "{m}"),
            LabError::Compute(m) => write!(f, "{m}"),
            LabError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for LabError {}

impl From<potlab_core::Error> for LabError {
    fn from(e: potlab_core::Error) -> Self {
        if e.is_usage() {
            LabError::Usage(e.to_string())
        } else {
            LabError::Compute(e.to_string())
        }
    }
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}
