//! Library side of the `collatz-matrix` command: renderings, reference
//! tables, checkpointed scans and verification suites.

pub mod error;
pub mod info;
pub mod render;
pub mod scan;
pub mod tables;
pub mod verify;

pub use error::{CliError, CliResult, EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};
