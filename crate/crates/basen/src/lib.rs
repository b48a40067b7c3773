//! Command-line scanner and result files for `basen-core`.

pub mod cli;
pub mod error;
pub mod ff;
pub mod record;
pub mod scan;
pub mod stats;

pub use error::CliError;
