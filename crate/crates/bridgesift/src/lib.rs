//! File formats, configuration, parallel sweeps and the command-line front end
//! for [`bridgesift_core`].

pub mod cli;
pub mod config;
pub mod csvio;
mod error;
pub mod manifest;
pub mod report;
pub mod sweep;

pub use error::{CliError, Result};
