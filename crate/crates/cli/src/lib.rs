//! File formats, configuration, reports and commands for the `musica`
//! command-line tool. The image processing itself lives in `musica-core`.

pub mod args;
pub mod commands;
pub mod config;
mod error;
pub mod imageio;
pub mod report;

pub use error::{Error, Result};
