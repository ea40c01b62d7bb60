//! Command-line front end: file formats, rendering and subcommands.

pub mod commands;
pub mod formats;
pub mod render;

use perazzo_core::AlgebraError;
use thiserror::Error;

pub use commands::{run, Cli, Outcome};
pub use render::{render_betti_table, render_report, OutputFormat};

/// Everything that stops a command before it produces a result. All of
/// these exit with status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
}

pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
