//! Library side of the `digispace` command: subcommands, the reference
//! experiments, randomized checks and SVG plots.

pub mod checks;
pub mod commands;
pub mod error;
pub mod experiments;
pub mod svg;

pub use error::CliError;
