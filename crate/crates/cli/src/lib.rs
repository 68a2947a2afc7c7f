//! Command-line front-end for `charvar`: classification queries, orbit
//! experiments, integer censuses, verification suites and histograms, all
//! written as JSON lines.

pub mod args;
pub mod commands;
pub mod output;
pub mod parse;
pub mod suites;

pub use args::Cli;
pub use commands::{run, task_seeds, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
