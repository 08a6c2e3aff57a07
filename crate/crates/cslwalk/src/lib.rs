//! Std companion to `cslwalk-core`: thread-parallel Monte Carlo and ensemble
//! drivers, CSV/JSON writers and the `cslwalk` command-line front end.

pub mod cli;
pub mod format;
pub mod output;
pub mod parallel;

pub use cli::{run, CliError};
