//! Command-line front end for `cubecomp`: argument definitions, the
//! subcommand runners and the closure-growth bench.

pub mod args;
pub mod bench;
pub mod commands;

pub use args::Cli;
pub use commands::{run, CliError, Status};
