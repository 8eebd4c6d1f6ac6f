//! Command-line tools and the HTTP session service for `apart_core`.

pub mod commands;
pub mod render;
pub mod server;

pub use commands::{load_lts, run, Cli, CmdOutput, Command};
