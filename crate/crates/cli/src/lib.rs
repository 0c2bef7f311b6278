//! Command line front end and HTTP game service for the `honeybee` engine.

pub mod commands;
pub mod service;
mod source;

pub use commands::{run, Cli, CliError};
pub use source::{load_game_source, GameSource};
