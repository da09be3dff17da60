//! Command-line front end for the peerlens simulator.

pub mod cli;
pub mod commands;
pub mod config;
pub mod format;

pub use cli::{run, Cli};
