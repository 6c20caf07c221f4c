//! Subcommand implementations and configuration for the `wadec` binary.

pub mod commands;
pub mod config;
