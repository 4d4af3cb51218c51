//! Command-line front end for the blow-up laboratory.
//!
//! The binary wires the core crate's simulation, continuation, shooting,
//! and zero-number modules to a plain `key = value` configuration format,
//! writes every artifact as CSV into a per-run directory, and records a
//! manifest naming each file and check outcome. The `preset` subcommand
//! bundles the named experiments the test suite gates on.

pub mod cli;
pub mod config;
pub mod manifest;
pub mod presets;
pub mod run;

pub use config::LabConfig;
pub use manifest::{Check, CheckStatus, RunManifest};
