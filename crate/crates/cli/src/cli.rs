//! Argument surface of the `blowuplab` binary.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "blowuplab",
    version,
    about = "Radial blow-up laboratory: u_t = \u{394}u + e^u on a ball",
    long_about = None
)]
pub struct Cli {
    /// Config file (`key = value` lines); defaults apply when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output directory; each run writes into <OUT>/<run-name>/.
    /// Falls back to $BLOWUPLAB_OUT, then ./runs.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Overrides the config seed.
    #[arg(long, global = true, value_name = "INT")]
    pub seed: Option<u64>,

    /// Also write a gnuplot script plotting the run's CSV files.
    #[arg(long, global = true)]
    pub emit_gnuplot: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolution run from the configured initial data, blow-up detection on.
    Simulate,
    /// Truncation-family continuation past blow-up.
    Continue,
    /// One profile-family shot from the configured center value.
    Shoot,
    /// Backward shots over the configured alpha list, tail fits per alpha.
    MapAlpha,
    /// Brackets the threshold tail constant for the forward family.
    BracketCsharp,
    /// Runs to blow-up and classifies the rate (type I / type II).
    Classify,
    /// Fits the final-time profile models on the continuation limit.
    ProfileFit,
    /// Zero number of the initial data, optionally against a reference.
    Zeros,
    /// Seeded zero-number monotonicity harness for linear flows.
    HarnessSturm,
    /// Runs a named preset experiment (see `preset list`).
    Preset {
        /// Preset name, or `list` to print the available names.
        name: String,
    },
}

impl Command {
    /// Directory name of the run under the output root.
    pub fn run_name(&self) -> String {
        match self {
            Command::Simulate => "simulate".into(),
            Command::Continue => "continue".into(),
            Command::Shoot => "shoot".into(),
            Command::MapAlpha => "map-alpha".into(),
            Command::BracketCsharp => "bracket-csharp".into(),
            Command::Classify => "classify".into(),
            Command::ProfileFit => "profile-fit".into(),
            Command::Zeros => "zeros".into(),
            Command::HarnessSturm => "harness-sturm".into(),
            Command::Preset { name } => format!("preset-{name}"),
        }
    }
}
