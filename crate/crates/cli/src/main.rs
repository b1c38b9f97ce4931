//! `infocausal`: exact evaluation of random-access-coding and inner-product
//! games from the command line.
//!
//! Exit codes: 0 success, 2 a bound was violated under `--expect-holds`,
//! 64 usage or input error, 65 an enumeration cap was exceeded.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_VIOLATED: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_RESOURCE: u8 = 65;

#[derive(Parser, Debug)]
#[command(
    name = "infocausal",
    version,
    about = "Exact information-causality game evaluator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a strategy in the random-access-coding game.
    Rac(RacArgs),
    /// Evaluate a box in the inner-product game and check the quadratic bounds.
    InnerProduct(InnerProductArgs),
    /// Check the quadratic bounds for a bias vector.
    Bounds(BoundsArgs),
    /// Check Shannon-entropy inequalities on seeded random joints or a file.
    EntropySuite(EntropySuiteArgs),
    /// Exhaustive search over deterministic classical strategies.
    Oracle(OracleArgs),
    /// Pyramid biases against the quadratic information-causality bound.
    TsirelsonDemo(DemoArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct RacArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// send-first:M, send-bit:J, majority, random, chsh:E, pyramid:E:L or
    /// mix:SPEC,W;SPEC,W;...
    #[arg(long)]
    pub strategy: String,
    /// JSON distribution over Alice's bits: an array of 2^n weights or a
    /// joint distribution over n bits.
    #[arg(long)]
    pub dist: Option<PathBuf>,
    /// Largest n the evaluator will enumerate.
    #[arg(long, default_value_t = 8)]
    pub cap: usize,
    /// Exit with status 2 if the information-causality verdict is "violated".
    #[arg(long)]
    pub expect_holds: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct InnerProductArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Correlator of an isotropic box on every input pair.
    #[arg(long, conflicts_with = "biases")]
    pub bias: Option<f64>,
    /// JSON array of target biases (2^n entries, or n for the unit strings)
    /// realized by the Gram construction.
    #[arg(long)]
    pub biases: Option<PathBuf>,
    /// JSON distribution over Alice's strings.
    #[arg(long)]
    pub dist: Option<PathBuf>,
    /// Restrict Bob's inputs to the strings of Hamming weight one.
    #[arg(long)]
    pub weight_one: bool,
    #[arg(long)]
    pub expect_holds: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// JSON array of biases.
    #[arg(long, conflicts_with = "strategy")]
    pub biases: Option<PathBuf>,
    /// Take the biases from this strategy's evaluation instead.
    #[arg(long)]
    pub strategy: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Alice's distribution for the generalized bound (uniform otherwise).
    #[arg(long)]
    pub dist: Option<PathBuf>,
    #[arg(long)]
    pub expect_holds: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct EntropySuiteArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random joints.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Check one joint distribution instead: X is every variable but the
    /// last two, Y the second to last, Z the last.
    #[arg(long)]
    pub dist: Option<PathBuf>,
    #[arg(long)]
    pub expect_holds: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Largest number of strategies to enumerate.
    #[arg(long, default_value_t = infocausal::strategies::DEFAULT_STRATEGY_CAP)]
    pub cap: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct DemoArgs {
    /// Correlator of each box in the pyramid.
    #[arg(long, default_value_t = 0.75)]
    pub bias: f64,
    /// Deepest pyramid level L.
    #[arg(long, default_value_t = 8)]
    pub cap: usize,
    #[command(flatten)]
    pub output: Output,
}

/// How a command ended, short of success.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Resource(String),
    Violated,
}

impl From<infocausal::Error> for Failure {
    fn from(e: infocausal::Error) -> Self {
        match e {
            infocausal::Error::Resource(msg) => Failure::Resource(msg),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let result = match cli.command {
        Command::Rac(a) => commands::rac(&a),
        Command::InnerProduct(a) => commands::inner_product(&a),
        Command::Bounds(a) => commands::bounds(&a),
        Command::EntropySuite(a) => commands::entropy_suite(&a),
        Command::Oracle(a) => commands::oracle(&a),
        Command::TsirelsonDemo(a) => commands::tsirelson_demo(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violated) => ExitCode::from(EXIT_VIOLATED),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_RESOURCE)
        }
    }
}
