//! `lars`: run stream-reasoning programs, compare the incremental engine
//! with the naive evaluator, and benchmark both.

mod bench;
mod check;
mod inputs;
mod output;
mod run;

use std::ops::Range;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lars_core::workload::Scenario;

#[derive(Parser, Debug)]
#[command(
    name = "lars",
    version,
    about = "Incremental reasoning over streams with sliding windows"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a program over a stream, printing the output at every tick.
    Run(RunArgs),
    /// Run both evaluators and compare their outputs tick by tick.
    Check(CheckArgs),
    /// Time both evaluators on synthetic streams and print CSV.
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone)]
struct Inputs {
    /// Program file.
    #[arg(long)]
    program: Option<PathBuf>,
    /// Stream file.
    #[arg(long, conflicts_with = "stdin")]
    stream: Option<PathBuf>,
    /// Read the stream from standard input, one line at a time.
    #[arg(long)]
    stdin: bool,
    /// Background data file.
    #[arg(long)]
    background: Option<PathBuf>,
    /// Named integer constant used in the program, as `name=value`.
    #[arg(long = "const", value_name = "NAME=VALUE", value_parser = parse_const)]
    consts: Vec<(String, i64)>,
    /// Drop input atoms no window can see any more.
    #[arg(long)]
    gc: bool,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, value_enum, default_value_t = EngineChoice::Incremental)]
    engine: EngineChoice,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print per-tick counters to standard error.
    #[arg(long)]
    telemetry: bool,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Check random instances for the given seeds (`N` or `A..B`) instead
    /// of the given files.
    #[arg(long, value_name = "SEEDS", value_parser = parse_seeds)]
    fuzz: Option<Range<u64>>,
    /// Disable the new-grounding restriction in the incremental engine.
    #[arg(long)]
    no_ssne: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Scenario to run.
    #[arg(value_parser = parse_scenario)]
    scenario_name: Option<Scenario>,
    #[arg(long, value_parser = parse_scenario, conflicts_with = "scenario_name")]
    scenario: Option<Scenario>,
    /// Window sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [10u64, 100])]
    windows: Vec<u64>,
    /// Atoms per tick, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [100usize])]
    rates: Vec<usize>,
    /// Ticks per run.
    #[arg(long, default_value_t = 100)]
    ticks: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run only one evaluator.
    #[arg(long, value_enum)]
    engine: Option<EngineChoice>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum EngineChoice {
    Incremental,
    Naive,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Csv,
}

fn parse_const(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or("expected NAME=VALUE")?;
    let v = v.trim().parse().map_err(|e| format!("`{v}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn parse_seeds(s: &str) -> Result<Range<u64>, String> {
    let num = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("`{x}`: {e}"));
    match s.split_once("..") {
        Some((a, b)) => Ok(num(a)?..num(b)?),
        None => Ok(0..num(s)?),
    }
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    s.parse()
}

/// Why a command failed; decides the exit code.
#[derive(Debug)]
enum Failure {
    /// Unreadable or malformed input.
    Input(anyhow::Error),
    /// The engine rejected the input while running.
    Runtime(anyhow::Error),
    /// `check` found different outputs.
    Divergence,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Divergence => 1,
            Failure::Input(_) => 2,
            Failure::Runtime(_) => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run::run(&a),
        Command::Check(a) => check::check(&a),
        Command::Bench(a) => bench::bench(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(e) | Failure::Runtime(e) => eprintln!("error: {e:#}"),
                Failure::Divergence => {}
            }
            ExitCode::from(f.code())
        }
    }
}
