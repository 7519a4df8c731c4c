//! Command line for 60 GHz client association.
//!
//! Verbs: `generate` (scenario files), `solve` (one method on one scenario),
//! `experiment` (the three benefit/runtime sweeps as CSV), `verify`
//! (re-checks the optimality certificate of a saved run).
//!
//! Exit codes: 0 success; 2 certificate failure; 3 infeasibility or oracle
//! size guard; 1 anything else.

mod epsilon;
mod experiment;
mod generate;
mod runfile;
mod solve;
mod verify;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "mmwave-assoc",
    version,
    about = "Client association for 60 GHz access networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a scenario file: access points on a line or grid, clients
    /// uniform over the coverage discs, demands uniform up to 100 Mbit/s.
    Generate(GenerateArgs),
    /// Run one association method on a scenario and report a run record.
    Solve(SolveArgs),
    /// Run a sweep (benefit vs clients, benefit vs access points, or
    /// runtime vs size) and write one CSV row per point, method, and seed.
    Experiment(ExperimentArgs),
    /// Re-check the epsilon-CS certificate stored in a solve output file.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Access point count.
    #[arg(long)]
    m: usize,
    /// Client count (at least m).
    #[arg(long)]
    n: usize,
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Radio parameter overrides as a JSON file (defaults are the 60 GHz
    /// constants: 1200 MHz bandwidth, 0.1 mW, -134 dBm/MHz noise, 5 mm
    /// wavelength, 1 m reference distance).
    #[arg(long)]
    radio_config: Option<std::path::PathBuf>,
    /// Path-loss exponent override.
    #[arg(long)]
    eta: Option<f64>,
    /// Place access points on a square grid instead of a line.
    #[arg(long)]
    grid: bool,
    /// Resample any demand below this rate (bit/s).
    #[arg(long)]
    demand_floor_bps: Option<f64>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Scenario file produced by `generate`.
    scenario: std::path::PathBuf,
    /// Association method: auction, bruteforce, flow, rssi, or random.
    #[arg(long, default_value = "auction")]
    method: mmwave_assoc::Method,
    /// Bid increment as an exact rational ("1/11", "0.25"); defaults to
    /// 1/(m+1), the largest certificate-eligible value.
    #[arg(long)]
    epsilon: Option<String>,
    /// Integer benefit scale K; benefits are round(K * rate / demand).
    #[arg(long, default_value_t = 1000)]
    scale_k: i64,
    /// Association seed for the random method.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the full run file (record, scenario, assignment, prices) here;
    /// the record alone always goes to standard output.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Write a bid-by-bid CSV trace here (auction only).
    #[arg(long)]
    trace: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// benefit_vs_clients, benefit_vs_aps, or runtime_vs_size.
    name: experiment::ExperimentName,
    /// Fixed access point count (benefit_vs_clients; default 10).
    #[arg(long)]
    m: Option<usize>,
    /// Fixed client count (benefit_vs_aps; default 100).
    #[arg(long)]
    n: Option<usize>,
    /// Swept axis as start:end[:step] (clients for benefit_vs_clients,
    /// access points for benefit_vs_aps).
    #[arg(long)]
    sweep: Option<String>,
    /// Network sizes for runtime_vs_size as "2x20,4x40,...".
    #[arg(long)]
    pairs: Option<String>,
    /// Seed count ("20" runs seeds 0..19) or explicit list ("3,5,8").
    #[arg(long, default_value = "20")]
    seeds: String,
    /// Bid increment override (exact rational); defaults to 1/(m+1) per
    /// point, and for runtime_vs_size to the sweep {1/(m+1), 1/(2m), 1/(4m)}.
    #[arg(long)]
    epsilon: Option<String>,
    /// Integer benefit scale K.
    #[arg(long, default_value_t = 1000)]
    scale_k: i64,
    /// Restrict to one method (default: auction, rssi, and random).
    #[arg(long)]
    method: Option<mmwave_assoc::Method>,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run file written by `solve --out`.
    run: std::path::PathBuf,
}

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    pub fn certificate(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    pub fn infeasible(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(err: E) -> Self {
        Failure {
            code: 1,
            message: err.to_string(),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => generate::run(args),
        Command::Solve(args) => solve::run(args),
        Command::Experiment(args) => experiment::run(args),
        Command::Verify(args) => verify::run(args),
    };
    if let Err(failure) = result {
        eprintln!("error: {}", failure.message);
        std::process::exit(failure.code);
    }
}
