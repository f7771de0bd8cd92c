//! gchaos: batch front end for the gauss-chaos library.
//!
//! One subcommand per pipeline stage. Every run prints one
//! self-describing JSON report to stdout (the verify subcommand prints
//! its per-case ledger first): command, versions, resolved
//! configuration, input fingerprints, wall clock, result. Repeating a
//! run with the same configuration and seed reproduces the report byte
//! for byte except `timing_ms`, and CSV artifacts byte for byte.
//!
//! Exit status: 0 success, 2 a checked hypothesis failed (a verify
//! suite with failing cases, a norm-ladder violation, unmet
//! simplified-bound hypotheses), 1 anything that prevented the run.
//! Seeds for stochastic commands come from a flag or the config file,
//! never from the environment.

mod cfg;
mod error;
mod parse;
mod report;
mod run;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "gchaos", version, about = "Gaussian chaos moments, norms, bounds, and checks")]
pub struct Cli {
    /// JSON file of default flag values (keys = long flag names);
    /// explicit flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<String>,

    /// Worker threads for parallel sweeps; results do not depend on it.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Partition norm ladder of a kernel tensor
    Norms(NormsArgs),
    /// Closed-diagram counts, enumeration, and per-diagram values
    Diagrams(DiagramsArgs),
    /// Exact chaos moments by the diagram walker
    Moments(MomentsArgs),
    /// Moment and tail bound evaluation from a norm profile
    Bounds(BoundsArgs),
    /// Monte Carlo tails of one chaos variable against the bounds
    Simulate(SimulateArgs),
    /// Brute-force moment oracle (Hermite expansion, no diagrams)
    Oracle(OracleArgs),
    /// Trilinear conditioned-supremum experiment over an M sweep
    Latala(LatalaArgs),
    /// Named verification suites with per-case ledgers
    Verify(VerifyArgs),
}

#[derive(Args)]
pub struct NormsArgs {
    /// Kernel tensor JSON.
    #[arg(long, value_name = "FILE")]
    pub tensor: Option<String>,
    /// Power-iteration restarts per partition (default 32).
    #[arg(long, value_name = "N")]
    pub restarts: Option<usize>,
    /// Convergence tolerance (default 1e-10).
    #[arg(long, value_name = "EPS")]
    pub tol: Option<f64>,
    /// Seed for restart directions. Required: restarts are random.
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
    /// Also write the profile JSON here.
    #[arg(long, value_name = "FILE")]
    pub out: Option<String>,
}

#[derive(Args)]
pub struct DiagramsArgs {
    /// Comma-separated row sizes, e.g. 2,2,2.
    #[arg(long, value_name = "K1,K2,..")]
    pub rows: Option<String>,
    /// Count by formula only, no enumeration.
    #[arg(long)]
    pub count_only: bool,
    /// Comma-separated kernel JSON paths; a single kernel is reused on
    /// every row. Orders must match --rows.
    #[arg(long, value_name = "FILES")]
    pub kernels: Option<String>,
    /// Write one CSV row per closed diagram (requires --kernels).
    #[arg(long, value_name = "FILE")]
    pub emit: Option<String>,
}

#[derive(Args)]
pub struct MomentsArgs {
    /// Kernel tensor JSON.
    #[arg(long, value_name = "FILE")]
    pub kernel: Option<String>,
    /// Moment degree: number of copies in E Z^p.
    #[arg(long, value_name = "P")]
    pub copies: Option<usize>,
    /// Cross-check against the Hermite-expansion oracle.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args)]
pub struct BoundsArgs {
    /// Norm profile JSON produced by the norms subcommand.
    #[arg(long, value_name = "FILE")]
    pub profile: Option<String>,
    /// Moment order M (bounds E Z^{2M}).
    #[arg(long = "M", value_name = "M")]
    pub big_m: Option<usize>,
    /// Tail abscissa for the tail bounds.
    #[arg(long, value_name = "X")]
    pub x: Option<f64>,
    /// Moment-bound constant (default 1).
    #[arg(long = "C", value_name = "C")]
    pub c: Option<f64>,
    /// Tail prefactor constant (default 1).
    #[arg(long = "C1", value_name = "C1")]
    pub c1: Option<f64>,
    /// Tail exponent constant (default 1).
    #[arg(long = "C2", value_name = "C2")]
    pub c2: Option<f64>,
    /// Markov-order constant (default 1).
    #[arg(long = "Ctilde", value_name = "CT")]
    pub c_tilde: Option<f64>,
    /// Check the fixed-R moment inequality on a kernel instead of
    /// evaluating profile bounds. Exits 2 when hypotheses fail.
    #[arg(long)]
    pub simplified: bool,
    /// Kernel tensor JSON (simplified mode).
    #[arg(long, value_name = "FILE")]
    pub kernel: Option<String>,
    /// Ladder scale R (simplified mode).
    #[arg(long = "R", value_name = "R")]
    pub r: Option<f64>,
    /// Power-iteration restarts (simplified mode, default 32).
    #[arg(long, value_name = "N")]
    pub restarts: Option<usize>,
    /// Convergence tolerance (simplified mode, default 1e-10).
    #[arg(long, value_name = "EPS")]
    pub tol: Option<f64>,
    /// Seed for restart directions (required in simplified mode).
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Kernel tensor JSON.
    #[arg(long, value_name = "FILE")]
    pub kernel: Option<String>,
    /// Sample count; scientific notation accepted (1e6).
    #[arg(long, value_name = "N")]
    pub samples: Option<String>,
    /// Seed for the sample streams. Required.
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
    /// Survival-function grid start:step:stop, e.g. 0:0.5:12.
    #[arg(long, value_name = "GRID")]
    pub tail_grid: Option<String>,
    /// CSV destination (columns x, p_hat, ci_half, bound_main,
    /// bound_single_norm). Required.
    #[arg(long, value_name = "FILE")]
    pub out: Option<String>,
    /// Tail prefactor constant for both bound columns (default 1).
    #[arg(long = "C1", value_name = "C1")]
    pub c1: Option<f64>,
    /// Tail exponent constant for the ladder bound (default 1).
    #[arg(long = "C2", value_name = "C2")]
    pub c2: Option<f64>,
    /// Power-iteration restarts for the norm profile (default 32).
    #[arg(long, value_name = "N")]
    pub restarts: Option<usize>,
    /// Norm convergence tolerance (default 1e-10).
    #[arg(long, value_name = "EPS")]
    pub tol: Option<f64>,
}

#[derive(Args)]
pub struct OracleArgs {
    /// Kernel tensor JSON.
    #[arg(long, value_name = "FILE")]
    pub kernel: Option<String>,
    /// Moment degree p in E Z^p.
    #[arg(long, value_name = "P")]
    pub degree: Option<usize>,
}

#[derive(Args)]
pub struct LatalaArgs {
    /// Order-3 kernel tensor JSON (alternative to --generator).
    #[arg(long, value_name = "FILE")]
    pub tensor: Option<String>,
    /// Built-in instance family: rank-one, sparse, or orthogonal.
    #[arg(long, value_name = "NAME")]
    pub generator: Option<String>,
    /// Dimension for --generator instances.
    #[arg(long, value_name = "N")]
    pub dim: Option<usize>,
    /// Support size for the sparse generator (default 3*dim).
    #[arg(long, value_name = "N")]
    pub support: Option<usize>,
    /// Comma-separated M sweep, e.g. 4,16,64.
    #[arg(long = "M", value_name = "M,..")]
    pub big_m: Option<String>,
    /// Monte Carlo samples per M; scientific notation accepted.
    #[arg(long, value_name = "N")]
    pub samples: Option<String>,
    /// Seed for conditioning draws. Required.
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
    /// CSV destination (columns M, E_sup_Y, ci, ratio_Mhalf,
    /// ratio_Mquarter). Required.
    #[arg(long, value_name = "FILE")]
    pub out: Option<String>,
    /// Spectral-norm restarts per sample (default 32).
    #[arg(long, value_name = "N")]
    pub restarts: Option<usize>,
    /// Spectral-norm tolerance (default 1e-10).
    #[arg(long, value_name = "EPS")]
    pub tol: Option<f64>,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// One of: cross-oracle, basic-estimate, main-inequality,
    /// cumulant-identity, counts, sharpness.
    #[arg(long, value_name = "NAME")]
    pub suite: Option<String>,
    /// Sweep seed (default 7, the acceptance seed).
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
    /// Kernel-order cap; only the cross-oracle and cumulant-identity
    /// sweeps accept it.
    #[arg(long = "max-k", value_name = "K")]
    pub max_k: Option<usize>,
    /// Cap on 2Mk, the total vertex count; only the cross-oracle and
    /// cumulant-identity sweeps accept it.
    #[arg(long = "max-2Mk", value_name = "V")]
    pub max_two_mk: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            // Help and version are successes; everything else is a
            // usage error, exit 1 (2 is reserved for violations).
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run::dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
