use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

mod commands;

use commands::Failure;

#[derive(Parser)]
#[command(
    name = "pdisc",
    version,
    about = "Exact analysis and Poincaré-disc portraits of planar polynomial vector fields"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Finite and infinite equilibria, chart systems and blow-ups.
    Analyze(AnalyzeArgs),
    /// Invariant curves, exponential factors and the integrability verdict.
    Darboux(DarbouxArgs),
    /// Global phase portrait as SVG and JSON.
    Portrait(PortraitArgs),
    /// Dimensionless parameters of the Leslie–Gower model.
    Leslie(LeslieArgs),
}

#[derive(Args)]
pub struct Input {
    /// Vector-field file.
    pub model: PathBuf,
    /// Parameter overrides, `NAME=RAT,...`.
    #[arg(long)]
    pub params: Option<String>,
}

#[derive(Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: Input,
    /// Keep only finite equilibria in the closed first quadrant.
    #[arg(long)]
    pub quadrant: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct DarbouxArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_curve_degree: u32,
    /// Degree bound N for exponential factors.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    pub exp_degree: u32,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub extactic_order: u32,
    /// Include the full extactic polynomial in the report.
    #[arg(long)]
    pub dump_extactic: bool,
    /// Also run the verdict at the seeded sample of (A, B, C) triples.
    #[arg(long)]
    pub generic: bool,
    /// Sample seed; PDISC_SEED takes precedence.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args)]
pub struct PortraitArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Draw the whole disc instead of the first quadrant.
    #[arg(long)]
    pub full_disc: bool,
    #[arg(long, default_value_t = pdisc::portrait::DEFAULT_TMAX)]
    pub tmax: f64,
    /// Separatrix offset in the disc metric.
    #[arg(long, default_value_t = pdisc::portrait::DEFAULT_EPS)]
    pub eps: f64,
    /// Generic seeds per radial and angular direction.
    #[arg(long, default_value_t = 8)]
    pub grid: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub atol: f64,
}

#[derive(Args)]
pub struct LeslieArgs {
    #[arg(long)]
    pub r: String,
    #[arg(long)]
    pub k: String,
    #[arg(long)]
    pub q: String,
    #[arg(long)]
    pub s: String,
    #[arg(long)]
    pub n: String,
    #[arg(long)]
    pub c: String,
    /// Chain into `analyze` on the transformed system.
    #[arg(long)]
    pub analyze: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.cmd {
        Cmd::Analyze(a) => commands::analyze(&a),
        Cmd::Darboux(a) => commands::darboux(&a),
        Cmd::Portrait(a) => commands::portrait(&a),
        Cmd::Leslie(a) => commands::leslie(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("pdisc: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("pdisc: invariant violation: {msg}");
            ExitCode::from(3)
        }
    }
}
