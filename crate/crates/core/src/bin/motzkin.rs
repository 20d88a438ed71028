use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use motzkin::run::{self, parse_f64_list, parse_usize_list, Command, Format, RunConfig};

/// Numerical checks for the area-weighted colored Motzkin chain.
///
/// Grid flags take a single value, a comma list, or an inclusive range
/// `a..b` (optionally `a..b:step`). The worker count is read from
/// MOTZKIN_WORKERS.
#[derive(Parser)]
#[command(name = "motzkin", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Walk counts and maximal-area statistics.
    Count(Opts),
    /// Spectral gap of H(t) and the matching chain gap.
    Gap(Opts),
    /// Transition matrix identities and the gap relation.
    MarkovVerify(Opts),
    /// Bottleneck sets, conductance and the lemma checks.
    Cheeger(Opts),
    /// Exact gap against the exponential bound over a range of n.
    TheoremScan(Opts),
    /// Half-chain entanglement entropy and its scaling fit.
    EntropyScan(Opts),
    /// Metropolis sampler of the area-weighted law.
    Mcmc(Opts),
}

#[derive(Args)]
struct Opts {
    #[arg(long)]
    n: String,
    #[arg(long)]
    s: String,
    #[arg(long)]
    t: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    steps: u64,
    /// Trace row stride for mcmc (0 picks about ten thousand rows).
    #[arg(long, default_value_t = 0)]
    stride: u64,
    /// MCMC start walk, e.g. u1.0.d1.0; the flat walk by default.
    #[arg(long)]
    start: Option<String>,
    /// Output directory (must exist); stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for coordinate-format matrix exports.
    #[arg(long)]
    export: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    dense_cap: Option<usize>,
    /// Relative tolerance of the gap relation.
    #[arg(long)]
    tol: Option<f64>,
    /// Also diagonalize H on the full spin space (gap only).
    #[arg(long)]
    full_space: bool,
    /// Use deflated Lanczos instead of the grounded Cholesky solver.
    #[arg(long)]
    no_shift_invert: bool,
    /// Add wall-clock columns.
    #[arg(long)]
    timings: bool,
}

fn config(command: Command, o: Opts) -> motzkin::Result<RunConfig> {
    let mut c = RunConfig::new(command);
    c.n = parse_usize_list(&o.n)?;
    c.s = parse_usize_list(&o.s)?;
    if let Some(t) = &o.t {
        c.t = parse_f64_list(t)?;
    }
    c.seed = o.seed;
    c.steps = o.steps;
    c.stride = o.stride;
    c.start = o.start;
    c.format = o.format.parse::<Format>()?;
    if let Some(cap) = o.dense_cap {
        c.eigen.dense_cap = cap;
    }
    if let Some(tol) = o.tol {
        c.tol = tol;
    }
    c.eigen.shift_invert = !o.no_shift_invert;
    c.full_space = o.full_space;
    c.timings = o.timings;
    for dir in [&o.out, &o.export].into_iter().flatten() {
        if !dir.is_dir() {
            return Err(motzkin::Error::Io(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("output directory {} does not exist", dir.display()),
            )));
        }
    }
    c.out = o.out;
    c.export = o.export;
    Ok(c)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = match cli.command {
        Cmd::Count(o) => (Command::Count, o),
        Cmd::Gap(o) => (Command::Gap, o),
        Cmd::MarkovVerify(o) => (Command::MarkovVerify, o),
        Cmd::Cheeger(o) => (Command::Cheeger, o),
        Cmd::TheoremScan(o) => (Command::TheoremScan, o),
        Cmd::EntropyScan(o) => (Command::EntropyScan, o),
        Cmd::Mcmc(o) => (Command::Mcmc, o),
    };
    let result = config(command, opts).and_then(|c| {
        let report = run::run(&c)?;
        report.emit(c.format, c.out.as_deref())?;
        Ok(report)
    });
    match result {
        Ok(report) if report.passed() => ExitCode::SUCCESS,
        Ok(report) => {
            for f in &report.failures {
                eprintln!("FAIL {f}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
