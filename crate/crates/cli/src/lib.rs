//! Command-line front end for `relay-asym`.

pub mod config;
pub mod output;

use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use relay_asym::analysis::db_to_linear;
use relay_asym::{
    build_expansion, enumerate_poles, estimate_outage, finite_diversity, leading_term, sweep_compare, DbRange,
    NetworkConfig, SweepOptions,
};

pub use config::parse_config;
pub use output::{emit_csv, format_probability, parse_csv, render_csv};

pub const THREADS_ENV: &str = "RELAY_ASYM_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Schema(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("invalid model: {0}")]
    Model(relay_asym::Error),
    #[error("numerical failure: {0}")]
    Numerical(relay_asym::Error),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(_) | CliError::Usage(_) => 2,
            CliError::Model(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

impl From<relay_asym::Error> for CliError {
    fn from(err: relay_asym::Error) -> Self {
        use relay_asym::Error as E;
        if err.is_model_validation() {
            CliError::Model(err)
        } else if err.is_numerical() || matches!(err, E::NonPositiveProbability { .. }) {
            CliError::Numerical(err)
        } else if matches!(err, E::InvalidNetwork(_)) {
            CliError::Schema(err.to_string())
        } else {
            CliError::Usage(err.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "relay-asym", version, about = "High-SNR outage asymptotics for multi-hop relay chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Merged pole table and the leading (s0, k, d).
    Poles(CommonArgs),
    /// Terms of the asymptotic expansion.
    Asymptote(CommonArgs),
    /// One Monte Carlo estimate at --db-from.
    Simulate(CommonArgs),
    /// Expansion, Monte Carlo and oracle over the dB grid, as CSV.
    Sweep(SweepArgs),
    /// Finite-SNR diversity over the dB grid.
    Diversity(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Path of the JSON configuration, `-` for standard input.
    #[arg(long)]
    pub config: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub db_from: f64,
    #[arg(long, default_value_t = 60.0, allow_negative_numbers = true)]
    pub db_to: f64,
    #[arg(long, default_value_t = 5.0)]
    pub db_step: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub lambda_max: u32,
    /// Left edge of the pole search; defaults to s0 - 1.5.
    #[arg(long, allow_negative_numbers = true)]
    pub re_min: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Also evaluate the nested-quadrature oracle (up to three hops).
    #[arg(long)]
    pub oracle: bool,
    /// Skip Monte Carlo.
    #[arg(long)]
    pub no_mc: bool,
    /// Directory for two-column gnuplot files, one per series.
    #[arg(long)]
    pub gnuplot: Option<PathBuf>,
}

/// Reads the worker cap from `RELAY_ASYM_THREADS`.
pub fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(None),
    }
}

fn read_config(path: &str) -> Result<NetworkConfig, CliError> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?
    };
    parse_config(&text)
}

fn range(args: &CommonArgs) -> Result<DbRange, CliError> {
    Ok(DbRange::new(args.db_from, args.db_to, args.db_step)?)
}

fn poles(net: &NetworkConfig, args: &CommonArgs) -> Result<String, CliError> {
    let lead = leading_term(net)?;
    let re_min = args.re_min.unwrap_or(lead.s0 - 1.5);
    let table = enumerate_poles(net, &vec![0; net.len()], 0, re_min)?;
    let mut out = String::from("location,order\n");
    for p in table {
        writeln!(out, "{:?},{}", p.location.re, p.order).unwrap();
    }
    writeln!(out, "s0={:?} k={} d={:?}", lead.s0, lead.order, lead.diversity()).unwrap();
    Ok(out)
}

fn asymptote(net: &NetworkConfig, args: &CommonArgs) -> Result<String, CliError> {
    let exp = build_expansion(net, args.lambda_max, args.re_min)?;
    let mut out = String::from("exponent,log_power,coefficient\n");
    for term in exp.terms() {
        for (j, c) in term.log_coeffs.iter().enumerate() {
            writeln!(out, "{:?},{j},{c:e}", term.exponent).unwrap();
        }
    }
    Ok(out)
}

fn simulate(net: &NetworkConfig, args: &CommonArgs) -> Result<String, CliError> {
    let est = estimate_outage(net, db_to_linear(args.db_from), args.samples, args.seed)?;
    Ok(format!(
        "gamma_db,p_mc,ci_low,ci_high,n_samples,n_outages,seed\n{:?},{},{},{},{},{},{}\n",
        args.db_from,
        format_probability(est.p_hat),
        format_probability(est.ci_low),
        format_probability(est.ci_high),
        est.n_samples,
        est.n_outages,
        est.seed
    ))
}

fn diversity(net: &NetworkConfig, args: &CommonArgs) -> Result<String, CliError> {
    let lead = leading_term(net)?;
    let mut out = String::from("gamma_db,d_finite\n");
    for db in range(args)?.points() {
        let d = finite_diversity(lead.s0, lead.order, db_to_linear(db)).ok();
        writeln!(out, "{db:?},{}", d.map(|d| format!("{d:?}")).unwrap_or_default()).unwrap();
    }
    Ok(out)
}

fn sweep(net: &NetworkConfig, args: &SweepArgs) -> Result<(), CliError> {
    let c = &args.common;
    let options = SweepOptions {
        mc_samples: (!args.no_mc).then_some(c.samples),
        oracle: args.oracle,
        lambda_max: c.lambda_max,
        re_min: c.re_min,
        seed: c.seed,
        ..SweepOptions::default()
    };
    let rows = sweep_compare(net, range(c)?, &options)?;
    emit_csv(&rows, c.out.as_deref())?;
    if let Some(dir) = &args.gnuplot {
        for file in output::emit_gnuplot(&rows, dir)? {
            log::info!("wrote {}", dir.join(file).display());
        }
    }
    Ok(())
}

/// Executes one parsed command line.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let cap = thread_cap()?;
    relay_asym::with_thread_cap(cap, || {
        let common = match &cli.command {
            Command::Sweep(a) => &a.common,
            Command::Poles(a) | Command::Asymptote(a) | Command::Simulate(a) | Command::Diversity(a) => a,
        };
        let net = read_config(&common.config)?;
        let text = match &cli.command {
            Command::Poles(a) => poles(&net, a)?,
            Command::Asymptote(a) => asymptote(&net, a)?,
            Command::Simulate(a) => simulate(&net, a)?,
            Command::Diversity(a) => diversity(&net, a)?,
            Command::Sweep(a) => return sweep(&net, a),
        };
        output::write_text(&text, common.out.as_deref())
    })
}
