//! Command-line wiring: config schemas, the four subcommands, and exit codes.
//!
//! Exit status 0 means no error and no inequality failure; 2 means the sweep
//! found a violated bound; 1 is any other error. `GINIDYN_LOG` controls
//! diagnostic verbosity (`error`, `warn`, `info`, `debug`, `trace`).

use crate::dist::{shifted_bernoulli, Dist, DistError};
use crate::dynamics::{simulate, DynError, ModelSpec, SimConfig};
use crate::fileio::{
    self, read_dist, trajectory_csv, trajectory_json, write_atomic, write_dist,
    write_sweep_report, FileError,
};
use crate::metrics::{gini_cdf, gini_double_sum, lp_distance, wasserstein1, MetricsError};
use crate::verifier::{sweep, SweepConfig, VerifierError};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    File(#[from] FileError),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Dynamics(#[from] DynError),
    #[error(transparent)]
    Verifier(#[from] VerifierError),
    #[error("config {path}: {source}")]
    Config {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("{failures} inequality check(s) failed; report written to {report}")]
    ChecksFailed { failures: u64, report: PathBuf },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ChecksFailed { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "ginidyn",
    version,
    about = "Mean-field ODE systems on the integer lattice and Gini/Wasserstein inequality checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integrate a model from a JSON config and write the trajectory table
    Simulate {
        /// Simulation config (model, initial datum, integrator settings)
        #[arg(long)]
        config: PathBuf,
        /// Output path (default: trajectory.csv / trajectory.json)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Print mean and Gini index for a distribution file; with two files,
    /// also the Wasserstein-1 and l1 distances between them
    Metrics {
        /// One or two distribution files
        #[arg(num_args = 1..=2, required = true)]
        files: Vec<PathBuf>,
    },
    /// Write the shifted Bernoulli equilibrium for a given mean and print its
    /// Gini index
    Equilibrium {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        trunc: usize,
        /// Output path (default: equilibrium.json)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the randomized inequality sweep and write the JSON report
    Verify {
        /// Sweep config (mu grid, truncation, sample count, seed, checks)
        #[arg(long)]
        config: PathBuf,
        /// Report path (default: sweep_report.json)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config's seed
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Initial datum for a simulation: inline mass entries or a distribution file.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum InitialDatum {
    Inline { probs: Vec<f64> },
    File { file: PathBuf },
}

/// Schema of the `simulate` config file.
#[derive(Debug, Deserialize)]
pub struct SimulateConfig {
    pub model: ModelSpec,
    pub initial: InitialDatum,
    pub sim: SimConfig,
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::File(FileError::Io {
            path: path.display().to_string(),
            source: e,
        })
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Config {
        path: path.display().to_string(),
        source: e,
    })
}

/// Builds the initial state on `{0, .., trunc}`, zero-padding a shorter datum.
fn load_datum(initial: &InitialDatum, trunc: usize, cfg: &SimConfig) -> Result<Dist, CliError> {
    let d = match initial {
        InitialDatum::Inline { probs } => Dist::with_tolerances(probs.clone(), &cfg.tolerances())?,
        InitialDatum::File { file } => read_dist(file)?,
    };
    if d.trunc() > trunc {
        return Err(CliError::Invalid(format!(
            "initial datum has truncation {} above the configured truncation {trunc}",
            d.trunc()
        )));
    }
    Ok(d.zero_padded(trunc))
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { config, out, format } => cmd_simulate(&config, out, format),
        Command::Metrics { files } => cmd_metrics(&files),
        Command::Equilibrium { mu, trunc, out } => cmd_equilibrium(mu, trunc, out),
        Command::Verify { config, out, seed } => cmd_verify(&config, out, seed),
    }
}

fn cmd_simulate(
    config: &Path,
    out: Option<PathBuf>,
    format: OutputFormat,
) -> Result<(), CliError> {
    let cfg: SimulateConfig = load_json(config)?;
    let d0 = load_datum(&cfg.initial, cfg.sim.trunc, &cfg.sim)?;
    log::info!(
        "simulating {} to t = {} (dt = {}, trunc = {})",
        cfg.model.name(),
        cfg.sim.t_end,
        cfg.sim.dt,
        cfg.sim.trunc
    );
    let record = simulate(&cfg.model, &d0, &cfg.sim)?;
    let (path, contents) = match format {
        OutputFormat::Csv => (
            out.unwrap_or_else(|| PathBuf::from("trajectory.csv")),
            trajectory_csv(&record),
        ),
        OutputFormat::Json => (
            out.unwrap_or_else(|| PathBuf::from("trajectory.json")),
            trajectory_json(&record),
        ),
    };
    write_atomic(&path, contents.as_bytes())?;
    let last = record.rows.last().expect("at least the initial row");
    println!(
        "wrote {} ({} rows, final t = {}, final gini = {})",
        path.display(),
        record.rows.len(),
        last.t,
        last.gini
    );
    if record.tail_warnings > 0 {
        println!(
            "warning: tail mass exceeded tail_warn at {} recorded step(s); consider a larger truncation",
            record.tail_warnings
        );
    }
    Ok(())
}

fn cmd_metrics(files: &[PathBuf]) -> Result<(), CliError> {
    let mut dists = Vec::new();
    for path in files {
        let d = read_dist(path)?;
        println!("# {}", path.display());
        println!("mean = {}", d.mean());
        println!("gini_double_sum = {}", gini_double_sum(&d)?);
        println!("gini_cdf = {}", gini_cdf(&d)?);
        dists.push(d);
    }
    if let [a, b] = dists.as_slice() {
        println!("w1 = {}", wasserstein1(a, b));
        println!("l1 = {}", lp_distance(a, b, 1.0)?);
    }
    Ok(())
}

fn cmd_equilibrium(mu: f64, trunc: usize, out: Option<PathBuf>) -> Result<(), CliError> {
    let pstar = shifted_bernoulli(mu, trunc)?;
    let path = out.unwrap_or_else(|| PathBuf::from("equilibrium.json"));
    write_dist(&path, &pstar)?;
    println!("wrote {}", path.display());
    println!(
        "gini_equilibrium = {}",
        crate::dist::gini_equilibrium_value(mu)
    );
    Ok(())
}

fn cmd_verify(config: &Path, out: Option<PathBuf>, seed: Option<u64>) -> Result<(), CliError> {
    let mut cfg: SweepConfig = load_json(config)?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    let report = sweep(&cfg)?;
    let path = out.unwrap_or_else(|| PathBuf::from("sweep_report.json"));
    write_sweep_report(&path, &report)?;
    for (name, agg) in &report.checks {
        let min_slack = agg
            .min_slack
            .map(|s| fileio::fmt_f64(s))
            .unwrap_or_else(|| "n/a".to_string());
        println!(
            "{name}: {} evaluated, {} failures, min slack {min_slack}",
            agg.count, agg.failures
        );
    }
    println!("wrote {}", path.display());
    let failures = report.total_failures();
    if failures > 0 {
        return Err(CliError::ChecksFailed {
            failures,
            report: path,
        });
    }
    Ok(())
}
