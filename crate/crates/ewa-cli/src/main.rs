//! `ewa` — run aggregation experiments from a config file.
//!
//! Exit status: 0 when the command ran and every checked flag (coverage
//! target, moment certificate, …) came out true; 2 when it ran but some
//! flag was false; 1 on any error.  Artifacts written by a failing
//! invocation are removed, so an output directory never holds a partial
//! result set.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use ewa_cli::config::{parse_config, RunConfig};
use ewa_cli::output::{self, Summary, SweepRow};
use ewa_core::harness::{exp_moment_check, run_experiment, ExperimentReport, MIN_MOMENT_SAMPLES};
use ewa_core::noise::{mgf_check, random_unit_directions};

#[derive(Parser)]
#[command(
    name = "ewa",
    version,
    about = "Exponentially weighted aggregation of linear smoothers: simulate oracle bounds, sweep the constants, and check the moment certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the Monte Carlo experiment; writes trials.csv and summary.json
    Simulate {
        /// Key-value config file
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if missing)
        #[arg(long)]
        out: PathBuf,
        /// Override the configured trial count
        #[arg(long)]
        trials: Option<u64>,
        /// Override the configured master seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Re-run the experiment over a grid of temperatures; writes sweep_beta.csv
    SweepBeta {
        /// Key-value config file
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if missing)
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated β values, e.g. 20,24,28
        #[arg(long)]
        grid: String,
        /// Override the configured trial count
        #[arg(long)]
        trials: Option<u64>,
        /// Override the configured master seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Re-run the experiment over a grid of δ values; writes sweep_delta.csv
    SweepDelta {
        /// Key-value config file
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if missing)
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated δ values, e.g. 0,0.5,1
        #[arg(long)]
        grid: String,
        /// Override the configured trial count
        #[arg(long)]
        trials: Option<u64>,
        /// Override the configured master seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check the pairwise exponential-moment certificates; writes moments.csv
    CheckMoments {
        /// Key-value config file
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if missing)
        #[arg(long)]
        out: PathBuf,
        /// Monte Carlo samples per pair (minimum 100000)
        #[arg(long)]
        samples: Option<usize>,
        /// Override the configured master seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check the noise model's sub-Gaussian MGF certificate; writes mgf.csv
    CheckMgf {
        /// Key-value config file
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if missing)
        #[arg(long)]
        out: PathBuf,
        /// Number of random unit directions to test
        #[arg(long, default_value_t = 20)]
        directions: usize,
        /// Monte Carlo samples shared by all directions
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        /// Override the configured master seed
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Tracks what this invocation wrote, so a failure can clean up after
/// itself instead of leaving a partial result set behind.
struct Artifacts {
    written: Vec<PathBuf>,
}

impl Artifacts {
    fn new() -> Self {
        Self {
            written: Vec::new(),
        }
    }

    fn write(&mut self, dir: &Path, name: &str, contents: &str) -> Result<()> {
        fs::create_dir_all(dir)
            .with_context(|| format!("cannot create output directory {}", dir.display()))?;
        let path = dir.join(name);
        fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        println!("wrote {}", path.display());
        self.written.push(path);
        Ok(())
    }

    fn discard(&self) {
        for path in &self.written {
            let _ = fs::remove_file(path);
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut artifacts = Artifacts::new();
    match run(cli.command, &mut artifacts) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(err) => {
            artifacts.discard();
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command, artifacts: &mut Artifacts) -> Result<bool> {
    match command {
        Command::Simulate {
            config,
            out,
            trials,
            seed,
        } => simulate(&config, &out, trials, seed, artifacts),
        Command::SweepBeta {
            config,
            out,
            grid,
            trials,
            seed,
        } => sweep("beta", &config, &out, &grid, trials, seed, artifacts),
        Command::SweepDelta {
            config,
            out,
            grid,
            trials,
            seed,
        } => sweep("delta", &config, &out, &grid, trials, seed, artifacts),
        Command::CheckMoments {
            config,
            out,
            samples,
            seed,
        } => check_moments(&config, &out, samples, seed, artifacts),
        Command::CheckMgf {
            config,
            out,
            directions,
            samples,
            seed,
        } => check_mgf(&config, &out, directions, samples, seed, artifacts),
    }
}

fn load_config(path: &Path, trials: Option<u64>, seed: Option<u64>) -> Result<RunConfig> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    let mut cfg =
        parse_config(&text).with_context(|| format!("invalid config {}", path.display()))?;
    if let Some(trials) = trials {
        cfg.trials = trials;
    }
    if let Some(seed) = seed {
        cfg.master_seed = seed;
    }
    Ok(cfg)
}

fn run_configured(cfg: &RunConfig) -> Result<ExperimentReport> {
    let exp = cfg.build()?;
    Ok(run_experiment(
        &exp.signal,
        &exp.collection,
        &exp.noise,
        &exp.config,
        exp.trials,
        exp.master_seed,
    )?)
}

fn simulate(
    config: &Path,
    out: &Path,
    trials: Option<u64>,
    seed: Option<u64>,
    artifacts: &mut Artifacts,
) -> Result<bool> {
    let cfg = load_config(config, trials, seed)?;
    let report = run_configured(&cfg)?;
    artifacts.write(out, "trials.csv", &output::trials_csv(&report))?;
    let summary = Summary::new("simulate", &cfg, &report);
    artifacts.write(out, "summary.json", &output::summary_json(&summary))?;
    println!(
        "coverage {:.4} (target {:.4}): {}",
        summary.coverage,
        summary.coverage_target,
        if summary.coverage_ok {
            "ok"
        } else {
            "below target"
        }
    );
    Ok(summary.coverage_ok)
}

fn parse_grid(grid: &str) -> Result<Vec<f64>> {
    let values: Vec<f64> = grid
        .split(',')
        .map(|item| {
            let item = item.trim();
            item.parse::<f64>()
                .with_context(|| format!("--grid: cannot parse '{item}'"))
        })
        .collect::<Result<_>>()?;
    if values.is_empty() {
        bail!("--grid: the grid is empty");
    }
    Ok(values)
}

fn sweep(
    parameter: &str,
    config: &Path,
    out: &Path,
    grid: &str,
    trials: Option<u64>,
    seed: Option<u64>,
    artifacts: &mut Artifacts,
) -> Result<bool> {
    let cfg = load_config(config, trials, seed)?;
    let values = parse_grid(grid)?;
    let mut rows = Vec::with_capacity(values.len());
    for &value in &values {
        let mut point = cfg.clone();
        match parameter {
            "beta" => point.beta = value,
            "delta" => point.delta = value,
            _ => unreachable!("sweep is only called for beta and delta"),
        }
        let report =
            run_configured(&point).with_context(|| format!("grid point {parameter} = {value}"))?;
        rows.push(SweepRow::new(value, &report));
    }
    artifacts.write(
        out,
        &format!("sweep_{parameter}.csv"),
        &output::sweep_csv(parameter, &rows),
    )?;
    let ok = rows.iter().all(|row| row.coverage_ok);
    println!(
        "{} grid points: {}",
        rows.len(),
        if ok {
            "all reached the coverage target"
        } else {
            "some fell below the coverage target"
        }
    );
    Ok(ok)
}

fn check_moments(
    config: &Path,
    out: &Path,
    samples: Option<usize>,
    seed: Option<u64>,
    artifacts: &mut Artifacts,
) -> Result<bool> {
    let cfg = load_config(config, None, seed)?;
    let exp = cfg.build()?;
    let samples = samples.unwrap_or(MIN_MOMENT_SAMPLES);
    let mut reports = Vec::new();
    for t in 0..exp.collection.len() {
        for u in 0..exp.collection.len() {
            if t == u {
                continue;
            }
            let pair_seed = exp.master_seed.wrapping_add(reports.len() as u64);
            reports.push(exp_moment_check(
                (t, u),
                &exp.signal,
                &exp.collection,
                &exp.noise,
                &exp.config,
                samples,
                pair_seed,
            )?);
        }
    }
    artifacts.write(out, "moments.csv", &output::moments_csv(&reports))?;
    let ok = reports.iter().all(|report| report.ok);
    println!(
        "{} pairs checked: {}",
        reports.len(),
        if ok {
            "all certificates hold"
        } else {
            "some certificates exceeded"
        }
    );
    Ok(ok)
}

fn check_mgf(
    config: &Path,
    out: &Path,
    directions: usize,
    samples: usize,
    seed: Option<u64>,
    artifacts: &mut Artifacts,
) -> Result<bool> {
    let cfg = load_config(config, None, seed)?;
    let exp = cfg.build()?;
    let dirs = random_unit_directions(cfg.n, directions, exp.master_seed);
    let reports = mgf_check(
        &exp.noise,
        cfg.n,
        &dirs,
        samples,
        exp.master_seed.wrapping_add(1),
    )?;
    artifacts.write(out, "mgf.csv", &output::mgf_csv(&reports))?;
    let ok = reports.iter().all(|report| report.ok);
    println!(
        "{} directions checked: {}",
        reports.len(),
        if ok {
            "all certificates hold"
        } else {
            "some certificates exceeded"
        }
    );
    Ok(ok)
}
