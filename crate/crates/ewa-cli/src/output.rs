//! CSV and JSON artifact formatting.
//!
//! Everything is rendered to an in-memory string first and written in one
//! call, so a failed run never leaves a half-written file.  Floats are
//! printed with 17 significant digits (`{:.16e}`), enough to reproduce the
//! exact f64 bit pattern; lines end with `\n`; JSON keys keep the struct
//! declaration order.

use serde::Serialize;

use ewa_core::harness::{ExperimentReport, MomentReport};
use ewa_core::noise::MgfReport;

use crate::config::RunConfig;

/// A float with 17 significant digits, e.g. `1.2500000000000000e0`.
#[must_use]
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// The per-trial CSV for `simulate`: one row per trial, schema
/// `trial,seed,lhs,rhs,holds,best_t,nu_star,gamma,pen_total,price_total,kl_term`.
///
/// `seed` is the experiment's master seed; the trial draws from its stream
/// number `trial`.  `nu_star` is empty for rules without a free ν.
#[must_use]
pub fn trials_csv(report: &ExperimentReport) -> String {
    let mut out = String::from(
        "trial,seed,lhs,rhs,holds,best_t,nu_star,gamma,pen_total,price_total,kl_term\n",
    );
    for trial in &report.trials {
        let nu = trial.nu_star.map(float).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            trial.trial_index,
            trial.master_seed,
            float(trial.lhs),
            float(trial.rhs),
            trial.holds,
            trial.best_t,
            nu,
            float(trial.gamma),
            float(trial.pen_total),
            float(trial.price_total),
            float(trial.kl_term),
        ));
    }
    out
}

/// The JSON summary written next to the trials CSV.
#[derive(Debug, Serialize)]
pub struct Summary<'a> {
    /// Crate version that produced the artifact.
    pub version: &'a str,
    /// Subcommand that produced it.
    pub command: &'a str,
    /// Fraction of trials whose in-probability bound held.
    pub coverage: f64,
    /// The guaranteed coverage `1 − η`.
    pub coverage_target: f64,
    /// `coverage ≥ coverage_target`.
    pub coverage_ok: bool,
    /// Number of trials.
    pub n_trials: usize,
    /// Number of trials whose bound held.
    pub n_holds: usize,
    /// Mean realised loss of the aggregate.
    pub mean_lhs: f64,
    /// The expectation-side bound on the mean loss.
    pub expectation_rhs: f64,
    /// The configuration that was run, echoed for provenance.
    pub config: &'a RunConfig,
}

impl<'a> Summary<'a> {
    /// Assembles the summary for one experiment report.
    #[must_use]
    pub fn new(command: &'a str, config: &'a RunConfig, report: &ExperimentReport) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION"),
            command,
            coverage: report.empirical_coverage,
            coverage_target: report.coverage_target,
            coverage_ok: report.empirical_coverage >= report.coverage_target,
            n_trials: report.n_trials,
            n_holds: report.n_holds,
            mean_lhs: report.mean_lhs,
            expectation_rhs: report.expectation_rhs,
            config,
        }
    }
}

/// Pretty-printed JSON with a trailing newline and stable key order.
#[must_use]
pub fn summary_json(summary: &Summary) -> String {
    let mut text =
        serde_json::to_string_pretty(summary).expect("summary serialization cannot fail");
    text.push('\n');
    text
}

/// One grid point of a parameter sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// The swept parameter's value at this grid point.
    pub value: f64,
    /// Empirical coverage at this value.
    pub coverage: f64,
    /// Mean realised loss at this value.
    pub mean_lhs: f64,
    /// Expectation-side bound at this value.
    pub expectation_rhs: f64,
    /// Whether coverage reached `1 − η`.
    pub coverage_ok: bool,
}

impl SweepRow {
    /// Summarises one experiment at one grid value.
    #[must_use]
    pub fn new(value: f64, report: &ExperimentReport) -> Self {
        Self {
            value,
            coverage: report.empirical_coverage,
            mean_lhs: report.mean_lhs,
            expectation_rhs: report.expectation_rhs,
            coverage_ok: report.empirical_coverage >= report.coverage_target,
        }
    }
}

/// The sweep CSV: one row per grid point, first column named after the
/// swept parameter (`beta` or `delta`).
#[must_use]
pub fn sweep_csv(parameter: &str, rows: &[SweepRow]) -> String {
    let mut out = format!("{parameter},coverage,mean_lhs,expectation_rhs,coverage_ok\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            float(row.value),
            float(row.coverage),
            float(row.mean_lhs),
            float(row.expectation_rhs),
            row.coverage_ok,
        ));
    }
    out
}

/// The per-pair CSV for `check-moments`, schema
/// `t,u,empirical,bound,stderr,ok`.
#[must_use]
pub fn moments_csv(reports: &[MomentReport]) -> String {
    let mut out = String::from("t,u,empirical,bound,stderr,ok\n");
    for report in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            report.pair.0,
            report.pair.1,
            float(report.empirical),
            float(report.bound),
            float(report.stderr),
            report.ok,
        ));
    }
    out
}

/// The per-direction CSV for `check-mgf`, schema
/// `direction,direction_norm,empirical,bound,stderr,ok`.
#[must_use]
pub fn mgf_csv(reports: &[MgfReport]) -> String {
    let mut out = String::from("direction,direction_norm,empirical,bound,stderr,ok\n");
    for (index, report) in reports.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            index,
            float(report.direction_norm),
            float(report.empirical),
            float(report.bound),
            float(report.stderr),
            report.ok,
        ));
    }
    out
}
