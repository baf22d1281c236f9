//! Interchangeable bound rules: each aggregation regime — its admissible
//! temperatures, minimal penalty, price term, and right-hand-side factors —
//! behind one trait, registered by name and selected at runtime.
//!
//! | registry name         | regime                                   | penalty shape        |
//! |-----------------------|------------------------------------------|----------------------|
//! | `theorem1`            | general sub-Gaussian noise, any smoother | `∝ tr(P²)`           |
//! | `gaussian_projection` | Gaussian noise, orthogonal projections   | `∝ tr(P)`            |
//! | `custom`              | sub-Gaussian regime, caller-chosen κ     | `κ·tr(P²)·σ²`        |
//!
//! The `custom` rule keeps the sub-Gaussian regime's admissibility, minimal
//! penalty and price, but weights with the explicit penalty `κ·tr(P²)·σ²`,
//! which is how κ-threshold sweeps straddle the validity thresholds.

use std::sync::Arc;

use crate::error::{EwaError, Result};
use crate::estimators::TraceStats;

use super::{gamma, gaussian_epsilon, optimize_nu, AggregationConfig, BoundComponents, NuStar};

/// One aggregation regime's constant calculus.
///
/// Implementations are stateless (or carry only their own parameters, like
/// κ) and are shared behind `Arc<dyn BoundRule>` inside
/// [`AggregationConfig`].  `min_penalty`, `penalty` and `price` are only
/// called with configurations that passed [`BoundRule::validate`], which
/// keeps their denominators strictly positive.
pub trait BoundRule: std::fmt::Debug + Send + Sync {
    /// Registry name, as written in configuration files.
    fn name(&self) -> &'static str;

    /// Checks the temperature admissibility constraints of this regime.
    fn validate(&self, beta: f64, delta: f64, sigma_sq: f64, v_bound: f64) -> Result<()>;

    /// The quadratic-term coefficient γ this regime works with (0 where the
    /// regime has none).
    fn gamma(&self, beta: f64, delta: f64, sigma_sq: f64, v_bound: f64) -> Result<f64>;

    /// Smallest admissible penalty for a smoother with the given traces.
    fn min_penalty(&self, stats: TraceStats, cfg: &AggregationConfig, c_tilde: f64) -> f64;

    /// The penalty actually fed into the Gibbs weights (defaults to the
    /// minimal admissible one).
    fn penalty(&self, stats: TraceStats, cfg: &AggregationConfig, c_tilde: f64) -> f64 {
        self.min_penalty(stats, cfg, c_tilde)
    }

    /// The price term added to the penalty in the oracle bound.
    fn price(&self, stats: TraceStats, cfg: &AggregationConfig, c_tilde: f64) -> f64;

    /// Applies (and where applicable minimises over ν) the regime's
    /// multiplicative factors to assembled bound components.
    fn evaluate(&self, cfg: &AggregationConfig, components: &BoundComponents) -> Result<NuStar>;

    /// Whether the regime is only valid for orthogonal projections under
    /// Gaussian noise.
    fn gaussian_only(&self) -> bool {
        false
    }
}

/// The general sub-Gaussian regime (registry name `theorem1`):
///
/// ```text
///     min pen(t) = (4σ²/(β-4σ²V)) · (1 + (1-δ)(1+2γV)²·C̃²/σ²) · tr(P_t²)·σ²,
///     price(t)   = 2σ²·( tr(P_t) + (2σ²(1-δ)(1+2γV)²/(β-4σ²V)) · (C̃²/σ²) · tr(P_t²) ),
/// ```
///
/// with right-hand-side factors `(1+ε(ν), 1+ε′(ν))` minimised over the
/// admissible `ν`.  At `δ = 0` the constants are sharp (`γ = ε = ε′ = 0`,
/// leading constant exactly 1); at `δ = 1` they are signal-free.
#[derive(Debug, Clone, Copy)]
pub struct SubGaussianRule;

/// Shared by `theorem1` and `custom`.
fn subgaussian_min_penalty(stats: TraceStats, cfg: &AggregationConfig, c_tilde: f64) -> f64 {
    let sigma_sq = cfg.sigma_sq();
    let base = cfg.beta() - 4.0 * sigma_sq * cfg.v_bound();
    let lever = 1.0 + 2.0 * cfg.gamma() * cfg.v_bound();
    let signal = (1.0 - cfg.delta()) * lever * lever * c_tilde * c_tilde / sigma_sq;
    (4.0 * sigma_sq / base) * (1.0 + signal) * stats.trace_sq * sigma_sq
}

/// Shared by `theorem1` and `custom`.
fn subgaussian_price(stats: TraceStats, cfg: &AggregationConfig, c_tilde: f64) -> f64 {
    let sigma_sq = cfg.sigma_sq();
    let base = cfg.beta() - 4.0 * sigma_sq * cfg.v_bound();
    let lever = 1.0 + 2.0 * cfg.gamma() * cfg.v_bound();
    let signal = (2.0 * sigma_sq * (1.0 - cfg.delta()) * lever * lever / base)
        * (c_tilde * c_tilde / sigma_sq);
    2.0 * sigma_sq * (stats.trace + signal * stats.trace_sq)
}

impl BoundRule for SubGaussianRule {
    fn name(&self) -> &'static str {
        "theorem1"
    }

    fn validate(&self, beta: f64, delta: f64, sigma_sq: f64, v_bound: f64) -> Result<()> {
        // γ's domain is exactly this regime's admissible set.
        gamma(beta, delta, sigma_sq, v_bound).map(|_| ())
    }

    fn gamma(&self, beta: f64, delta: f64, sigma_sq: f64, v_bound: f64) -> Result<f64> {
        gamma(beta, delta, sigma_sq, v_bound)
    }

    fn min_penalty(&self, stats: TraceStats, cfg: &AggregationConfig, c_tilde: f64) -> f64 {
        subgaussian_min_penalty(stats, cfg, c_tilde)
    }

    fn price(&self, stats: TraceStats, cfg: &AggregationConfig, c_tilde: f64) -> f64 {
        subgaussian_price(stats, cfg, c_tilde)
    }

    fn evaluate(&self, cfg: &AggregationConfig, components: &BoundComponents) -> Result<NuStar> {
        optimize_nu(cfg.gamma(), components)
    }
}

/// The Gaussian-projection regime (registry name `gaussian_projection`),
/// valid for orthogonal projections under Gaussian noise at any
/// `β > 4σ²(δ+1)`:
///
/// ```text
///     min pen(t) = (2σ⁴/(β-4σ²)) · (1 + 2(1-δ)·C̃²/σ²) · tr(P_t),
///     price(t)   = 2σ²·(1 + (2σ²(1-δ)/(β-4σ²)) · C̃²/σ²) · tr(P_t),
///     ε          = 4σ²δ/(β-4σ²(δ+1)),
/// ```
///
/// with fixed factors `1+2ε` on the loss and `1+ε` on the rest — no ν enters.
/// For projections `tr(P²) = tr(P)`, so the penalty scale matches the
/// sub-Gaussian regime's but with roughly halved constants.
#[derive(Debug, Clone, Copy)]
pub struct GaussianProjectionRule;

impl BoundRule for GaussianProjectionRule {
    fn name(&self) -> &'static str {
        "gaussian_projection"
    }

    fn validate(&self, beta: f64, delta: f64, sigma_sq: f64, _v_bound: f64) -> Result<()> {
        gaussian_epsilon(beta, delta, sigma_sq).map(|_| ())
    }

    fn gamma(&self, _beta: f64, _delta: f64, _sigma_sq: f64, _v_bound: f64) -> Result<f64> {
        Ok(0.0)
    }

    fn min_penalty(&self, stats: TraceStats, cfg: &AggregationConfig, c_tilde: f64) -> f64 {
        let sigma_sq = cfg.sigma_sq();
        let base = cfg.beta() - 4.0 * sigma_sq;
        let signal = 2.0 * (1.0 - cfg.delta()) * c_tilde * c_tilde / sigma_sq;
        (2.0 * sigma_sq * sigma_sq / base) * (1.0 + signal) * stats.trace
    }

    fn price(&self, stats: TraceStats, cfg: &AggregationConfig, c_tilde: f64) -> f64 {
        let sigma_sq = cfg.sigma_sq();
        let base = cfg.beta() - 4.0 * sigma_sq;
        let signal = (2.0 * sigma_sq * (1.0 - cfg.delta()) / base) * (c_tilde * c_tilde / sigma_sq);
        2.0 * (1.0 + signal) * stats.trace * sigma_sq
    }

    fn evaluate(&self, cfg: &AggregationConfig, components: &BoundComponents) -> Result<NuStar> {
        super::validate_components(components)?;
        let eps = gaussian_epsilon(cfg.beta(), cfg.delta(), cfg.sigma_sq())?;
        let loss_factor = 1.0 + 2.0 * eps;
        let additive_factor = 1.0 + eps;
        Ok(NuStar {
            nu: None,
            loss_factor,
            additive_factor,
            objective: loss_factor * components.loss
                + additive_factor * (components.additive + components.complexity),
        })
    }

    fn gaussian_only(&self) -> bool {
        true
    }
}

/// The sub-Gaussian regime with an explicit penalty multiplier (registry
/// name `custom`): weights use `pen(t) = κ·tr(P_t²)·σ²` while admissibility,
/// the minimal penalty, the price and the factors stay those of
/// [`SubGaussianRule`].  Used by κ-threshold sweeps; a κ below the minimal
/// penalty surfaces as a validation error when the bound is assembled.
#[derive(Debug, Clone, Copy)]
pub struct CustomKappaRule {
    /// Penalty multiplier in `pen(t) = κ·tr(P_t²)·σ²`.
    pub kappa: f64,
}

impl BoundRule for CustomKappaRule {
    fn name(&self) -> &'static str {
        "custom"
    }

    fn validate(&self, beta: f64, delta: f64, sigma_sq: f64, v_bound: f64) -> Result<()> {
        gamma(beta, delta, sigma_sq, v_bound).map(|_| ())
    }

    fn gamma(&self, beta: f64, delta: f64, sigma_sq: f64, v_bound: f64) -> Result<f64> {
        gamma(beta, delta, sigma_sq, v_bound)
    }

    fn min_penalty(&self, stats: TraceStats, cfg: &AggregationConfig, c_tilde: f64) -> f64 {
        subgaussian_min_penalty(stats, cfg, c_tilde)
    }

    fn penalty(&self, stats: TraceStats, cfg: &AggregationConfig, _c_tilde: f64) -> f64 {
        self.kappa * stats.trace_sq * cfg.sigma_sq()
    }

    fn price(&self, stats: TraceStats, cfg: &AggregationConfig, c_tilde: f64) -> f64 {
        subgaussian_price(stats, cfg, c_tilde)
    }

    fn evaluate(&self, cfg: &AggregationConfig, components: &BoundComponents) -> Result<NuStar> {
        optimize_nu(cfg.gamma(), components)
    }
}

/// Parameters a registry entry may need to build its rule.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RuleParams {
    /// Penalty multiplier, required by the `custom` rule and ignored by the
    /// others.
    pub kappa: Option<f64>,
}

/// A named constructor in the rule registry.
pub struct RuleEntry {
    /// Registry key, as written in configuration files.
    pub name: &'static str,
    build: fn(&RuleParams) -> Result<Arc<dyn BoundRule>>,
}

/// The registered bound rules.
pub const RULES: &[RuleEntry] = &[
    RuleEntry {
        name: "theorem1",
        build: |_| Ok(subgaussian()),
    },
    RuleEntry {
        name: "gaussian_projection",
        build: |_| Ok(gaussian_projection()),
    },
    RuleEntry {
        name: "custom",
        build: |params| custom_kappa(params.kappa.ok_or(EwaError::MissingKappa)?),
    },
];

/// All registered rule names, for error messages and help text.
#[must_use]
pub fn rule_names() -> String {
    RULES
        .iter()
        .map(|entry| entry.name)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Looks up a rule by its registry name and builds it.
pub fn rule_by_name(name: &str, params: &RuleParams) -> Result<Arc<dyn BoundRule>> {
    for entry in RULES {
        if entry.name == name {
            return (entry.build)(params);
        }
    }
    Err(EwaError::UnknownName {
        kind: "bound rule",
        name: name.to_string(),
        known: rule_names(),
    })
}

/// The general sub-Gaussian rule.
#[must_use]
pub fn subgaussian() -> Arc<dyn BoundRule> {
    Arc::new(SubGaussianRule)
}

/// The Gaussian-projection rule.
#[must_use]
pub fn gaussian_projection() -> Arc<dyn BoundRule> {
    Arc::new(GaussianProjectionRule)
}

/// The custom κ-multiplier rule; κ must be finite and non-negative.
pub fn custom_kappa(kappa: f64) -> Result<Arc<dyn BoundRule>> {
    if !kappa.is_finite() || kappa < 0.0 {
        return Err(EwaError::NonFinite {
            context: "kappa",
            value: kappa,
        });
    }
    Ok(Arc::new(CustomKappaRule { kappa }))
}
