//! Monte Carlo verification of the oracle, deviation, and moment bounds.
//!
//! Each trial draws `Y = f0 + W`, forms the Gibbs aggregate, and compares
//! the realised loss `‖f0 − f_EWA‖²` against the right-hand side assembled
//! by the active bound rule ([`run_trial`]); an experiment aggregates
//! independent trials into coverage and mean-loss summaries and sets the
//! expectation-side bound next to them ([`run_experiment`]).  Two finer
//! probes target the machinery underneath the oracle bounds:
//! [`deviation_margin`] evaluates the in-probability deviation display for a
//! chosen pair of weight vectors, and [`exp_moment_check`] estimates the
//! exponential moment of the risk-difference statistic
//!
//! ```text
//!     Δ_{t,u} = ‖f0 − f̂_t‖² − r_t − ‖f0 − f̂_u‖² + r_u
//!             = 2·( Wᵀ(P_t−P_u)W + Wᵀ(P_t−P_u)f0 − σ²·tr(P_t−P_u) ),
//! ```
//!
//! against its closed-form upper bound.
//!
//! Verification is one-sided with Monte Carlo slack: sampling can refute a
//! bound but never prove it, so a check passes when the empirical quantity
//! does not exceed the bound by more than three standard errors.
//!
//! Every routine is a pure function of its inputs and seeds.  Trial `i` of
//! an experiment draws from stream `i` of the master-seeded generator, so
//! any single trial can be reproduced in isolation and whole reports are
//! bit-identical across runs.

use crate::aggregation::{gibbs_weights, kl_divergence, WeightVector};
use crate::error::{EwaError, Result};
use crate::estimators::EstimatorCollection;
use crate::linalg::{axpy, dist_sq, dot, norm_sq, Basis};
use crate::noise::{trial_rng, NoiseKind, NoiseModel};
use crate::risk::{
    bound_rhs, penalties, prices, sure, tilde_sup_norm, AggregationConfig, BoundComponents,
};
use crate::signal::{SignalKind, SignalSpec};

/// Minimum sample count accepted by [`exp_moment_check`]: below this the
/// three-standard-error slack is too coarse to refute anything.
pub const MIN_MOMENT_SAMPLES: usize = 100_000;

/// The free parameter used when evaluating the general deviation display,
/// which holds for every ν > 0; the margin is reported at this fixed choice
/// rather than optimised.
pub const DEVIATION_NU: f64 = 1.0;

// ---------------------------------------------------------------------------
// Report types
// ---------------------------------------------------------------------------

/// Per-estimator account of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorBreakdown {
    /// The estimator's label within the collection.
    pub label: String,
    /// Realised loss `‖f0 − f̂_t‖²` for this draw.
    pub loss: f64,
    /// Unbiased risk estimate `r_t` for this draw.
    pub risk: f64,
    /// Penalty fed into the Gibbs weights.
    pub penalty: f64,
    /// Price term attached to this estimator in the bound.
    pub price: f64,
    /// Complexity cost `β·(2·ln(1/π(t)) + ln(1/η))` of naming this
    /// estimator as the comparator; infinite when the prior ignores it.
    pub kl_term: f64,
    /// Posterior (Gibbs) weight of this estimator.
    pub weight: f64,
}

/// Outcome of a single draw: the aggregate's loss against the best bound.
///
/// `holds` records `lhs ≤ rhs`, where `rhs` minimises the rule's
/// right-hand side over all prior-supported comparators (and over ν where
/// the rule has one).  The totals are posterior-weighted:
/// `pen_total = Σ_t ρ(t)·pen(t)` and likewise for `price_total`, while
/// `kl_term` is the complexity cost of the winning comparator.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    /// Stream index this trial drew from.
    pub trial_index: u64,
    /// Master seed of the experiment the trial belongs to.
    pub master_seed: u64,
    /// `‖f0 − f_EWA‖²`.
    pub lhs: f64,
    /// Best right-hand side over comparators.
    pub rhs: f64,
    /// Whether `lhs ≤ rhs`.
    pub holds: bool,
    /// Index of the comparator achieving `rhs`.
    pub best_t: usize,
    /// The ν minimising the winning bound, when the rule has one.
    pub nu_star: Option<f64>,
    /// The configuration's γ, echoed for reporting.
    pub gamma: f64,
    /// Posterior-weighted penalty `Σ_t ρ(t)·pen(t)`.
    pub pen_total: f64,
    /// Posterior-weighted price `Σ_t ρ(t)·price(t)`.
    pub price_total: f64,
    /// Complexity cost of the winning comparator.
    pub kl_term: f64,
    /// Per-estimator breakdown, in collection order.
    pub per_t: Vec<EstimatorBreakdown>,
}

/// Summary of independent trials plus the expectation-side bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    /// Number of trials run.
    pub n_trials: usize,
    /// Number of trials whose in-probability bound held.
    pub n_holds: usize,
    /// `n_holds / n_trials`.
    pub empirical_coverage: f64,
    /// Mean realised loss of the aggregate.
    pub mean_lhs: f64,
    /// The expectation-display bound: KL doubled, no confidence term.
    pub expectation_rhs: f64,
    /// The coverage the theory guarantees, `1 − η`.
    pub coverage_target: f64,
    /// The individual trials, in stream order.
    pub trials: Vec<TrialResult>,
}

/// Outcome of one exponential-moment check for a pair `(t, u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    /// The estimator indices checked.
    pub pair: (usize, usize),
    /// Monte Carlo mean of the exponential statistic.
    pub empirical: f64,
    /// Closed-form upper bound on its expectation.
    pub bound: f64,
    /// Standard error of the Monte Carlo mean.
    pub stderr: f64,
    /// `empirical ≤ bound + 3·stderr`.
    pub ok: bool,
}

/// A named, self-consistent experiment setup.
#[derive(Debug, Clone)]
pub struct Scenario {
    /// Short identifier, e.g. `"n64-sine-proj"`.
    pub name: String,
    /// The unknown regression vector's family.
    pub signal: SignalSpec,
    /// The smoothers to aggregate.
    pub collection: EstimatorCollection,
    /// The noise model generating `W`.
    pub noise: NoiseModel,
    /// Temperature, confidence, and bound rule.
    pub config: AggregationConfig,
}

// ---------------------------------------------------------------------------
// Compatibility
// ---------------------------------------------------------------------------

/// Verifies that a configuration actually describes the noise model and
/// collection it is about to be used with: the configured σ² must equal the
/// noise's certified sub-Gaussian parameter, the configured V must dominate
/// the collection's largest spectral norm, and a projections-only rule must
/// get orthogonal projections under Gaussian noise.
pub fn check_compatibility(
    collection: &EstimatorCollection,
    noise: &NoiseModel,
    cfg: &AggregationConfig,
) -> Result<()> {
    if cfg.sigma_sq() != noise.subgaussian_param() {
        return Err(EwaError::ConfigMismatch {
            field: "sigma_sq",
            configured: cfg.sigma_sq(),
            origin: "noise model",
            actual: noise.subgaussian_param(),
        });
    }
    if cfg.v_bound() < collection.max_spec_norm() {
        return Err(EwaError::ConfigMismatch {
            field: "v_bound",
            configured: cfg.v_bound(),
            origin: "estimator collection",
            actual: collection.max_spec_norm(),
        });
    }
    if cfg.rule().gaussian_only() {
        if let Some(est) = collection.items().iter().find(|e| !e.is_projection()) {
            return Err(EwaError::NotAProjection {
                label: est.label().to_string(),
                rule: cfg.rule().name(),
            });
        }
        if noise.kind() != NoiseKind::Gaussian {
            return Err(EwaError::NotGaussianNoise {
                kind: noise.kind().name(),
                rule: cfg.rule().name(),
            });
        }
    }
    Ok(())
}

fn check_signal_dimension(signal: &SignalSpec, collection: &EstimatorCollection) -> Result<()> {
    if signal.n() != collection.n() {
        return Err(EwaError::DimensionMismatch {
            context: "signal versus estimator collection",
            expected: collection.n(),
            got: signal.n(),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Trials and experiments
// ---------------------------------------------------------------------------

/// Runs one draw: samples `W` from stream `trial_index` of `master_seed`,
/// aggregates, and tests the in-probability oracle bound.
///
/// The right-hand side is minimised over every comparator the prior
/// supports; comparators with zero prior mass contribute a vacuous `+∞`.
pub fn run_trial(
    signal: &SignalSpec,
    collection: &EstimatorCollection,
    noise: &NoiseModel,
    cfg: &AggregationConfig,
    master_seed: u64,
    trial_index: u64,
) -> Result<TrialResult> {
    check_compatibility(collection, noise, cfg)?;
    check_signal_dimension(signal, collection)?;
    let n = collection.n();
    let f0 = signal.generate();
    let w = noise.sample(n, &mut trial_rng(master_seed, trial_index));
    let y: Vec<f64> = f0.iter().zip(&w).map(|(s, e)| s + e).collect();

    let c_tilde = tilde_sup_norm(&f0, collection)?;
    let pens = penalties(collection, cfg, c_tilde);
    let price_v = prices(collection, cfg, c_tilde);

    let fits: Vec<Vec<f64>> = collection
        .items()
        .iter()
        .map(|est| est.apply(&y))
        .collect::<Result<_>>()?;
    let losses: Vec<f64> = fits.iter().map(|fit| dist_sq(&f0, fit)).collect();
    let risks: Vec<f64> = collection
        .items()
        .iter()
        .map(|est| sure(&y, est, cfg.sigma_sq()))
        .collect::<Result<_>>()?;

    let penalized: Vec<f64> = risks.iter().zip(&pens).map(|(r, p)| r + p).collect();
    let weights = gibbs_weights(&penalized, cfg.beta(), collection.prior())?;

    let mut f_ewa = vec![0.0; n];
    for (&wt, fit) in weights.weights().iter().zip(&fits) {
        if wt > 0.0 {
            axpy(wt, fit, &mut f_ewa);
        }
    }
    let lhs = dist_sq(&f0, &f_ewa);

    let mut best: Option<(usize, crate::risk::BoundEvaluation)> = None;
    for t_star in 0..collection.len() {
        let eval = bound_rhs(collection, cfg, c_tilde, t_star, &losses, &pens)?;
        if best.as_ref().is_none_or(|(_, b)| eval.rhs < b.rhs) {
            best = Some((t_star, eval));
        }
    }
    let (best_t, best_eval) = best.expect("collections are non-empty");

    let per_t: Vec<EstimatorBreakdown> = (0..collection.len())
        .map(|t| {
            let p = collection.prior()[t];
            let kl_term = if p > 0.0 {
                cfg.beta() * (2.0 * (1.0 / p).ln() + (1.0 / cfg.eta()).ln())
            } else {
                f64::INFINITY
            };
            EstimatorBreakdown {
                label: collection.items()[t].label().to_string(),
                loss: losses[t],
                risk: risks[t],
                penalty: pens[t],
                price: price_v[t],
                kl_term,
                weight: weights.weights()[t],
            }
        })
        .collect();

    Ok(TrialResult {
        trial_index,
        master_seed,
        lhs,
        rhs: best_eval.rhs,
        holds: lhs <= best_eval.rhs,
        best_t,
        nu_star: best_eval.nu_star.nu,
        gamma: cfg.gamma(),
        pen_total: weights.expect(&pens),
        price_total: weights.expect(&price_v),
        kl_term: per_t[best_t].kl_term,
        per_t,
    })
}

/// Runs `n_trials` independent trials (streams `0..n_trials` of
/// `master_seed`) and summarises coverage, mean loss, and the
/// expectation-side bound.
pub fn run_experiment(
    signal: &SignalSpec,
    collection: &EstimatorCollection,
    noise: &NoiseModel,
    cfg: &AggregationConfig,
    n_trials: usize,
    master_seed: u64,
) -> Result<ExperimentReport> {
    if n_trials == 0 {
        return Err(EwaError::TooFewSamples {
            context: "experiment trials",
            minimum: 1,
            got: 0,
        });
    }
    let trials: Vec<TrialResult> = (0..n_trials)
        .map(|i| run_trial(signal, collection, noise, cfg, master_seed, i as u64))
        .collect::<Result<_>>()?;
    let n_holds = trials.iter().filter(|t| t.holds).count();
    let mean_lhs = trials.iter().map(|t| t.lhs).sum::<f64>() / n_trials as f64;
    let expectation_rhs = expectation_bound(signal, collection, noise, cfg)?;
    Ok(ExperimentReport {
        n_trials,
        n_holds,
        empirical_coverage: n_holds as f64 / n_trials as f64,
        mean_lhs,
        expectation_rhs,
        coverage_target: 1.0 - cfg.eta(),
        trials,
    })
}

/// Exact per-estimator expected losses,
///
/// ```text
///     E‖f0 − P_t Y‖² = ‖(I − P_t) f0‖² + Var(W_1)·tr(P_t²),
/// ```
///
/// valid because all three noise models have i.i.d. coordinates, hence
/// covariance `Var(W_1)·I`.  Note the true coordinate variance enters here,
/// not the certified sub-Gaussian parameter; the two differ for the bounded
/// uniform model.
pub fn exact_expected_losses(
    f0: &[f64],
    collection: &EstimatorCollection,
    noise: &NoiseModel,
) -> Result<Vec<f64>> {
    collection
        .items()
        .iter()
        .map(|est| {
            let bias_sq = dist_sq(f0, &est.apply(f0)?);
            Ok(bias_sq + noise.variance() * est.trace_stats().trace_sq)
        })
        .collect()
}

/// The expectation-display bound: the in-probability right-hand side with
/// the confidence term dropped, the KL factor doubled, and the realised
/// losses replaced by their exact expectations,
///
/// ```text
///     min over t*:  loss_factor·E‖f0 − f̂_t*‖²
///                   + additive_factor·( pen(t*) + price(t*) + 2β·ln(1/π(t*)) ).
/// ```
pub fn expectation_bound(
    signal: &SignalSpec,
    collection: &EstimatorCollection,
    noise: &NoiseModel,
    cfg: &AggregationConfig,
) -> Result<f64> {
    check_compatibility(collection, noise, cfg)?;
    check_signal_dimension(signal, collection)?;
    let f0 = signal.generate();
    let c_tilde = tilde_sup_norm(&f0, collection)?;
    let pens = penalties(collection, cfg, c_tilde);
    let price_v = prices(collection, cfg, c_tilde);
    let expected = exact_expected_losses(&f0, collection, noise)?;

    let mut best = f64::INFINITY;
    for t in 0..collection.len() {
        let p = collection.prior()[t];
        if p <= 0.0 {
            continue;
        }
        let components = BoundComponents {
            loss: expected[t],
            additive: pens[t] + price_v[t],
            complexity: 2.0 * cfg.beta() * (1.0 / p).ln(),
        };
        let star = cfg.rule().evaluate(cfg, &components)?;
        best = best.min(star.objective);
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Deviation and moment probes
// ---------------------------------------------------------------------------

/// Draws once and returns `rhs − lhs` of the deviation display for the
/// weight vectors `rho` and `mu`, where
///
/// ```text
///     lhs = ∫(‖f0 − f̂_t‖² − r_t) dρ(t) − ∫(‖f0 − f̂_u‖² − r_u) dμ(u)
/// ```
///
/// and `rhs` is the display the active rule's proof rests on.  For the
/// projections-under-Gaussian-noise rule,
///
/// ```text
///     rhs = (4δσ²/(β−4σ²))·( ∫loss dρ + ∫loss dμ )
///         + (4σ²/(β−4σ²))·( σ² + (1−δ)·C̃² )·∫tr(P_t) dρ
///         + 2σ²·( 1 + 2(1−δ)·C̃²/(β−4σ²) )·∫tr(P_u) dμ
///         + β·( KL(ρ,π) + KL(μ,π) + ln(1/η) );
/// ```
///
/// for the general sub-Gaussian rules, with `ν` fixed to [`DEVIATION_NU`],
///
/// ```text
///     rhs = (1+ν)γ·∫loss dρ
///         + (4σ²/(β−4σ²V))·( σ² + (1−δ)(1+2γV)²·C̃² )·∫tr(P_t²) dρ
///         + 2σ²·( ∫tr(P_u) dμ + (2(1−δ)(1+2γV)²/(β−4σ²V))·C̃²·∫tr(P_u²) dμ )
///         + (1+1/ν)γ·∫loss dμ
///         + β·( KL(ρ,π) + KL(μ,π) + ln(1/η) ).
/// ```
///
/// A nonnegative return value means the display held for this draw; the
/// theory promises that with probability at least `1 − η`.
pub fn deviation_margin(
    signal: &SignalSpec,
    collection: &EstimatorCollection,
    noise: &NoiseModel,
    cfg: &AggregationConfig,
    rho: &WeightVector,
    mu: &WeightVector,
    seed: u64,
) -> Result<f64> {
    check_compatibility(collection, noise, cfg)?;
    check_signal_dimension(signal, collection)?;
    let m = collection.len();
    if rho.len() != m || mu.len() != m {
        return Err(EwaError::DimensionMismatch {
            context: "deviation weight vectors",
            expected: m,
            got: rho.len().min(mu.len()),
        });
    }

    let n = collection.n();
    let f0 = signal.generate();
    let w = noise.sample(n, &mut trial_rng(seed, 0));
    let y: Vec<f64> = f0.iter().zip(&w).map(|(s, e)| s + e).collect();

    let mut losses = vec![0.0; m];
    let mut centred = vec![0.0; m];
    for (t, est) in collection.items().iter().enumerate() {
        losses[t] = dist_sq(&f0, &est.apply(&y)?);
        centred[t] = losses[t] - sure(&y, est, cfg.sigma_sq())?;
    }
    let lhs = rho.expect(&centred) - mu.expect(&centred);

    let traces: Vec<f64> = collection
        .items()
        .iter()
        .map(|e| e.trace_stats().trace)
        .collect();
    let traces_sq: Vec<f64> = collection
        .items()
        .iter()
        .map(|e| e.trace_stats().trace_sq)
        .collect();
    let c_tilde = tilde_sup_norm(&f0, collection)?;
    let c_sq = c_tilde * c_tilde;
    let kl_part = cfg.beta()
        * (kl_divergence(rho.weights(), collection.prior())?
            + kl_divergence(mu.weights(), collection.prior())?
            + (1.0 / cfg.eta()).ln());

    let s = cfg.sigma_sq();
    let rhs = if cfg.rule().gaussian_only() {
        let base = cfg.beta() - 4.0 * s;
        4.0 * cfg.delta() * s / base * (rho.expect(&losses) + mu.expect(&losses))
            + 4.0 * s / base * (s + (1.0 - cfg.delta()) * c_sq) * rho.expect(&traces)
            + 2.0 * s * (1.0 + 2.0 * (1.0 - cfg.delta()) * c_sq / base) * mu.expect(&traces)
            + kl_part
    } else {
        let nu = DEVIATION_NU;
        let gamma = cfg.gamma();
        let lever = 1.0 + 2.0 * gamma * cfg.v_bound();
        let base = cfg.beta() - 4.0 * s * cfg.v_bound();
        (1.0 + nu) * gamma * rho.expect(&losses)
            + 4.0 * s / base
                * (s + (1.0 - cfg.delta()) * lever * lever * c_sq)
                * rho.expect(&traces_sq)
            + 2.0
                * s
                * (mu.expect(&traces)
                    + 2.0 * (1.0 - cfg.delta()) * lever * lever / base
                        * c_sq
                        * mu.expect(&traces_sq))
            + (1.0 + 1.0 / nu) * gamma * mu.expect(&losses)
            + kl_part
    };
    Ok(rhs - lhs)
}

/// Estimates `E[exp(...)]` of the risk-difference statistic for the pair
/// `(t, u)` over `samples` fresh draws and compares it to its closed-form
/// bound.
///
/// For the projections-under-Gaussian-noise rule the plain statistic is
/// checked:
///
/// ```text
///     E exp(Δ_{t,u}/β) ≤ exp( (2σ²/β)·( tr(P_u)
///                         + (2σ²·tr(P_t) + ‖(P_t−P_u)f0‖²)/(β−4σ²) ) );
/// ```
///
/// for the general sub-Gaussian rules the γ-corrected statistic is:
///
/// ```text
///     E exp( Δ_{t,u}/β + (γ/β)·(‖(P_t−P_u)f0‖² − ‖(P_t−P_u)Y‖²) )
///       ≤ exp( (2σ²/β)·( tr(P_u) + (2σ²/(β−4σ²V))·tr(P_t²)
///                        + ((1+2γV)²/(β−4σ²V))·‖(P_t−P_u)f0‖² ) ).
/// ```
///
/// The check is one-sided: `ok` when the empirical mean does not exceed the
/// bound by more than three standard errors.
pub fn exp_moment_check(
    pair: (usize, usize),
    signal: &SignalSpec,
    collection: &EstimatorCollection,
    noise: &NoiseModel,
    cfg: &AggregationConfig,
    samples: usize,
    seed: u64,
) -> Result<MomentReport> {
    check_compatibility(collection, noise, cfg)?;
    check_signal_dimension(signal, collection)?;
    let (t, u) = pair;
    let m = collection.len();
    if t >= m || u >= m {
        return Err(EwaError::DimensionMismatch {
            context: "moment-check estimator indices",
            expected: m,
            got: t.max(u),
        });
    }
    if samples < MIN_MOMENT_SAMPLES {
        return Err(EwaError::TooFewSamples {
            context: "exponential-moment check",
            minimum: MIN_MOMENT_SAMPLES,
            got: samples,
        });
    }

    let n = collection.n();
    let est_t = &collection.items()[t];
    let est_u = &collection.items()[u];
    let f0 = signal.generate();
    let pt_f0 = est_t.apply(&f0)?;
    let pu_f0 = est_u.apply(&f0)?;
    let diff_f0: Vec<f64> = pt_f0.iter().zip(&pu_f0).map(|(a, b)| a - b).collect();
    let diff_f0_sq = norm_sq(&diff_f0);

    let s = cfg.sigma_sq();
    let beta = cfg.beta();
    let stats_t = est_t.trace_stats();
    let stats_u = est_u.trace_stats();
    let gaussian_form = cfg.rule().gaussian_only();
    let gamma = cfg.gamma();
    let bound = if gaussian_form {
        let base = beta - 4.0 * s;
        (2.0 * s / beta * (stats_u.trace + (2.0 * s * stats_t.trace + diff_f0_sq) / base)).exp()
    } else {
        let base = beta - 4.0 * s * cfg.v_bound();
        let lever = 1.0 + 2.0 * gamma * cfg.v_bound();
        (2.0 * s / beta
            * (stats_u.trace
                + 2.0 * s / base * stats_t.trace_sq
                + lever * lever / base * diff_f0_sq))
            .exp()
    };

    let mut rng = trial_rng(seed, 0);
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for k in 1..=samples {
        let w = noise.sample(n, &mut rng);
        let pt_w = est_t.apply(&w)?;
        let pu_w = est_u.apply(&w)?;
        let quad = dot(&w, &pt_w) - dot(&w, &pu_w);
        let cross = dot(&w, &diff_f0);
        let delta = 2.0 * (quad + cross - s * (stats_t.trace - stats_u.trace));
        let exponent = if gaussian_form {
            delta / beta
        } else {
            let diff_y_sq: f64 = diff_f0
                .iter()
                .zip(&pt_w)
                .zip(&pu_w)
                .map(|((d, a), b)| {
                    let v = d + a - b;
                    v * v
                })
                .sum();
            (delta + gamma * (diff_f0_sq - diff_y_sq)) / beta
        };
        let x = exponent.exp();
        let shift = x - mean;
        mean += shift / k as f64;
        m2 += shift * (x - mean);
    }
    let stderr = (m2 / (samples as f64 * (samples - 1) as f64)).sqrt();
    Ok(MomentReport {
        pair: (t, u),
        empirical: mean,
        bound,
        stderr,
        ok: mean <= bound + 3.0 * stderr,
    })
}

// ---------------------------------------------------------------------------
// Built-in scenarios
// ---------------------------------------------------------------------------

/// The standard rank ladder `{0, 1, 2, 4, …} ∪ {n}`: powers of two below
/// `n`, bracketed by the zero smoother and the identity.
#[must_use]
pub fn rank_ladder(n: usize) -> Vec<usize> {
    let mut ranks = vec![0];
    let mut k = 1;
    while k < n {
        ranks.push(k);
        k *= 2;
    }
    ranks.push(n);
    ranks
}

/// The reference setup: `n = 64`, the eight ladder projections in the
/// cosine basis under unit Gaussian noise, a single sinusoid signal, and a
/// signal-free configuration at the weak-regime floor temperature
/// (`δ = 1`, `β = 20σ²V`, `η = 0.05`).
pub fn reference_scenario() -> Result<Scenario> {
    let n = 64;
    Ok(Scenario {
        name: "reference".to_string(),
        signal: SignalSpec::new(
            SignalKind::Sinusoid {
                amplitude: 3.0,
                frequency: 4,
            },
            n,
        )?,
        collection: EstimatorCollection::nested_projections(Basis::cosine(n), &rank_ladder(n))?,
        noise: NoiseModel::new(NoiseKind::Gaussian, 1.0)?,
        config: AggregationConfig::subgaussian(20.0, 1.0, 0.05, 1.0, 1.0)?,
    })
}

/// The built-in suite: for `n ∈ {32, 64}` and four signal shapes (zero,
/// single sinusoid, three-sinusoid mix, step), one scenario aggregating the
/// ladder projections and one aggregating a tent-shrinkage family — sixteen
/// scenarios spanning low and high signal-to-noise regimes.
pub fn default_suite() -> Result<Vec<Scenario>> {
    let signals = |n: usize| -> Result<Vec<(&'static str, SignalSpec)>> {
        Ok(vec![
            ("zero", SignalSpec::new(SignalKind::Zero, n)?),
            (
                "sine",
                SignalSpec::new(
                    SignalKind::Sinusoid {
                        amplitude: 3.0,
                        frequency: 4,
                    },
                    n,
                )?,
            ),
            (
                "mix",
                SignalSpec::new(
                    SignalKind::SinusoidMix {
                        components: vec![(2.0, 1), (1.0, 3), (0.5, 8)],
                    },
                    n,
                )?,
            ),
            (
                "step",
                SignalSpec::new(
                    SignalKind::Step {
                        low: -1.0,
                        high: 1.0,
                        position: 0.5,
                    },
                    n,
                )?,
            ),
        ])
    };

    let mut suite = Vec::new();
    for n in [32, 64] {
        let cutoffs: Vec<usize> = rank_ladder(n).into_iter().skip(1).collect();
        for (tag, signal) in signals(n)? {
            for (family, collection) in [
                (
                    "proj",
                    EstimatorCollection::nested_projections(Basis::cosine(n), &rank_ladder(n))?,
                ),
                (
                    "tent",
                    EstimatorCollection::shrinkage_family(Basis::cosine(n), &cutoffs)?,
                ),
            ] {
                suite.push(Scenario {
                    name: format!("n{n}-{tag}-{family}"),
                    signal: signal.clone(),
                    collection,
                    noise: NoiseModel::new(NoiseKind::Gaussian, 1.0)?,
                    config: AggregationConfig::subgaussian(20.0, 1.0, 0.05, 1.0, 1.0)?,
                });
            }
        }
    }
    Ok(suite)
}
