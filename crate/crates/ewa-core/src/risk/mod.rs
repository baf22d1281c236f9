//! Risk estimation and the constant calculus of the oracle bounds.
//!
//! For a smoother `P` acting on `Y = f0 + W` with `E W = 0` and
//! `Cov W = σ²I`, Stein's unbiased risk estimate
//!
//! ```text
//!     r = ‖Y - P Y‖² + 2σ² tr(P) - nσ²
//! ```
//!
//! satisfies `E r = E ‖f0 - P Y‖²`.  The aggregation guarantees control the
//! aggregate's loss by the best penalized oracle risk; their constants are
//! computed here:
//!
//! - [`gamma`] — the quadratic-term coefficient
//!   `γ = [β - 4σ²V(1+2δ) - √(β-4σ²V)·√(β-4σ²V(1+4δ))] / (16σ²δV²)` for
//!   `δ > 0` (and `γ = 0` at `δ = 0`), defined whenever `β > 4σ²V` and, for
//!   `δ > 0`, `β ≥ 4σ²V(1+4δ)`; it always satisfies `0 < 2γV ≤ 1`.
//! - [`epsilons`] — the trade-off factors on the admissible set
//!   `N = {ν > 0 : (1+ν)γ < 1}`:
//!   `ε′(ν) = 1/(1-(1+ν)γ) - 1` and `ε(ν) = (1+ν)²γ / (ν(1-(1+ν)γ))`.
//! - [`optimize_nu`] — golden-section minimisation of
//!   `(1+ε(ν))·A + (1+ε′(ν))·(B + K)` over `N`.
//! - [`tilde_sup_norm`] — the smallest `C ≥ 0` with
//!   `‖P_t f0‖² ≤ C² tr(P_t²)` across the family, the signal-size proxy the
//!   sharp penalties depend on.
//! - [`bound_rhs`] — assembly of the full right-hand side
//!   `loss_factor·loss(t*) + additive_factor·(pen(t*) + price(t*) + K)` with
//!   `K = β(2·ln(1/π(t*)) + ln(1/η))`, for the Dirac comparator at `t*`.
//!
//! Penalty and price formulas themselves live behind the interchangeable
//! [`rules::BoundRule`] strategies; κ-threshold predicates for penalties of
//! the form `pen = κ·tr(P²)·σ²` are exposed as [`kappa_weak_valid`] and
//! [`kappa_exact_valid`].
//!
//! Every denominator is validated strictly positive at configuration
//! construction — nothing is clamped silently.

pub mod rules;

use std::sync::Arc;

use crate::error::{EwaError, Result};
use crate::estimators::{EstimatorCollection, LinearEstimator};
use crate::linalg::{dist_sq, norm_sq};

pub use rules::{rule_by_name, BoundRule, RuleParams, RULES};

/// Relative slack when checking a supplied penalty against the minimal
/// admissible one, absorbing round-off when callers recompute the minimum.
pub const PENALTY_CHECK_TOL: f64 = 1e-12;

/// Interior margin by which the open admissible interval `(0, 1/γ - 1)` is
/// shrunk before golden-section search.
pub const NU_INTERIOR_MARGIN: f64 = 1e-9;

/// Stein's unbiased risk estimate `‖y - P y‖² + 2σ²tr(P) - nσ²`.
///
/// Unbiased for the true risk `E‖f0 - P Y‖²` when the noise has covariance
/// exactly `σ²I` (Gaussian, Rademacher, or uniform at its true variance);
/// under a conservative sub-Gaussian parameter it over-estimates on average.
pub fn sure(y: &[f64], est: &LinearEstimator, sigma_sq: f64) -> Result<f64> {
    if !(sigma_sq > 0.0) {
        return Err(EwaError::NotPositive {
            name: "sigma_sq",
            value: sigma_sq,
        });
    }
    let fitted = est.apply(y)?;
    let n = y.len() as f64;
    Ok(dist_sq(y, &fitted) + 2.0 * sigma_sq * est.trace_stats().trace - n * sigma_sq)
}

/// The smallest `C ≥ 0` such that `‖P_t f0‖² ≤ C² tr(P_t²)` for every member
/// of the family — equivalently `max_t ‖P_t f0‖ / √tr(P_t²)` over members
/// with `tr(P_t²) > 0` (and 0 for a family of zero smoothers).
pub fn tilde_sup_norm(f0: &[f64], collection: &EstimatorCollection) -> Result<f64> {
    if f0.len() != collection.n() {
        return Err(EwaError::DimensionMismatch {
            context: "tilde_sup_norm signal",
            expected: collection.n(),
            got: f0.len(),
        });
    }
    let mut c: f64 = 0.0;
    for est in collection.items() {
        let trace_sq = est.trace_stats().trace_sq;
        if trace_sq > 0.0 {
            let image_norm_sq = norm_sq(&est.apply(f0)?);
            c = c.max((image_norm_sq / trace_sq).sqrt());
        }
    }
    Ok(c)
}

/// The quadratic-term coefficient γ of the risk-estimate deviation control.
///
/// Admissibility: `δ ∈ [0, 1]`, `β > 4σ²V`, and for `δ > 0` additionally
/// `β ≥ 4σ²V(1+4δ)`.  On that domain
///
/// ```text
///     γ = [β - 4σ²V(1+2δ) - √(β-4σ²V)·√(β-4σ²V(1+4δ))] / (16σ²δV²),
/// ```
///
/// with the `δ = 0` limit `γ = 0`, and `0 < 2γV ≤ 1` whenever `δ > 0`
/// (equality exactly at `β = 4σ²V(1+4δ)`).
pub fn gamma(beta: f64, delta: f64, sigma_sq: f64, v_bound: f64) -> Result<f64> {
    validate_base(beta, delta, sigma_sq, v_bound)?;
    if delta == 0.0 {
        return Ok(0.0);
    }
    let base = 4.0 * sigma_sq * v_bound;
    let floor = base * (1.0 + 4.0 * delta);
    if beta < floor {
        return Err(EwaError::TemperatureBelowDeltaFloor {
            beta,
            delta,
            threshold: floor,
        });
    }
    let numerator =
        beta - base * (1.0 + 2.0 * delta) - (beta - base).sqrt() * (beta - floor).sqrt();
    Ok(numerator / (16.0 * sigma_sq * delta * v_bound * v_bound))
}

/// Shared admissibility checks: positivity, ranges, and `β > 4σ²V`.
fn validate_base(beta: f64, delta: f64, sigma_sq: f64, v_bound: f64) -> Result<()> {
    for (name, value) in [("sigma_sq", sigma_sq), ("beta", beta)] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(EwaError::NotPositive { name, value });
        }
    }
    if !delta.is_finite() || !(0.0..=1.0).contains(&delta) {
        return Err(EwaError::DeltaOutOfRange { delta });
    }
    if !v_bound.is_finite() || v_bound < 0.5 {
        return Err(EwaError::SpectralBoundTooSmall {
            v_bound,
            required: 0.5,
        });
    }
    let base = 4.0 * sigma_sq * v_bound;
    if beta <= base {
        return Err(EwaError::TemperatureNotAboveBase {
            beta,
            threshold: base,
        });
    }
    Ok(())
}

/// The fixed optimism factor of the Gaussian-projection regime,
/// `ε = 4σ²δ / (β - 4σ²(δ+1))`, defined for `β > 4σ²(δ+1)`.
pub fn gaussian_epsilon(beta: f64, delta: f64, sigma_sq: f64) -> Result<f64> {
    if !(sigma_sq > 0.0) {
        return Err(EwaError::NotPositive {
            name: "sigma_sq",
            value: sigma_sq,
        });
    }
    if !delta.is_finite() || !(0.0..=1.0).contains(&delta) {
        return Err(EwaError::DeltaOutOfRange { delta });
    }
    let threshold = 4.0 * sigma_sq * (delta + 1.0);
    if !(beta > threshold) {
        return Err(EwaError::TemperatureNotAboveGaussian { beta, threshold });
    }
    Ok(4.0 * sigma_sq * delta / (beta - threshold))
}

/// The pair `(ε, ε′)` entering the oracle bound's multiplicative factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Epsilons {
    /// Factor excess on the oracle loss: the bound multiplies it by `1+ε`.
    pub eps: f64,
    /// Factor excess on penalty, price and complexity terms: `1+ε′`.
    pub eps_prime: f64,
}

/// Evaluates `ε(ν)` and `ε′(ν)` at an admissible `ν` (`ν > 0`,
/// `(1+ν)γ < 1`):
///
/// ```text
///     ε′(ν) = 1/(1-(1+ν)γ) - 1,
///     ε(ν)  = (1+ν)²γ / (ν·(1-(1+ν)γ)) = ((1+ν)²/ν)·γ·(1+ε′(ν)).
/// ```
///
/// At `γ = 0` both vanish for every `ν > 0`.
pub fn epsilons(nu: f64, gamma: f64) -> Result<Epsilons> {
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(EwaError::NonFinite {
            context: "gamma",
            value: gamma,
        });
    }
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(EwaError::NuOutsideAdmissible { nu, gamma });
    }
    let shrink = 1.0 - (1.0 + nu) * gamma;
    if shrink <= 0.0 {
        return Err(EwaError::NuOutsideAdmissible { nu, gamma });
    }
    let eps_prime = 1.0 / shrink - 1.0;
    let eps = (1.0 + nu) * (1.0 + nu) * gamma / (nu * shrink);
    Ok(Epsilons { eps, eps_prime })
}

/// The three ingredients of a right-hand side, all non-negative:
/// the oracle loss `A`, the penalty-plus-price term `B`, and the complexity
/// term `K` (KL and confidence contributions, already scaled by β).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundComponents {
    pub loss: f64,
    pub additive: f64,
    pub complexity: f64,
}

/// Result of minimising the bound over the admissible `ν` (or of applying a
/// rule's fixed factors when no `ν` enters).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuStar {
    /// The minimiser, or `None` when the factors do not depend on ν
    /// (γ = 0, or a fixed-ε rule).
    pub nu: Option<f64>,
    /// Multiplier applied to the loss component.
    pub loss_factor: f64,
    /// Multiplier applied to the additive and complexity components.
    pub additive_factor: f64,
    /// The minimised value `loss_factor·A + additive_factor·(B + K)`.
    pub objective: f64,
}

pub(crate) fn validate_components(components: &BoundComponents) -> Result<()> {
    for (context, value) in [
        ("loss component", components.loss),
        ("additive component", components.additive),
        ("complexity component", components.complexity),
    ] {
        if !value.is_finite() || value < 0.0 {
            return Err(EwaError::NonFinite { context, value });
        }
    }
    Ok(())
}

/// Minimises `(1+ε(ν))·A + (1+ε′(ν))·(B+K)` over `N = {ν > 0 : (1+ν)γ < 1}`.
///
/// `N` is the open interval `(0, 1/γ - 1)`; golden-section search runs on it
/// shrunk by the relative interior margin [`NU_INTERIOR_MARGIN`] (open
/// endpoints are never evaluated).  Errors with
/// [`EwaError::NoAdmissibleNu`] when `γ ≥ 1` leaves the set empty; returns
/// factors `1` outright when `γ = 0`.
pub fn optimize_nu(gamma: f64, components: &BoundComponents) -> Result<NuStar> {
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(EwaError::NonFinite {
            context: "gamma",
            value: gamma,
        });
    }
    validate_components(components)?;
    let flat = components.loss + components.additive + components.complexity;
    if gamma == 0.0 {
        return Ok(NuStar {
            nu: None,
            loss_factor: 1.0,
            additive_factor: 1.0,
            objective: flat,
        });
    }
    if gamma >= 1.0 {
        return Err(EwaError::NoAdmissibleNu { gamma });
    }

    let upper = 1.0 / gamma - 1.0;
    let lo = upper * NU_INTERIOR_MARGIN;
    let hi = upper * (1.0 - NU_INTERIOR_MARGIN);
    let objective = |nu: f64| -> f64 {
        // Interior points of N: epsilons cannot fail here.
        let e = epsilons(nu, gamma).expect("interior nu must be admissible");
        (1.0 + e.eps) * components.loss
            + (1.0 + e.eps_prime) * (components.additive + components.complexity)
    };

    let nu = golden_section_min(objective, lo, hi);
    let e = epsilons(nu, gamma)?;
    Ok(NuStar {
        nu: Some(nu),
        loss_factor: 1.0 + e.eps,
        additive_factor: 1.0 + e.eps_prime,
        objective: objective(nu),
    })
}

/// Golden-section minimisation on `[lo, hi]`, converging to boundary minima
/// of monotone objectives as well as interior minima of unimodal ones.
fn golden_section_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    const INVPHI: f64 = 0.618_033_988_749_894_9; // (√5 - 1) / 2
    let mut a = lo;
    let mut b = hi;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a) <= 1e-14 * (1.0 + b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    // Guard against boundary minima: the bracket midpoint is already within
    // tolerance, but the original endpoints may be infinitesimally better.
    let candidates = [mid, lo, hi];
    candidates
        .into_iter()
        .min_by(|x, y| f(*x).partial_cmp(&f(*y)).expect("finite objective"))
        .expect("non-empty candidate list")
}

/// Full evaluation of a right-hand side for one comparator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundEvaluation {
    /// `loss_factor·loss + additive_factor·(additive + complexity)`.
    pub rhs: f64,
    /// The factor choice that produced it.
    pub nu_star: NuStar,
    /// The components the factors were applied to.
    pub components: BoundComponents,
}

/// The aggregation configuration: temperature and confidence parameters tied
/// to a bound rule chosen from the [`rules`] registry.
///
/// Construction validates every admissibility constraint of the chosen rule
/// (`β > 4σ²V`; `β ≥ 4σ²V(1+4δ)` when `δ > 0`; `β > 4σ²(δ+1)` for the
/// Gaussian-projection rule) plus the shared ranges `δ ∈ [0,1]`,
/// `η ∈ (0,1]`, `σ² > 0`, `V ≥ 0.5`, and caches γ.
#[derive(Debug, Clone)]
pub struct AggregationConfig {
    beta: f64,
    delta: f64,
    eta: f64,
    sigma_sq: f64,
    v_bound: f64,
    gamma: f64,
    rule: Arc<dyn BoundRule>,
}

impl AggregationConfig {
    /// Validates and assembles a configuration for the given rule.
    pub fn new(
        beta: f64,
        delta: f64,
        eta: f64,
        sigma_sq: f64,
        v_bound: f64,
        rule: Arc<dyn BoundRule>,
    ) -> Result<Self> {
        if !eta.is_finite() || !(eta > 0.0) || eta > 1.0 {
            return Err(EwaError::EtaOutOfRange { eta });
        }
        if !(sigma_sq > 0.0) || !sigma_sq.is_finite() {
            return Err(EwaError::NotPositive {
                name: "sigma_sq",
                value: sigma_sq,
            });
        }
        if !delta.is_finite() || !(0.0..=1.0).contains(&delta) {
            return Err(EwaError::DeltaOutOfRange { delta });
        }
        if !v_bound.is_finite() || v_bound < 0.5 {
            return Err(EwaError::SpectralBoundTooSmall {
                v_bound,
                required: 0.5,
            });
        }
        rule.validate(beta, delta, sigma_sq, v_bound)?;
        let gamma = rule.gamma(beta, delta, sigma_sq, v_bound)?;
        Ok(Self {
            beta,
            delta,
            eta,
            sigma_sq,
            v_bound,
            gamma,
            rule,
        })
    }

    /// Configuration under the general sub-Gaussian rule.
    pub fn subgaussian(
        beta: f64,
        delta: f64,
        eta: f64,
        sigma_sq: f64,
        v_bound: f64,
    ) -> Result<Self> {
        Self::new(beta, delta, eta, sigma_sq, v_bound, rules::subgaussian())
    }

    /// Configuration under the Gaussian-projection rule.
    pub fn gaussian_projection(
        beta: f64,
        delta: f64,
        eta: f64,
        sigma_sq: f64,
        v_bound: f64,
    ) -> Result<Self> {
        Self::new(
            beta,
            delta,
            eta,
            sigma_sq,
            v_bound,
            rules::gaussian_projection(),
        )
    }

    /// Configuration under the custom κ-multiplier rule.
    pub fn custom_kappa(
        kappa: f64,
        beta: f64,
        delta: f64,
        eta: f64,
        sigma_sq: f64,
        v_bound: f64,
    ) -> Result<Self> {
        Self::new(
            beta,
            delta,
            eta,
            sigma_sq,
            v_bound,
            rules::custom_kappa(kappa)?,
        )
    }

    /// Temperature β.
    #[must_use]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Interpolation parameter δ between the sharp (0) and weak (1) regimes.
    #[must_use]
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Confidence level η.
    #[must_use]
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Sub-Gaussian parameter σ².
    #[must_use]
    pub fn sigma_sq(&self) -> f64 {
        self.sigma_sq
    }

    /// Spectral bound V.
    #[must_use]
    pub fn v_bound(&self) -> f64 {
        self.v_bound
    }

    /// The cached coefficient γ for this rule and temperature.
    #[must_use]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The active bound rule.
    #[must_use]
    pub fn rule(&self) -> &Arc<dyn BoundRule> {
        &self.rule
    }
}

/// Assembles and minimises the right-hand side of the oracle bound for the
/// Dirac comparator at `t_star`:
///
/// ```text
///     rhs = loss_factor·loss(t*) + additive_factor·(pen(t*) + price(t*) + K),
///     K   = β·(2·ln(1/π(t*)) + ln(1/η)),
/// ```
///
/// after verifying that every supplied penalty clears the rule's minimal
/// admissible penalty (within [`PENALTY_CHECK_TOL`] relative slack).  If the
/// prior puts no mass on `t_star` the bound is vacuously `+∞`.
pub fn bound_rhs(
    collection: &EstimatorCollection,
    cfg: &AggregationConfig,
    c_tilde: f64,
    t_star: usize,
    losses: &[f64],
    penalties: &[f64],
) -> Result<BoundEvaluation> {
    let m = collection.len();
    if losses.len() != m || penalties.len() != m {
        return Err(EwaError::DimensionMismatch {
            context: "bound_rhs per-estimator vectors",
            expected: m,
            got: losses.len().min(penalties.len()),
        });
    }
    if t_star >= m {
        return Err(EwaError::DimensionMismatch {
            context: "bound_rhs t_star",
            expected: m,
            got: t_star,
        });
    }
    if !c_tilde.is_finite() || c_tilde < 0.0 {
        return Err(EwaError::NonFinite {
            context: "c_tilde",
            value: c_tilde,
        });
    }
    for (index, (&loss, est)) in losses.iter().zip(collection.items()).enumerate() {
        if !loss.is_finite() || loss < 0.0 {
            return Err(EwaError::NonFinite {
                context: "loss entry",
                value: loss,
            });
        }
        let minimum = cfg.rule().min_penalty(est.trace_stats(), cfg, c_tilde);
        let slack = PENALTY_CHECK_TOL * minimum.max(1.0);
        if penalties[index] < minimum - slack {
            return Err(EwaError::PenaltyBelowMinimum {
                index,
                penalty: penalties[index],
                minimum,
            });
        }
    }

    let pi_star = collection.prior()[t_star];
    if pi_star == 0.0 {
        let components = BoundComponents {
            loss: losses[t_star],
            additive: penalties[t_star]
                + cfg
                    .rule()
                    .price(collection.items()[t_star].trace_stats(), cfg, c_tilde),
            complexity: f64::INFINITY,
        };
        return Ok(BoundEvaluation {
            rhs: f64::INFINITY,
            nu_star: NuStar {
                nu: None,
                loss_factor: 1.0,
                additive_factor: 1.0,
                objective: f64::INFINITY,
            },
            components,
        });
    }

    let complexity = cfg.beta() * (2.0 * (1.0 / pi_star).ln() + (1.0 / cfg.eta()).ln());
    let components = BoundComponents {
        loss: losses[t_star],
        additive: penalties[t_star]
            + cfg
                .rule()
                .price(collection.items()[t_star].trace_stats(), cfg, c_tilde),
        complexity,
    };
    let nu_star = cfg.rule().evaluate(cfg, &components)?;
    Ok(BoundEvaluation {
        rhs: nu_star.objective,
        nu_star,
        components,
    })
}

/// The penalties the active rule feeds into the Gibbs weights, one per
/// estimator.
#[must_use]
pub fn penalties(
    collection: &EstimatorCollection,
    cfg: &AggregationConfig,
    c_tilde: f64,
) -> Vec<f64> {
    collection
        .items()
        .iter()
        .map(|est| cfg.rule().penalty(est.trace_stats(), cfg, c_tilde))
        .collect()
}

/// The minimal admissible penalties of the active rule, one per estimator.
#[must_use]
pub fn minimal_penalties(
    collection: &EstimatorCollection,
    cfg: &AggregationConfig,
    c_tilde: f64,
) -> Vec<f64> {
    collection
        .items()
        .iter()
        .map(|est| cfg.rule().min_penalty(est.trace_stats(), cfg, c_tilde))
        .collect()
}

/// The price terms of the active rule, one per estimator.
#[must_use]
pub fn prices(collection: &EstimatorCollection, cfg: &AggregationConfig, c_tilde: f64) -> Vec<f64> {
    collection
        .items()
        .iter()
        .map(|est| cfg.rule().price(est.trace_stats(), cfg, c_tilde))
        .collect()
}

/// The weak-regime κ threshold: `pen = κ·tr(P²)·σ²` rides the bound whenever
/// `κ ≥ 4σ²/(β - 4σ²V)` (signal-independent, valid for every `C̃` at δ = 1).
pub fn kappa_weak_threshold(cfg: &AggregationConfig) -> f64 {
    4.0 * cfg.sigma_sq() / (cfg.beta() - 4.0 * cfg.sigma_sq() * cfg.v_bound())
}

/// Whether `κ` clears [`kappa_weak_threshold`].
#[must_use]
pub fn kappa_weak_valid(kappa: f64, cfg: &AggregationConfig) -> bool {
    kappa >= kappa_weak_threshold(cfg)
}

/// The signal-aware κ threshold for the sharp (exact leading constant)
/// regime:
///
/// ```text
///     (β - 4σ²V)·κ/(4σ²) - 1  ≥  (1+2γV)²·C̃²/σ².
/// ```
///
/// At `δ = 0` (where `γ = 0`) this says exactly that `κ·tr(P²)·σ²` dominates
/// the sharp minimal penalty; it is the low peak-signal-to-noise condition.
#[must_use]
pub fn kappa_exact_valid(kappa: f64, cfg: &AggregationConfig, c_tilde: f64) -> bool {
    let lhs =
        (cfg.beta() - 4.0 * cfg.sigma_sq() * cfg.v_bound()) * kappa / (4.0 * cfg.sigma_sq()) - 1.0;
    let lever = 1.0 + 2.0 * cfg.gamma() * cfg.v_bound();
    let rhs = lever * lever * c_tilde * c_tilde / cfg.sigma_sq();
    lhs >= rhs
}
