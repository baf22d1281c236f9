//! Gibbs weights, convex aggregation, and the variational identity that
//! underpins them.
//!
//! The aggregate over a family `{f̂_t}` with prior `π` at temperature `β > 0`
//! uses the Gibbs posterior driven by penalized risk estimates `r̃_t`:
//!
//! ```text
//!     ρ(t) = π(t) · exp(-r̃_t / β) / Z,        f_EWA = Σ_t ρ(t) f̂_t(Y).
//! ```
//!
//! All weight computations happen in log-space with a max shift, so risk
//! estimates of magnitude 10⁶ and beyond neither overflow nor underflow the
//! normalisation.  The Gibbs posterior is characterised variationally: for any
//! bounded `h` and any candidate `ρ` absolutely continuous w.r.t. `π`,
//!
//! ```text
//!     log Σ_t π(t) e^{h_t}  =  Σ_t ρ(t) h_t - KL(ρ, π) + KL(ρ, π_exp(h)),
//! ```
//!
//! where `π_exp(h)(t) ∝ π(t) e^{h_t}`.  The non-negative defect
//! `KL(ρ, π_exp(h))` is exposed as [`variational_gap`]; it vanishes exactly
//! at the tilted measure, which is how the optimality of Gibbs weights is
//! verified empirically.

use crate::error::{EwaError, Result};
use crate::estimators::{EstimatorCollection, PRIOR_SUM_TOL};
use crate::linalg::axpy;

/// A normalised weight vector kept in both linear and log scale.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
    log_weights: Vec<f64>,
}

impl WeightVector {
    /// Point mass at `index`.
    pub fn dirac(len: usize, index: usize) -> Result<Self> {
        if index >= len {
            return Err(EwaError::DimensionMismatch {
                context: "dirac index",
                expected: len,
                got: index,
            });
        }
        let mut weights = vec![0.0; len];
        weights[index] = 1.0;
        let mut log_weights = vec![f64::NEG_INFINITY; len];
        log_weights[index] = 0.0;
        Ok(Self {
            weights,
            log_weights,
        })
    }

    /// Normalises explicit non-negative weights (used for hand-built
    /// candidates in tests and deviation checks).
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        validate_distribution(weights, "weight vector")?;
        let logits: Vec<f64> = weights.iter().map(|&w| w.ln()).collect();
        Ok(softmax(&logits))
    }

    /// Linear-scale weights; non-negative, summing to 1 within `1e-12`.
    #[must_use]
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Log-scale weights; `exp` of these reproduces [`Self::weights`]
    /// exactly (zero-weight atoms carry `-∞`).
    #[must_use]
    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    /// Number of atoms.
    #[must_use]
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// Whether the vector has no atoms (never true for a constructed one).
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Expectation `Σ_t w_t x_t` of a per-estimator quantity, with the
    /// convention `0 · x = 0` even for infinite `x`.
    #[must_use]
    pub fn expect(&self, xs: &[f64]) -> f64 {
        debug_assert_eq!(xs.len(), self.weights.len());
        self.weights
            .iter()
            .zip(xs)
            .filter(|(&w, _)| w > 0.0)
            .map(|(&w, &x)| w * x)
            .sum()
    }

    /// Total-variation distance to another weight vector of the same length.
    #[must_use]
    pub fn total_variation(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        0.5 * self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }
}

/// Max-shifted log-sum-exp; returns `-∞` on an all-`-∞` input.
#[must_use]
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x));
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

/// Normalised softmax of logits (which may contain `-∞` for excluded atoms).
fn softmax(logits: &[f64]) -> WeightVector {
    let lse = log_sum_exp(logits);
    let log_weights: Vec<f64> = logits.iter().map(|&x| x - lse).collect();
    let weights: Vec<f64> = log_weights.iter().map(|&x| x.exp()).collect();
    // One explicit renormalisation pass keeps Σw within a few ulps of 1.
    let sum: f64 = weights.iter().sum();
    let weights: Vec<f64> = weights.into_iter().map(|w| w / sum).collect();
    WeightVector {
        weights,
        log_weights,
    }
}

fn validate_distribution(p: &[f64], context: &'static str) -> Result<()> {
    if p.is_empty() {
        return Err(EwaError::EmptyCollection);
    }
    for (index, &value) in p.iter().enumerate() {
        if !value.is_finite() {
            return Err(EwaError::NonFinite {
                context: "distribution entry",
                value,
            });
        }
        if value < 0.0 {
            return Err(EwaError::NegativePrior { index, value });
        }
    }
    let sum: f64 = p.iter().sum();
    if sum <= 0.0 {
        return Err(EwaError::NotPositive {
            name: context,
            value: sum,
        });
    }
    Ok(())
}

fn validate_prior(pi: &[f64]) -> Result<()> {
    validate_distribution(pi, "prior")?;
    let sum: f64 = pi.iter().sum();
    if (sum - 1.0).abs() > PRIOR_SUM_TOL {
        return Err(EwaError::PriorNotNormalized {
            sum,
            tolerance: PRIOR_SUM_TOL,
        });
    }
    Ok(())
}

/// Gibbs weights `ρ(t) ∝ π(t) · exp(-r̃_t / β)` for penalized risks `r̃`.
///
/// Atoms with zero prior mass receive weight exactly 0 (log-weight `-∞`).
/// Risks must be finite and the temperature strictly positive.
pub fn gibbs_weights(penalized_risks: &[f64], beta: f64, prior: &[f64]) -> Result<WeightVector> {
    if penalized_risks.len() != prior.len() {
        return Err(EwaError::DimensionMismatch {
            context: "gibbs weights",
            expected: prior.len(),
            got: penalized_risks.len(),
        });
    }
    if !(beta > 0.0) {
        return Err(EwaError::NotPositive {
            name: "temperature beta",
            value: beta,
        });
    }
    validate_prior(prior)?;
    for &r in penalized_risks {
        if !r.is_finite() {
            return Err(EwaError::NonFinite {
                context: "penalized risk",
                value: r,
            });
        }
    }
    let logits: Vec<f64> = penalized_risks
        .iter()
        .zip(prior)
        .map(|(&r, &p)| p.ln() - r / beta) // ln(0) = -∞ excludes the atom
        .collect();
    Ok(softmax(&logits))
}

/// The tilted measure `π_exp(h)(t) ∝ π(t) e^{h_t}` — the maximiser in the
/// variational identity.
pub fn exp_tilt(pi: &[f64], h: &[f64]) -> Result<WeightVector> {
    if h.len() != pi.len() {
        return Err(EwaError::DimensionMismatch {
            context: "exp tilt",
            expected: pi.len(),
            got: h.len(),
        });
    }
    validate_prior(pi)?;
    for &x in h {
        if !x.is_finite() {
            return Err(EwaError::NonFinite {
                context: "tilt exponent",
                value: x,
            });
        }
    }
    let logits: Vec<f64> = h.iter().zip(pi).map(|(&hi, &p)| p.ln() + hi).collect();
    Ok(softmax(&logits))
}

/// Kullback–Leibler divergence `KL(μ, π) = Σ_t μ_t ln(μ_t/π_t)`, with
/// `0·ln(0/π) = 0`; errors if `μ` charges an atom where `π` vanishes.
pub fn kl_divergence(mu: &[f64], pi: &[f64]) -> Result<f64> {
    if mu.len() != pi.len() {
        return Err(EwaError::DimensionMismatch {
            context: "kl divergence",
            expected: pi.len(),
            got: mu.len(),
        });
    }
    validate_distribution(mu, "kl numerator")?;
    validate_distribution(pi, "kl denominator")?;
    let mut kl = 0.0;
    for (index, (&m, &p)) in mu.iter().zip(pi).enumerate() {
        if m == 0.0 {
            continue;
        }
        if p == 0.0 {
            return Err(EwaError::NotAbsolutelyContinuous { index, mass: m });
        }
        kl += m * (m / p).ln();
    }
    Ok(kl)
}

/// Defect of a candidate in the variational identity:
///
/// ```text
///     gap = log Σ_t π(t) e^{h_t} - ( Σ_t ρ(t) h_t - KL(ρ, π) )
///         = KL(ρ, π_exp(h))  ≥  0,
/// ```
///
/// zero exactly when the candidate `ρ` is the tilted measure.
pub fn variational_gap(h: &[f64], pi: &[f64], candidate: &[f64]) -> Result<f64> {
    if h.len() != pi.len() || candidate.len() != pi.len() {
        return Err(EwaError::DimensionMismatch {
            context: "variational gap",
            expected: pi.len(),
            got: h.len().max(candidate.len()),
        });
    }
    validate_prior(pi)?;
    for &x in h {
        if !x.is_finite() {
            return Err(EwaError::NonFinite {
                context: "tilt exponent",
                value: x,
            });
        }
    }
    let kl = kl_divergence(candidate, pi)?;
    let logits: Vec<f64> = h.iter().zip(pi).map(|(&hi, &p)| p.ln() + hi).collect();
    let log_partition = log_sum_exp(&logits);
    let expected_h: f64 = candidate
        .iter()
        .zip(h)
        .filter(|(&c, _)| c > 0.0)
        .map(|(&c, &hi)| c * hi)
        .sum();
    Ok(log_partition - (expected_h - kl))
}

/// The aggregate `f_EWA = Σ_t w_t · P_t y`; zero-weight members are skipped.
pub fn aggregate(
    weights: &WeightVector,
    collection: &EstimatorCollection,
    y: &[f64],
) -> Result<Vec<f64>> {
    if weights.len() != collection.len() {
        return Err(EwaError::DimensionMismatch {
            context: "aggregation weights",
            expected: collection.len(),
            got: weights.len(),
        });
    }
    let n = collection.n();
    if y.len() != n {
        return Err(EwaError::DimensionMismatch {
            context: "aggregation input",
            expected: n,
            got: y.len(),
        });
    }
    let mut out = vec![0.0; n];
    for (w, est) in weights.weights().iter().zip(collection.items()) {
        if *w > 0.0 {
            let fitted = est.apply(y)?;
            axpy(*w, &fitted, &mut out);
        }
    }
    Ok(out)
}
