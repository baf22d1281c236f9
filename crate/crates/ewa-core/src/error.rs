//! Error type shared by all modules.
//!
//! Every admissibility constraint is checked eagerly — at construction for
//! configurations, estimators, and priors, at call time for per-operation
//! preconditions — and violations name the inequality that failed together
//! with the offending values.  No routine silently clamps a denominator or
//! renormalises an invalid input.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, EwaError>;

/// All failure modes of the aggregation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EwaError {
    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// A basis matrix failed the orthonormality check `BᵀB = I`.
    #[error(
        "basis is not orthonormal: max |BᵀB - I| entry {max_deviation:.3e} exceeds {tolerance:.0e}"
    )]
    NotOrthonormal { max_deviation: f64, tolerance: f64 },

    /// A shrinkage coefficient was negative (smoothers must be PSD).
    #[error("shrinkage coefficient {value} at index {index} is negative")]
    NegativeShrink { index: usize, value: f64 },

    /// A projection rank exceeded the ambient dimension.
    #[error("projection rank {rank} exceeds dimension {n}")]
    RankTooLarge { rank: usize, n: usize },

    /// An estimator collection must contain at least one estimator.
    #[error("estimator collection is empty")]
    EmptyCollection,

    /// A prior weight was negative.
    #[error("prior weight {value} at index {index} is negative")]
    NegativePrior { index: usize, value: f64 },

    /// The prior does not sum to one.
    #[error("prior sums to {sum}, which differs from 1 by more than {tolerance:.0e}")]
    PriorNotNormalized { sum: f64, tolerance: f64 },

    /// The spectral-norm bound V must dominate every smoother in the family.
    #[error(
        "spectral bound violated: need v_bound ≥ max(0.5, max_t ‖P_t‖₂) = {required}, got {v_bound}"
    )]
    SpectralBoundTooSmall { v_bound: f64, required: f64 },

    /// A quantity that must be strictly positive was not.
    #[error("{name} must be strictly positive, got {value}")]
    NotPositive { name: &'static str, value: f64 },

    /// A quantity that must be finite was NaN or infinite.
    #[error("{context} must be finite, got {value}")]
    NonFinite { context: &'static str, value: f64 },

    /// The confidence level η must lie in (0, 1].
    #[error("confidence level eta must lie in (0, 1], got {eta}")]
    EtaOutOfRange { eta: f64 },

    /// The interpolation parameter δ must lie in [0, 1].
    #[error("interpolation parameter delta must lie in [0, 1], got {delta}")]
    DeltaOutOfRange { delta: f64 },

    /// Base admissibility of the temperature: β > 4σ²V.
    #[error("temperature must exceed 4σ²V: beta = {beta}, 4σ²V = {threshold}")]
    TemperatureNotAboveBase { beta: f64, threshold: f64 },

    /// Extra admissibility when δ > 0: β ≥ 4σ²V(1+4δ).
    #[error(
        "temperature too low for delta = {delta}: need β ≥ 4σ²V(1+4δ) = {threshold}, got beta = {beta}"
    )]
    TemperatureBelowDeltaFloor {
        beta: f64,
        delta: f64,
        threshold: f64,
    },

    /// Admissibility of the Gaussian-projection regime: β > 4σ²(δ+1).
    #[error(
        "temperature too low for the Gaussian projection rule: need β > 4σ²(δ+1) = {threshold}, got beta = {beta}"
    )]
    TemperatureNotAboveGaussian { beta: f64, threshold: f64 },

    /// ν must satisfy ν > 0 and (1+ν)γ < 1.
    #[error(
        "nu = {nu} is outside the admissible set: need ν > 0 and (1+ν)γ < 1 with gamma = {gamma}"
    )]
    NuOutsideAdmissible { nu: f64, gamma: f64 },

    /// The admissible set `N = {{ν > 0 : (1+ν)γ < 1}}` is empty.
    #[error("no admissible nu: gamma = {gamma} ≥ 1 makes (1+ν)γ < 1 impossible for ν > 0")]
    NoAdmissibleNu { gamma: f64 },

    /// A candidate posterior puts mass where the prior has none.
    #[error("absolute continuity violated: candidate has mass {mass} at index {index} where the prior vanishes")]
    NotAbsolutelyContinuous { index: usize, mass: f64 },

    /// A supplied penalty is below the minimal admissible penalty.
    #[error(
        "penalty {penalty} for estimator {index} is below the minimal admissible penalty {minimum}"
    )]
    PenaltyBelowMinimum {
        index: usize,
        penalty: f64,
        minimum: f64,
    },

    /// The Gaussian-projection rule applies to orthogonal projections only.
    #[error(
        "estimator '{label}' is not an orthogonal projection, as required by the '{rule}' rule"
    )]
    NotAProjection { label: String, rule: &'static str },

    /// The Gaussian-projection rule applies under Gaussian noise only.
    #[error("noise model '{kind}' is not Gaussian, as required by the '{rule}' rule")]
    NotGaussianNoise {
        kind: &'static str,
        rule: &'static str,
    },

    /// A configuration field disagrees with the object it must describe.
    #[error("configuration mismatch: {field} is {configured} but the {origin} implies {actual}")]
    ConfigMismatch {
        field: &'static str,
        configured: f64,
        origin: &'static str,
        actual: f64,
    },

    /// A by-name registry lookup failed.
    #[error("unknown {kind} '{name}'; registered names: {known}")]
    UnknownName {
        kind: &'static str,
        name: String,
        known: String,
    },

    /// The custom rule needs an explicit penalty multiplier.
    #[error("the 'custom' bound rule requires a penalty multiplier kappa")]
    MissingKappa,

    /// A direction passed to the MGF check is too long.
    #[error("direction norm {norm} exceeds the MGF check limit {limit}")]
    DirectionTooLong { norm: f64, limit: f64 },

    /// A Monte Carlo routine was invoked with too few samples.
    #[error("{context} needs at least {minimum} samples, got {got}")]
    TooFewSamples {
        context: &'static str,
        minimum: usize,
        got: usize,
    },
}
