//! Linear smoothers `f̂_t(Y) = P_t Y` and finite families of them.
//!
//! Every smoother is represented spectrally as
//!
//! ```text
//!     P = B · diag(ρ) · Bᵀ,        B orthonormal,  ρ_i ≥ 0,
//! ```
//!
//! which covers orthogonal projections (`ρ_i ∈ {0, 1}`) and shrinkage
//! smoothers alike, and makes the quantities the risk bounds consume exact
//! and cheap:
//!
//! ```text
//!     tr(P)  = Σ ρ_i,      tr(P²) = Σ ρ_i²,      ‖P‖₂ = max ρ_i.
//! ```
//!
//! A [`EstimatorCollection`] bundles the family with a prior `π` and the
//! spectral-norm bound `V ≥ max(0.5, sup_t ‖P_t‖₂)` that the aggregation
//! constants depend on.  Dense matrices are materialised only by
//! [`LinearEstimator::dense_matrix`], offered for cross-checks in tests.

use std::sync::Arc;

use crate::error::{EwaError, Result};
use crate::linalg::Basis;

/// Tolerance for recognising a shrinkage profile as an orthogonal projection.
pub const PROJECTION_TOL: f64 = 1e-12;

/// Tolerance for the prior normalisation `Σ π_t = 1`.
pub const PRIOR_SUM_TOL: f64 = 1e-12;

/// Spectral quantities of a smoother consumed by the risk calculus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceStats {
    /// `tr(P) = Σ ρ_i`.
    pub trace: f64,
    /// `tr(P²) = Σ ρ_i²`.
    pub trace_sq: f64,
    /// `‖P‖₂ = max ρ_i` (0 for the zero smoother).
    pub spec_norm: f64,
}

/// A symmetric PSD linear smoother in spectral form.
#[derive(Debug, Clone)]
pub struct LinearEstimator {
    basis: Arc<Basis>,
    shrink: Vec<f64>,
    label: String,
    stats: TraceStats,
    is_projection: bool,
}

impl LinearEstimator {
    /// Builds a smoother from a shared basis and shrinkage coefficients.
    ///
    /// Fails if the shrinkage vector has the wrong length or any negative
    /// entry (negative coefficients would break positive semi-definiteness).
    pub fn smoothed_projection(
        basis: Arc<Basis>,
        shrink: Vec<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let n = basis.n();
        if shrink.len() != n {
            return Err(EwaError::DimensionMismatch {
                context: "shrinkage coefficients",
                expected: n,
                got: shrink.len(),
            });
        }
        if let Some((index, &value)) = shrink.iter().enumerate().find(|(_, &v)| v < 0.0) {
            return Err(EwaError::NegativeShrink { index, value });
        }
        let stats = TraceStats {
            trace: shrink.iter().sum(),
            trace_sq: shrink.iter().map(|r| r * r).sum(),
            spec_norm: shrink.iter().fold(0.0_f64, |m, &r| m.max(r)),
        };
        let is_projection = shrink
            .iter()
            .all(|&r| r.abs() <= PROJECTION_TOL || (r - 1.0).abs() <= PROJECTION_TOL);
        Ok(Self {
            basis,
            shrink,
            label: label.into(),
            stats,
            is_projection,
        })
    }

    /// Orthogonal projection onto the first `k` basis vectors.
    pub fn rank_projection(basis: Arc<Basis>, k: usize, label: impl Into<String>) -> Result<Self> {
        let n = basis.n();
        if k > n {
            return Err(EwaError::RankTooLarge { rank: k, n });
        }
        let mut shrink = vec![0.0; n];
        shrink[..k].fill(1.0);
        Self::smoothed_projection(basis, shrink, label)
    }

    /// Applies the smoother: `P y = B diag(ρ) Bᵀ y`.
    pub fn apply(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.n() {
            return Err(EwaError::DimensionMismatch {
                context: "apply input",
                expected: self.n(),
                got: y.len(),
            });
        }
        let mut z = self.basis.coefficients(y);
        for (zi, r) in z.iter_mut().zip(&self.shrink) {
            *zi *= r;
        }
        Ok(self.basis.synthesize(&z))
    }

    /// Ambient dimension.
    #[must_use]
    pub fn n(&self) -> usize {
        self.basis.n()
    }

    /// Human-readable identifier used in reports and error messages.
    #[must_use]
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Shared basis.
    #[must_use]
    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    /// Shrinkage coefficients `ρ`.
    #[must_use]
    pub fn shrink(&self) -> &[f64] {
        &self.shrink
    }

    /// Trace statistics (`tr P`, `tr P²`, `‖P‖₂`), precomputed exactly from
    /// the shrinkage coefficients.
    #[must_use]
    pub fn trace_stats(&self) -> TraceStats {
        self.stats
    }

    /// Whether all shrinkage coefficients lie in `{0, 1}` (up to
    /// [`PROJECTION_TOL`]), i.e. the smoother is an orthogonal projection.
    #[must_use]
    pub fn is_projection(&self) -> bool {
        self.is_projection
    }

    /// Materialises the dense row-major `n × n` matrix `P = Σ ρ_j b_j b_jᵀ`.
    ///
    /// Intended for cross-checks in tests; normal operation stays in the
    /// spectral representation.
    #[must_use]
    pub fn dense_matrix(&self) -> Vec<f64> {
        let n = self.n();
        let mut p = vec![0.0; n * n];
        for (j, &r) in self.shrink.iter().enumerate() {
            if r == 0.0 {
                continue;
            }
            let bj = self.basis.col(j);
            for i in 0..n {
                let c = r * bj[i];
                for k in 0..n {
                    p[i * n + k] += c * bj[k];
                }
            }
        }
        p
    }
}

/// A finite family of smoothers with a prior and a spectral-norm bound.
#[derive(Debug, Clone)]
pub struct EstimatorCollection {
    items: Vec<LinearEstimator>,
    prior: Vec<f64>,
    v_bound: f64,
}

impl EstimatorCollection {
    /// Validates and assembles a collection.
    ///
    /// Requirements: at least one estimator, all sharing one dimension; a
    /// non-negative prior summing to 1 within [`PRIOR_SUM_TOL`]; and
    /// `v_bound ≥ max(0.5, max_t ‖P_t‖₂)`.
    pub fn new(items: Vec<LinearEstimator>, prior: Vec<f64>, v_bound: f64) -> Result<Self> {
        if items.is_empty() {
            return Err(EwaError::EmptyCollection);
        }
        let n = items[0].n();
        for item in &items {
            if item.n() != n {
                return Err(EwaError::DimensionMismatch {
                    context: "collection member dimension",
                    expected: n,
                    got: item.n(),
                });
            }
        }
        if prior.len() != items.len() {
            return Err(EwaError::DimensionMismatch {
                context: "prior length",
                expected: items.len(),
                got: prior.len(),
            });
        }
        if let Some((index, &value)) = prior.iter().enumerate().find(|(_, &p)| p < 0.0) {
            return Err(EwaError::NegativePrior { index, value });
        }
        let sum: f64 = prior.iter().sum();
        if (sum - 1.0).abs() > PRIOR_SUM_TOL {
            return Err(EwaError::PriorNotNormalized {
                sum,
                tolerance: PRIOR_SUM_TOL,
            });
        }
        let required = suggested_v_bound(&items);
        if v_bound < required {
            return Err(EwaError::SpectralBoundTooSmall { v_bound, required });
        }
        Ok(Self {
            items,
            prior,
            v_bound,
        })
    }

    /// Assembles a collection under the uniform prior with the smallest
    /// admissible spectral bound.
    pub fn with_uniform_prior(items: Vec<LinearEstimator>) -> Result<Self> {
        if items.is_empty() {
            return Err(EwaError::EmptyCollection);
        }
        let m = items.len();
        let v_bound = suggested_v_bound(&items);
        Self::new(items, vec![1.0 / m as f64; m], v_bound)
    }

    /// Nested projections onto the first `k` vectors of one shared basis,
    /// one per entry of `ranks`, under the uniform prior.
    pub fn nested_projections(basis: Basis, ranks: &[usize]) -> Result<Self> {
        let basis = Arc::new(basis);
        let items = ranks
            .iter()
            .map(|&k| LinearEstimator::rank_projection(Arc::clone(&basis), k, format!("proj{k}")))
            .collect::<Result<Vec<_>>>()?;
        Self::with_uniform_prior(items)
    }

    /// Tent-shaped shrinkage family in one shared basis, one smoother per
    /// cutoff `k`:
    ///
    /// ```text
    ///     ρ_i = (1 - i/k)₊,    i = 0, …, n-1,
    /// ```
    ///
    /// under the uniform prior.  A cutoff of 0 yields the zero smoother.
    pub fn shrinkage_family(basis: Basis, cutoffs: &[usize]) -> Result<Self> {
        let basis = Arc::new(basis);
        let n = basis.n();
        let items = cutoffs
            .iter()
            .map(|&k| {
                let shrink: Vec<f64> = (0..n)
                    .map(|i| {
                        if k == 0 {
                            0.0
                        } else {
                            (1.0 - i as f64 / k as f64).max(0.0)
                        }
                    })
                    .collect();
                LinearEstimator::smoothed_projection(Arc::clone(&basis), shrink, format!("tent{k}"))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::with_uniform_prior(items)
    }

    /// Number of estimators.
    #[must_use]
    pub fn len(&self) -> usize {
        self.items.len()
    }

    /// Whether the collection is empty (never true for a validated one).
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Ambient dimension shared by all members.
    #[must_use]
    pub fn n(&self) -> usize {
        self.items[0].n()
    }

    /// The estimators.
    #[must_use]
    pub fn items(&self) -> &[LinearEstimator] {
        &self.items
    }

    /// The prior `π`.
    #[must_use]
    pub fn prior(&self) -> &[f64] {
        &self.prior
    }

    /// The spectral bound `V`.
    #[must_use]
    pub fn v_bound(&self) -> f64 {
        self.v_bound
    }

    /// Largest spectral norm over the family.
    #[must_use]
    pub fn max_spec_norm(&self) -> f64 {
        self.items
            .iter()
            .fold(0.0_f64, |m, e| m.max(e.trace_stats().spec_norm))
    }

    /// Whether every member is an orthogonal projection.
    #[must_use]
    pub fn all_projections(&self) -> bool {
        self.items.iter().all(LinearEstimator::is_projection)
    }
}

/// Smallest admissible spectral bound for a family:
/// `max(0.5, max_t ‖P_t‖₂)`.  The 0.5 floor keeps the bound constants
/// well-defined even for families of heavily shrunk smoothers.
#[must_use]
pub fn suggested_v_bound(items: &[LinearEstimator]) -> f64 {
    items
        .iter()
        .fold(0.5_f64, |m, e| m.max(e.trace_stats().spec_norm))
}

/// A named basis generator, selectable from configuration.
pub struct BasisGenerator {
    /// Registry key.
    pub name: &'static str,
    build: fn(usize, u64) -> Result<Basis>,
}

/// Registered basis generators.  `standard` and `cosine` are deterministic
/// closed forms and ignore the seed; `random` draws a seeded Gaussian matrix
/// and orthogonalises it.
pub const BASIS_GENERATORS: &[BasisGenerator] = &[
    BasisGenerator {
        name: "standard",
        build: |n, _| Ok(Basis::identity(n)),
    },
    BasisGenerator {
        name: "cosine",
        build: |n, _| Ok(Basis::cosine(n)),
    },
    BasisGenerator {
        name: "random",
        build: Basis::random_orthonormal,
    },
];

/// Looks up a basis generator by name and builds the basis.
pub fn basis_by_name(name: &str, n: usize, seed: u64) -> Result<Basis> {
    for generator in BASIS_GENERATORS {
        if generator.name == name {
            return (generator.build)(n, seed);
        }
    }
    Err(EwaError::UnknownName {
        kind: "basis generator",
        name: name.to_string(),
        known: BASIS_GENERATORS
            .iter()
            .map(|g| g.name)
            .collect::<Vec<_>>()
            .join(", "),
    })
}
