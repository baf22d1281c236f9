//! Exponentially weighted aggregation (EWA) of linear smoothers under
//! sub-Gaussian noise, with verifiable oracle guarantees.
//!
//! The model is a fixed-design signal-plus-noise observation
//!
//! ```text
//!     Y = f0 + W,          Y, f0, W ∈ R^n,
//! ```
//!
//! where the unknown signal `f0` is estimated by a finite family of linear
//! smoothers `f̂_t(Y) = P_t Y`.  Each `P_t` is symmetric positive
//! semi-definite, represented as `B diag(ρ) Bᵀ` for an orthonormal basis `B`
//! and non-negative shrinkage coefficients `ρ`.  The aggregate is the convex
//! combination
//!
//! ```text
//!     f_EWA = Σ_t ρ(t) f̂_t,     ρ(t) ∝ π(t) · exp(−(r_t + pen(t)) / β),
//! ```
//!
//! a Gibbs posterior over the family driven by Stein's unbiased risk estimate
//! `r_t` at temperature `β`, tilted by a penalty `pen(t)` that controls the
//! optimism of the risk estimate.  For admissible temperatures the squared
//! error of `f_EWA` is bounded, in probability and in expectation, by the best
//! penalized oracle risk in the family plus an explicit remainder.
//!
//! Module map:
//!
//! - [`estimators`] — orthonormal bases, shrinkage smoothers, projections,
//!   and their trace statistics.
//! - [`signal`] — deterministic test signals on the grid `x_i = i/n`.
//! - [`noise`] — sub-Gaussian noise models with seeded, reproducible sampling
//!   and an empirical moment-generating-function check.
//! - [`aggregation`] — Gibbs weights in log-space, convex aggregation,
//!   Kullback–Leibler divergence, and the variational identity for
//!   log-partition functions.
//! - [`risk`] — SURE, the constant calculus behind the oracle bounds (γ,
//!   minimal penalties, price terms, ε/ε′ trade-off factors), and the
//!   interchangeable [`risk::rules::BoundRule`] registry.
//! - [`harness`] — Monte Carlo trials, coverage experiments, deviation
//!   margins, and exponential-moment checks that confront the bounds with
//!   simulation.
//!
//! Everything is deterministic given a master seed: all randomness flows
//! through counter-mode ChaCha streams, so any trial can be reproduced in
//! isolation on any platform.

// Validation deliberately writes `!(x > 0.0)` instead of `x <= 0.0`: the
// negated form also fails NaN, which must never pass an admissibility check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aggregation;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod linalg;
pub mod noise;
pub mod risk;
pub mod signal;

pub use error::{EwaError, Result};
