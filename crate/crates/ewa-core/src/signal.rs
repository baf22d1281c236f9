//! Deterministic test signals `f0` on the grid `x_i = i/n`, `i = 1, …, n`.
//!
//! These are the ground-truth vectors the Monte Carlo harness plants and then
//! tries to recover: a zero signal (pure noise), single sinusoids, sinusoid
//! mixtures of mixed frequencies, a step discontinuity that no smooth family
//! captures exactly, and arbitrary user-supplied vectors.

use crate::error::{EwaError, Result};

/// Signal families, with their parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum SignalKind {
    /// `f0 = 0`.
    Zero,
    /// `f0(x) = amplitude · sin(2π · frequency · x)`.
    Sinusoid { amplitude: f64, frequency: u32 },
    /// A sum of sinusoids, one `(amplitude, frequency)` pair per component.
    SinusoidMix { components: Vec<(f64, u32)> },
    /// `f0(x) = low` for `x ≤ position`, `high` otherwise.
    Step { low: f64, high: f64, position: f64 },
    /// An explicit vector, which must have length `n`.
    Custom(Vec<f64>),
}

/// A signal family pinned to a grid size.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSpec {
    kind: SignalKind,
    n: usize,
}

impl SignalSpec {
    /// Validates the pair: a [`SignalKind::Custom`] vector must match `n`.
    pub fn new(kind: SignalKind, n: usize) -> Result<Self> {
        if let SignalKind::Custom(values) = &kind {
            if values.len() != n {
                return Err(EwaError::DimensionMismatch {
                    context: "custom signal",
                    expected: n,
                    got: values.len(),
                });
            }
        }
        Ok(Self { kind, n })
    }

    /// Grid size.
    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    /// The signal family.
    #[must_use]
    pub fn kind(&self) -> &SignalKind {
        &self.kind
    }

    /// Evaluates the signal on the grid `x_i = i/n`, `i = 1, …, n`.
    ///
    /// The output is a pure function of `(kind, n)`: repeated calls return
    /// identical vectors.
    #[must_use]
    pub fn generate(&self) -> Vec<f64> {
        let n = self.n;
        match &self.kind {
            SignalKind::Zero => vec![0.0; n],
            SignalKind::Sinusoid {
                amplitude,
                frequency,
            } => grid(n)
                .map(|x| amplitude * (std::f64::consts::TAU * f64::from(*frequency) * x).sin())
                .collect(),
            SignalKind::SinusoidMix { components } => grid(n)
                .map(|x| {
                    components
                        .iter()
                        .map(|(a, f)| a * (std::f64::consts::TAU * f64::from(*f) * x).sin())
                        .sum()
                })
                .collect(),
            SignalKind::Step {
                low,
                high,
                position,
            } => grid(n)
                .map(|x| if x <= *position { *low } else { *high })
                .collect(),
            SignalKind::Custom(values) => values.clone(),
        }
    }
}

fn grid(n: usize) -> impl Iterator<Item = f64> {
    (1..=n).map(move |i| i as f64 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_signal_is_zero() {
        let spec = SignalSpec::new(SignalKind::Zero, 5).unwrap();
        assert_eq!(spec.generate(), vec![0.0; 5]);
    }

    #[test]
    fn sinusoid_matches_hand_values_on_a_coarse_grid() {
        // n = 4, frequency 1, amplitude 2: x = 1/4, 1/2, 3/4, 1 gives
        // 2·sin(π/2, π, 3π/2, 2π) = (2, 0, -2, 0) up to roundoff in sin.
        let spec = SignalSpec::new(
            SignalKind::Sinusoid {
                amplitude: 2.0,
                frequency: 1,
            },
            4,
        )
        .unwrap();
        let f0 = spec.generate();
        let expected = [2.0, 0.0, -2.0, 0.0];
        for (got, want) in f0.iter().zip(&expected) {
            assert!((got - want).abs() < 1e-14, "got {got}, want {want}");
        }
    }

    #[test]
    fn mix_is_the_sum_of_its_components() {
        let n = 16;
        let mix = SignalSpec::new(
            SignalKind::SinusoidMix {
                components: vec![(2.0, 1), (1.0, 3)],
            },
            n,
        )
        .unwrap()
        .generate();
        let a = SignalSpec::new(
            SignalKind::Sinusoid {
                amplitude: 2.0,
                frequency: 1,
            },
            n,
        )
        .unwrap()
        .generate();
        let b = SignalSpec::new(
            SignalKind::Sinusoid {
                amplitude: 1.0,
                frequency: 3,
            },
            n,
        )
        .unwrap()
        .generate();
        for i in 0..n {
            assert!((mix[i] - (a[i] + b[i])).abs() < 1e-15);
        }
    }

    #[test]
    fn step_splits_the_grid_at_the_position() {
        let spec = SignalSpec::new(
            SignalKind::Step {
                low: -1.0,
                high: 3.0,
                position: 0.5,
            },
            4,
        )
        .unwrap();
        // x = 0.25 and 0.5 are ≤ 0.5; x = 0.75 and 1.0 are above.
        assert_eq!(spec.generate(), vec![-1.0, -1.0, 3.0, 3.0]);
    }

    #[test]
    fn custom_signal_round_trips_and_validates_length() {
        let values = vec![0.5, -0.25, 4.0];
        let spec = SignalSpec::new(SignalKind::Custom(values.clone()), 3).unwrap();
        assert_eq!(spec.generate(), values);

        let err = SignalSpec::new(SignalKind::Custom(values), 4).unwrap_err();
        assert!(
            matches!(err, EwaError::DimensionMismatch { .. }),
            "got {err:?}"
        );
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = SignalSpec::new(
            SignalKind::SinusoidMix {
                components: vec![(2.0, 1), (1.0, 3), (0.5, 7)],
            },
            64,
        )
        .unwrap();
        assert_eq!(spec.generate(), spec.generate());
    }
}
