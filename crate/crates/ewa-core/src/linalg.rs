//! Minimal dense linear algebra: vectors, orthonormal bases, and the checks
//! that keep them honest.
//!
//! Smoothers never materialise their `n × n` matrix in normal operation; they
//! work through a shared [`Basis`] via analysis (`z = Bᵀy`) and synthesis
//! (`B z`) passes, each `O(n²)`.  The only `O(n³)` step is the orthonormality
//! validation performed once when a basis is constructed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{EwaError, Result};

/// Maximum allowed deviation of `BᵀB` from the identity, per entry.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;

/// Dot product of two equal-length slices.
#[must_use]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Squared Euclidean norm.
#[must_use]
pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

/// Squared Euclidean distance `‖a - b‖²`.
#[must_use]
pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// In-place `y ← y + c·x`.
pub fn axpy(c: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += c * xi;
    }
}

/// An orthonormal basis of `R^n`, stored column-major.
///
/// Construction validates `BᵀB = I` entrywise within
/// [`ORTHONORMALITY_TOL`]; every downstream routine may therefore assume
/// exact orthonormality up to that tolerance.
#[derive(Clone)]
pub struct Basis {
    n: usize,
    /// Column-major storage: column `j` occupies `cols[j*n .. (j+1)*n]`.
    cols: Vec<f64>,
}

impl std::fmt::Debug for Basis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Basis(n = {})", self.n)
    }
}

impl Basis {
    /// Builds a basis from column-major data and validates orthonormality.
    pub fn from_columns(n: usize, cols: Vec<f64>) -> Result<Self> {
        if cols.len() != n * n {
            return Err(EwaError::DimensionMismatch {
                context: "basis storage",
                expected: n * n,
                got: cols.len(),
            });
        }
        let basis = Self { n, cols };
        let max_deviation = basis.max_gram_deviation();
        if max_deviation > ORTHONORMALITY_TOL {
            return Err(EwaError::NotOrthonormal {
                max_deviation,
                tolerance: ORTHONORMALITY_TOL,
            });
        }
        Ok(basis)
    }

    /// The standard basis (identity matrix).
    #[must_use]
    pub fn identity(n: usize) -> Self {
        let mut cols = vec![0.0; n * n];
        for j in 0..n {
            cols[j * n + j] = 1.0;
        }
        Self { n, cols }
    }

    /// The orthonormal cosine basis (type-II discrete cosine transform):
    ///
    /// ```text
    ///     b_0(i) = 1/√n,
    ///     b_j(i) = √(2/n) · cos(π j (2i+1) / (2n)),   j = 1, …, n-1.
    /// ```
    #[must_use]
    pub fn cosine(n: usize) -> Self {
        let nf = n as f64;
        let mut cols = vec![0.0; n * n];
        for j in 0..n {
            let scale = if j == 0 {
                (1.0 / nf).sqrt()
            } else {
                (2.0 / nf).sqrt()
            };
            for i in 0..n {
                let angle = std::f64::consts::PI * j as f64 * (2 * i + 1) as f64 / (2.0 * nf);
                cols[j * n + i] = scale * angle.cos();
            }
        }
        Self { n, cols }
    }

    /// A seeded random orthonormal basis: a standard Gaussian matrix
    /// orthogonalised by modified Gram–Schmidt with one re-orthogonalisation
    /// pass (sufficient for orthogonality near machine precision).
    pub fn random_orthonormal(n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cols: Vec<f64> = (0..n * n)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        for j in 0..n {
            for _pass in 0..2 {
                for i in 0..j {
                    let (head, tail) = cols.split_at_mut(j * n);
                    let qi = &head[i * n..(i + 1) * n];
                    let vj = &mut tail[..n];
                    let c = dot(vj, qi);
                    axpy(-c, qi, vj);
                }
            }
            let vj = &mut cols[j * n..(j + 1) * n];
            let norm = norm_sq(vj).sqrt();
            if norm < 1e-12 {
                // A numerically dependent Gaussian draw has probability zero;
                // treat it as a degenerate basis rather than dividing by ~0.
                return Err(EwaError::NotOrthonormal {
                    max_deviation: 1.0,
                    tolerance: ORTHONORMALITY_TOL,
                });
            }
            for v in vj {
                *v /= norm;
            }
        }
        Self::from_columns(n, cols)
    }

    /// Ambient dimension.
    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Column `j` as a slice.
    #[must_use]
    pub fn col(&self, j: usize) -> &[f64] {
        &self.cols[j * self.n..(j + 1) * self.n]
    }

    /// Analysis pass: coefficients `z = Bᵀ y`.
    #[must_use]
    pub fn coefficients(&self, y: &[f64]) -> Vec<f64> {
        (0..self.n).map(|j| dot(self.col(j), y)).collect()
    }

    /// Synthesis pass: `B z`.
    #[must_use]
    pub fn synthesize(&self, z: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (j, zj) in z.iter().enumerate() {
            if *zj != 0.0 {
                axpy(*zj, self.col(j), &mut out);
            }
        }
        out
    }

    /// Largest entrywise deviation of `BᵀB` from the identity.
    #[must_use]
    pub fn max_gram_deviation(&self) -> f64 {
        let mut max_dev: f64 = 0.0;
        for j in 0..self.n {
            for k in j..self.n {
                let g = dot(self.col(j), self.col(k));
                let target = if j == k { 1.0 } else { 0.0 };
                max_dev = max_dev.max((g - target).abs());
            }
        }
        max_dev
    }
}
