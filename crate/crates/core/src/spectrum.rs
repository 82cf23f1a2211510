//! Spectral data: eigenvalues with their normalizing numbers.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::weight::WeightProfile;

/// One eigenvalue with its bracket label and normalizing number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEntry {
    pub n: i64,
    pub lambda: f64,
    pub alpha: f64,
}

/// Eigenvalues in the window `|λ| < (N + ½)π/μ(π)`, sorted.
///
/// Labels are the nearest reference index `round(λ μ(π)/π)`. A window of a
/// problem with `h2 > 0` holds `2N + 2` eigenvalues, so one label appears
/// twice. Data with exactly `2N + 1` entries is accepted as well.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    n_max: usize,
    mu_pi: f64,
    entries: Vec<SpectralEntry>,
}

impl Spectrum {
    pub fn new(n_max: usize, mu_pi: f64, entries: Vec<SpectralEntry>) -> Result<Self> {
        let bad = |row: Option<usize>, reason: String| Err(Error::InvalidSpectrum { row, reason });
        if n_max == 0 {
            return bad(None, "N must be at least 1".into());
        }
        if !(mu_pi > 0.0 && mu_pi.is_finite()) {
            return bad(None, format!("mu_pi = {mu_pi} must be positive"));
        }
        let count = entries.len();
        if count != 2 * n_max + 1 && count != 2 * n_max + 2 {
            return bad(
                None,
                format!(
                    "{count} entries, expected {} or {}",
                    2 * n_max + 1,
                    2 * n_max + 2
                ),
            );
        }
        let spacing = PI / mu_pi;
        let n = n_max as i64;
        for (row, e) in entries.iter().enumerate() {
            if !e.lambda.is_finite() {
                return bad(Some(row), format!("lambda = {} is not finite", e.lambda));
            }
            if !(e.alpha > 0.0 && e.alpha.is_finite()) {
                return bad(Some(row), format!("alpha = {} must be positive", e.alpha));
            }
            if e.n.abs() > n {
                return bad(Some(row), format!("label {} outside [-{n}, {n}]", e.n));
            }
            if (e.lambda / spacing - e.n as f64).abs() > 1.0 {
                return bad(
                    Some(row),
                    format!("lambda = {} is far from its label {}", e.lambda, e.n),
                );
            }
            if row > 0 {
                let prev = &entries[row - 1];
                if e.lambda <= prev.lambda {
                    return bad(Some(row), "eigenvalues not strictly increasing".into());
                }
                if e.n < prev.n {
                    return bad(Some(row), "labels decrease".into());
                }
            }
        }
        Ok(Self {
            n_max,
            mu_pi,
            entries,
        })
    }

    /// Labels sorted `(λ, α)` pairs by the nearest reference index.
    pub fn from_pairs(n_max: usize, mu_pi: f64, mut pairs: Vec<(f64, f64)>) -> Result<Self> {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let spacing = PI / mu_pi;
        let n = n_max as i64;
        let entries = pairs
            .into_iter()
            .map(|(lambda, alpha)| SpectralEntry {
                n: ((lambda / spacing).round() as i64).clamp(-n, n),
                lambda,
                alpha,
            })
            .collect();
        Self::new(n_max, mu_pi, entries)
    }

    /// The unperturbed data `λ = nπ/μ(π)`, `α = μ(π)`.
    pub fn reference(n_max: usize, w: &WeightProfile) -> Result<Self> {
        let n = n_max as i64;
        let entries = (-n..=n)
            .map(|k| SpectralEntry {
                n: k,
                lambda: w.reference_eigenvalue(k),
                alpha: w.mu_pi(),
            })
            .collect();
        Self::new(n_max, w.mu_pi(), entries)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn mu_pi(&self) -> f64 {
        self.mu_pi
    }

    pub fn entries(&self) -> &[SpectralEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lambdas(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.lambda)
    }

    /// Reference eigenvalue for label `n`.
    pub fn reference_eigenvalue(&self, n: i64) -> f64 {
        n as f64 * PI / self.mu_pi
    }

    /// `(n, λ − λ⁰ₙ, α − μ(π))` for every entry.
    pub fn residuals(&self) -> impl Iterator<Item = (i64, f64, f64)> + '_ {
        self.entries.iter().map(|e| {
            (
                e.n,
                e.lambda - self.reference_eigenvalue(e.n),
                e.alpha - self.mu_pi,
            )
        })
    }

    /// Half-width `(N + ½)π/μ(π)` of the eigenvalue window.
    pub fn window(&self) -> f64 {
        window_bound(self.n_max, self.mu_pi)
    }

    /// Entries inside the smaller window of size `n`, relabelled.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        let bound = window_bound(n, self.mu_pi);
        let pairs = self
            .entries
            .iter()
            .filter(|e| e.lambda.abs() < bound)
            .map(|e| (e.lambda, e.alpha))
            .collect();
        Self::from_pairs(n, self.mu_pi, pairs)
    }
}

/// `(N + ½)π/μ(π)`.
pub fn window_bound(n_max: usize, mu_pi: f64) -> f64 {
    (n_max as f64 + 0.5) * PI / mu_pi
}
