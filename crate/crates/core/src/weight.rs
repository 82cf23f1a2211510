//! The piecewise-constant weight and the travel-time map.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Weight equal to 1 on `[0, a]` and to `alpha` on `(a, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightProfile {
    a: f64,
    alpha: f64,
}

impl WeightProfile {
    pub fn new(a: f64, alpha: f64) -> Result<Self> {
        if !(a > 0.0 && a < PI) {
            return Err(Error::InvalidWeight(format!(
                "jump point a = {a} must lie in (0, pi)"
            )));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidWeight(format!(
                "alpha = {alpha} must be positive"
            )));
        }
        Ok(Self { a, alpha })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// ρ(x). The jump point belongs to the left piece.
    pub fn rho(&self, x: f64) -> f64 {
        if x <= self.a {
            1.0
        } else {
            self.alpha
        }
    }

    /// Total travel time μ(π).
    pub fn mu_pi(&self) -> f64 {
        self.alpha * (PI - self.a) + self.a
    }

    /// Travel time μ(x) = ∫₀ˣ ρ.
    ///
    /// ```
    /// # use dirac_inverse::WeightProfile;
    /// let w = WeightProfile::new(std::f64::consts::FRAC_PI_2, 2.0).unwrap();
    /// assert!((w.mu(std::f64::consts::PI).unwrap() - 1.5 * std::f64::consts::PI).abs() < 1e-15);
    /// ```
    pub fn mu(&self, x: f64) -> Result<f64> {
        if !(0.0..=PI).contains(&x) {
            return Err(Error::Domain {
                what: "x",
                value: x,
            });
        }
        Ok(self.mu_unchecked(x))
    }

    pub(crate) fn mu_unchecked(&self, x: f64) -> f64 {
        if x <= self.a {
            x
        } else {
            self.alpha * (x - self.a) + self.a
        }
    }

    /// Inverse travel-time map on `[0, μ(π)]`.
    pub fn mu_inverse(&self, s: f64) -> Result<f64> {
        let top = self.mu_pi();
        if !(0.0..=top).contains(&s) {
            return Err(Error::Domain {
                what: "s",
                value: s,
            });
        }
        Ok(if s <= self.a {
            s
        } else {
            ((s - self.a) / self.alpha + self.a).min(PI)
        })
    }

    /// Unperturbed eigenvalue nπ/μ(π).
    pub fn reference_eigenvalue(&self, n: i64) -> f64 {
        n as f64 * PI / self.mu_pi()
    }

    /// Spacing π/μ(π) between consecutive reference eigenvalues.
    pub fn spacing(&self) -> f64 {
        PI / self.mu_pi()
    }
}

/// Boundary constants at the right end. `h2` must be positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryParams {
    pub h1: f64,
    pub h2: f64,
}

impl BoundaryParams {
    pub fn new(h1: f64, h2: f64) -> Result<Self> {
        if !h1.is_finite() {
            return Err(Error::InvalidBoundary(format!("h1 = {h1} is not finite")));
        }
        if !(h2 > 0.0 && h2.is_finite()) {
            return Err(Error::InvalidBoundary(format!(
                "h2 = {h2} must be positive"
            )));
        }
        Ok(Self { h1, h2 })
    }
}
