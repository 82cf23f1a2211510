//! Closed forms for Ω = 0.

use super::eigen::scan_window;
use crate::error::{Error, Result};
use crate::spectrum::Spectrum;
use crate::weight::{BoundaryParams, WeightProfile};

/// `(λ + h1) sin λμ(π) − h2 cos λμ(π)`.
pub fn char_function(w: &WeightProfile, bc: &BoundaryParams, lambda: f64) -> f64 {
    let (s, c) = (lambda * w.mu_pi()).sin_cos();
    (lambda + bc.h1) * s - bc.h2 * c
}

/// `μ(π) + sin²(λμ(π))/h2`.
pub fn normalizing_number(w: &WeightProfile, bc: &BoundaryParams, lambda: f64) -> f64 {
    w.mu_pi() + (lambda * w.mu_pi()).sin().powi(2) / bc.h2
}

/// Spectral data of the Ω = 0 problem in the window of size `n_max`.
pub fn spectrum(w: &WeightProfile, bc: &BoundaryParams, n_max: usize) -> Result<Spectrum> {
    let f = |l: f64| Ok(char_function(w, bc, l));
    let expected = 2 * n_max + 2;
    let mut found = 0;
    for cells in [8, 64] {
        let roots: Vec<f64> = scan_window(&f, w.spacing(), n_max, cells, 1e-15)?
            .into_iter()
            .flatten()
            .collect();
        if roots.len() == expected {
            let pairs = roots
                .into_iter()
                .map(|l| (l, normalizing_number(w, bc, l)))
                .collect();
            return Spectrum::from_pairs(n_max, w.mu_pi(), pairs);
        }
        found = roots.len();
    }
    Err(Error::RootCount { expected, found })
}
