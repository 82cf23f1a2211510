//! Truncated product representation of Δ.

use crate::spectrum::Spectrum;

/// `−μ(π)(λ0² − λ²) ∏_{n=1..N} (λn² − λ²)/(λn⁰)²`.
///
/// For each `n ≥ 0` the entry labelled `n` closest to `λn⁰` is used.
/// Negative labels do not enter.
pub fn product_char_function(spec: &Spectrum, lambda: f64) -> f64 {
    let pick = |n: i64| {
        let target = spec.reference_eigenvalue(n);
        spec.entries()
            .iter()
            .filter(|e| e.n == n)
            .min_by(|a, b| {
                (a.lambda - target)
                    .abs()
                    .total_cmp(&(b.lambda - target).abs())
            })
            .map(|e| e.lambda)
            .unwrap_or(target)
    };
    let l2 = lambda * lambda;
    let mut value = -spec.mu_pi() * (pick(0).powi(2) - l2);
    for n in 1..=spec.n_max() as i64 {
        value *= (pick(n).powi(2) - l2) / spec.reference_eigenvalue(n).powi(2);
    }
    value
}
