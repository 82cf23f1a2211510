//! The data kernel F₀ built from paired spectral sums.

use crate::direct::free;
use crate::error::{Error, Result};
use crate::mat2::{self, Mat2};
use crate::spectrum::Spectrum;
use crate::weight::{BoundaryParams, WeightProfile};

/// One term `weight · e(λs) e(λμ(t))ᵀ` with `e(u) = (sin u, −cos u)ᵀ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelTerm {
    pub lambda: f64,
    pub weight: f64,
}

/// The comparison spectrum subtracted from the data.
///
/// `Reference` uses `λₙ⁰ = nπ/μ(π)` with weight `1/μ(π)`. `Matched` uses the
/// exact spectral data of the Ω = 0 problem with boundary constants
/// `(h1, h2)`; its full kernel vanishes, so only the truncation changes.
/// Fitting `(h1, h2)` to the `1/n` tail of the data removes the slowly
/// decaying part of the truncated sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pairing {
    Reference,
    Matched { h1: f64, h2: f64 },
}

impl Pairing {
    /// Least-squares fit of `(λₙ − λₙ⁰)μ(π) ≈ c1/λₙ⁰ + c2/(λₙ⁰)²` over the
    /// singly-labelled entries with `N/2 ≤ |n| ≤ N`, giving `h2 = c1` and
    /// `h1 = −c2/c1`. `None` when the tail is too short or `h2 ≤ 0`.
    pub fn fit(spec: &Spectrum) -> Option<Pairing> {
        let n_max = spec.n_max() as i64;
        let lo = (n_max / 2).max(1);
        let entries = spec.entries();
        let single = |i: usize| {
            let n = entries[i].n;
            (i == 0 || entries[i - 1].n != n) && (i + 1 == entries.len() || entries[i + 1].n != n)
        };
        let (mut s11, mut s12, mut s22, mut b1, mut b2, mut count) = (0.0, 0.0, 0.0, 0.0, 0.0, 0);
        for (i, e) in entries.iter().enumerate() {
            if e.n.abs() < lo || !single(i) {
                continue;
            }
            let x = 1.0 / spec.reference_eigenvalue(e.n);
            let y = (e.lambda - spec.reference_eigenvalue(e.n)) * spec.mu_pi();
            let (u, v) = (x, x * x);
            s11 += u * u;
            s12 += u * v;
            s22 += v * v;
            b1 += u * y;
            b2 += v * y;
            count += 1;
        }
        let det = s11 * s22 - s12 * s12;
        if count < 3 || det <= 1e-12 * s11 * s22 {
            return None;
        }
        let c1 = (s22 * b1 - s12 * b2) / det;
        let c2 = (s11 * b2 - s12 * b1) / det;
        let (h1, h2) = (-c2 / c1, c1);
        (h2 > 0.0 && h1.is_finite()).then_some(Pairing::Matched { h1, h2 })
    }

    /// `Matched` when the data has `2N + 2` entries and the fit succeeds,
    /// `Reference` otherwise.
    pub fn auto(spec: &Spectrum) -> Pairing {
        if spec.len() == 2 * spec.n_max() + 2 {
            Self::fit(spec).unwrap_or(Pairing::Reference)
        } else {
            Pairing::Reference
        }
    }
}

/// Paired terms of F₀ for one data set.
#[derive(Debug, Clone)]
pub struct KernelBuilder {
    w: WeightProfile,
    pairing: Pairing,
    terms: Vec<KernelTerm>,
}

impl KernelBuilder {
    /// Data paired with the reference spectrum.
    pub fn new(spec: &Spectrum, w: &WeightProfile) -> Result<Self> {
        Self::with_pairing(spec, w, Pairing::Reference)
    }

    pub fn with_pairing(spec: &Spectrum, w: &WeightProfile, pairing: Pairing) -> Result<Self> {
        if (spec.mu_pi() - w.mu_pi()).abs() > 1e-12 * w.mu_pi() {
            return Err(Error::InvalidSpectrum {
                row: None,
                reason: format!(
                    "mu_pi = {} does not match the weight ({})",
                    spec.mu_pi(),
                    w.mu_pi()
                ),
            });
        }
        let mut terms: Vec<KernelTerm> = spec
            .entries()
            .iter()
            .map(|e| KernelTerm {
                lambda: e.lambda,
                weight: 1.0 / e.alpha,
            })
            .collect();
        match pairing {
            Pairing::Reference => {
                let n = spec.n_max() as i64;
                terms.extend((-n..=n).map(|k| KernelTerm {
                    lambda: w.reference_eigenvalue(k),
                    weight: -1.0 / w.mu_pi(),
                }));
            }
            Pairing::Matched { h1, h2 } => {
                let bc = BoundaryParams::new(h1, h2)?;
                let comparison = free::spectrum(w, &bc, spec.n_max())?;
                terms.extend(comparison.entries().iter().map(|e| KernelTerm {
                    lambda: e.lambda,
                    weight: -1.0 / e.alpha,
                }));
            }
        }
        Ok(Self {
            w: *w,
            pairing,
            terms: merge(terms),
        })
    }

    /// The same terms with every weight multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| KernelTerm {
                lambda: t.lambda,
                weight: c * t.weight,
            })
            .collect();
        Self {
            w: self.w,
            pairing: self.pairing,
            terms: merge(terms),
        }
    }

    pub fn weight(&self) -> &WeightProfile {
        &self.w
    }

    pub fn pairing(&self) -> Pairing {
        self.pairing
    }

    /// Terms sorted by λ; terms sharing a λ are merged and zero weights dropped.
    pub fn terms(&self) -> &[KernelTerm] {
        &self.terms
    }

    /// F₀(s, t) for `s ∈ [0, 2μ(π)]`, `t ∈ [0, π]`.
    pub fn f0(&self, s: f64, t: f64) -> Result<Mat2> {
        if !(0.0..=2.0 * self.w.mu_pi()).contains(&s) {
            return Err(Error::Domain {
                what: "s",
                value: s,
            });
        }
        Ok(self.f0_travel(s, self.w.mu(t)?))
    }

    /// F(x, t) = F₀(μ(x), t).
    pub fn f(&self, x: f64, t: f64) -> Result<Mat2> {
        Ok(self.f0_travel(self.w.mu(x)?, self.w.mu(t)?))
    }

    /// F₀ with both arguments in travel time.
    pub(crate) fn f0_travel(&self, s: f64, u: f64) -> Mat2 {
        let mut m = Mat2::zeros();
        for term in &self.terms {
            m += term.weight
                * mat2::free_column(term.lambda * s)
                * mat2::free_column(term.lambda * u).transpose();
        }
        m
    }

    /// `a(x) = Σ w R(λx)` sampled at `samples` points of `[0, 2μ(π)]`.
    pub fn a_profile(&self, samples: usize) -> AProfile {
        let top = 2.0 * self.w.mu_pi();
        let count = samples.max(2);
        let mut profile = AProfile {
            terms: self.terms.clone(),
            x: Vec::new(),
            values: Vec::new(),
        };
        profile.x = (0..count)
            .map(|i| top * i as f64 / (count - 1) as f64)
            .collect();
        profile.values = profile.x.iter().map(|&x| profile.eval(x)).collect();
        profile
    }
}

fn merge(mut terms: Vec<KernelTerm>) -> Vec<KernelTerm> {
    terms.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    let mut out: Vec<KernelTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.last_mut() {
            Some(last) if last.lambda == t.lambda => last.weight += t.weight,
            _ => out.push(t),
        }
    }
    out.retain(|t| t.weight != 0.0);
    out
}

/// The rotation-sum profile `a(x) = Σ w R(λx)`, with
/// `F₀(s, t) = ½[a(s − μ(t)) + a(s + μ(t)) T]`, `T = diag(−1, 1)`.
#[derive(Debug, Clone)]
pub struct AProfile {
    terms: Vec<KernelTerm>,
    x: Vec<f64>,
    values: Vec<Mat2>,
}

impl AProfile {
    /// `a(x)` from the terms, for any real `x`.
    pub fn eval(&self, x: f64) -> Mat2 {
        self.terms.iter().fold(Mat2::zeros(), |acc, t| {
            acc + t.weight * mat2::rotation(t.lambda * x)
        })
    }

    pub fn sample_points(&self) -> &[f64] {
        &self.x
    }

    pub fn samples(&self) -> &[Mat2] {
        &self.values
    }

    /// F₀ at travel-time arguments `(s, u)`.
    pub fn f0(&self, s: f64, u: f64) -> Mat2 {
        0.5 * (self.eval(s - u) + self.eval(s + u) * mat2::flip())
    }
}
