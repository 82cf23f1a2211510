//! Eigenvalues, normalizing numbers and the constants βₙ, Δ̇(λₙ).

use rayon::prelude::*;

use super::ode::{IntegratorOptions, OdeMesh};
use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::roots::bracket_roots;
use crate::spectrum::{window_bound, SpectralEntry, Spectrum};
use crate::weight::{BoundaryParams, WeightProfile};

/// Tuning of the eigenvalue search and the derived constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    pub integrator: IntegratorOptions,
    /// Relative bisection tolerance.
    pub root_tol: f64,
    /// Scan cells per bracket on the first pass.
    pub cells_per_bracket: usize,
    /// Scan cells per bracket on the retry pass.
    pub max_cells_per_bracket: usize,
    /// Relative step of the Δ̇ difference quotient.
    pub fd_step: f64,
    /// Allowed `|ψ1(0, λₙ)| / max(1, |ψ2(0, λₙ)|)`.
    pub proportionality_tol: f64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            integrator: IntegratorOptions::default(),
            root_tol: 1e-14,
            cells_per_bracket: 8,
            max_cells_per_bracket: 64,
            fd_step: 1e-5,
            proportionality_tol: 1e-6,
        }
    }
}

/// Everything computed for one eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenRecord {
    pub n: i64,
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub ddelta: f64,
    /// `|Δ(λₙ)|`.
    pub delta_residual: f64,
    /// `|Δ̇ − βα| / |Δ̇|`.
    pub identity_residual: f64,
    /// `|ψ1(0, λₙ)| / max(1, |ψ2(0, λₙ)|)`; zero when ψ and φ are proportional.
    pub proportionality_defect: f64,
    /// Drift of the Wronskian of φ and ψ over the mesh, relative to
    /// `max |φ||ψ|` since the Wronskian itself vanishes at an eigenvalue.
    pub wronskian_drift: f64,
}

/// Direct-problem solver on one shooting mesh that resolves the whole window.
///
/// Sharing the mesh keeps Δ a smooth function of λ, so roots, difference
/// quotients and norms are mutually consistent.
#[derive(Debug, Clone)]
pub struct DirectSolver {
    w: WeightProfile,
    bc: BoundaryParams,
    n_max: usize,
    mesh: OdeMesh,
    opts: EigenOptions,
}

impl DirectSolver {
    pub fn new(
        pot: &Potential,
        w: &WeightProfile,
        bc: &BoundaryParams,
        n_max: usize,
        opts: &EigenOptions,
    ) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::Domain {
                what: "N",
                value: 0.0,
            });
        }
        let mesh = OdeMesh::for_lambda(pot, w, &opts.integrator, window_bound(n_max, w.mu_pi()))?;
        Ok(Self {
            w: *w,
            bc: *bc,
            n_max,
            mesh,
            opts: *opts,
        })
    }

    pub fn mesh(&self) -> &OdeMesh {
        &self.mesh
    }

    pub fn weight(&self) -> &WeightProfile {
        &self.w
    }

    pub fn boundary(&self) -> &BoundaryParams {
        &self.bc
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn char_function(&self, lambda: f64) -> Result<f64> {
        self.mesh.char_function(&self.bc, lambda)
    }

    /// All eigenvalues in the window, sorted. Expects `2N + 2` of them.
    pub fn find_eigenvalues(&self) -> Result<Vec<f64>> {
        let f = |l: f64| self.char_function(l);
        let expected = 2 * self.n_max + 2;
        let mut per_bracket = Vec::new();
        for cells in [self.opts.cells_per_bracket, self.opts.max_cells_per_bracket] {
            per_bracket = scan_window(&f, self.w.spacing(), self.n_max, cells, self.opts.root_tol)?;
            if per_bracket.iter().map(Vec::len).sum::<usize>() == expected {
                return Ok(per_bracket.into_iter().flatten().collect());
            }
        }
        let n = self.n_max as i64;
        match per_bracket.iter().position(Vec::is_empty) {
            Some(i) => Err(Error::MissedRoot(i as i64 - n)),
            None => Err(Error::RootCount {
                expected,
                found: per_bracket.iter().map(Vec::len).sum(),
            }),
        }
    }

    /// `αₙ = ∫ (φ1² + φ2²) ρ dx + φ1(π)²/h2`.
    pub fn normalizing_number(&self, lambda: f64) -> Result<f64> {
        let phi = self.mesh.phi(lambda)?;
        let norm = phi.weighted_norm_sq();
        if !(norm > f64::MIN_POSITIVE) {
            return Err(Error::DegenerateEigenfunction {
                lambda,
                reason: "zero weighted norm".into(),
            });
        }
        Ok(norm + phi.end()[0].powi(2) / self.bc.h2)
    }

    /// `βₙ = −ψ2(0, λₙ)` and Δ̇(λₙ) by a Richardson-extrapolated central
    /// difference.
    pub fn beta_and_ddelta(&self, lambda: f64) -> Result<(f64, f64)> {
        let (beta, ddelta, defect) = self.beta_ddelta_defect(lambda)?;
        if beta == 0.0 || defect > self.opts.proportionality_tol {
            return Err(Error::DegenerateEigenfunction {
                lambda,
                reason: format!(
                    "psi(0) is not proportional to phi(0) (defect {defect:e}, beta {beta:e})"
                ),
            });
        }
        Ok((beta, ddelta))
    }

    fn beta_ddelta_defect(&self, lambda: f64) -> Result<(f64, f64, f64)> {
        let psi0 = self.mesh.psi_at_zero(&self.bc, lambda)?;
        let beta = -psi0[1];
        let h = self.opts.fd_step * (1.0 + lambda.abs());
        let diff = |h: f64| -> Result<f64> {
            Ok((self.char_function(lambda + h)? - self.char_function(lambda - h)?) / (2.0 * h))
        };
        let (d1, d2) = (diff(h)?, diff(0.5 * h)?);
        Ok((
            beta,
            (4.0 * d2 - d1) / 3.0,
            psi0[0].abs() / beta.abs().max(1.0),
        ))
    }

    /// Full record for one candidate eigenvalue with label `n`. Nothing is
    /// asserted about `lambda`; the residual fields tell how well it
    /// satisfies the eigenvalue relations.
    pub fn record(&self, n: i64, lambda: f64) -> Result<EigenRecord> {
        let alpha = self.normalizing_number(lambda)?;
        let (beta, ddelta, proportionality_defect) = self.beta_ddelta_defect(lambda)?;
        let phi = self.mesh.phi(lambda)?;
        let psi = self.mesh.psi(&self.bc, lambda)?;
        let wr = phi.wronskian(&psi);
        let scale = phi
            .values()
            .iter()
            .zip(psi.values())
            .map(|(f, g)| f.norm() * g.norm())
            .fold(f64::MIN_POSITIVE, f64::max);
        let drift = wr.iter().map(|v| (v - wr[0]).abs()).fold(0.0, f64::max) / scale;
        Ok(EigenRecord {
            n,
            lambda,
            alpha,
            beta,
            ddelta,
            delta_residual: self.char_function(lambda)?.abs(),
            identity_residual: (ddelta - beta * alpha).abs() / ddelta.abs(),
            proportionality_defect,
            wronskian_drift: drift,
        })
    }

    /// Records for every eigenvalue in the window. Fails when an eigenfunction
    /// pair is not proportional.
    pub fn eigen_records(&self) -> Result<Vec<EigenRecord>> {
        let lambdas = self.find_eigenvalues()?;
        let labels = Spectrum::from_pairs(
            self.n_max,
            self.w.mu_pi(),
            lambdas.iter().map(|&l| (l, 1.0)).collect(),
        )?;
        let records: Vec<EigenRecord> = labels
            .entries()
            .par_iter()
            .map(|e| self.record(e.n, e.lambda))
            .collect::<Result<_>>()?;
        for r in &records {
            if r.beta == 0.0 || r.proportionality_defect > self.opts.proportionality_tol {
                return Err(Error::DegenerateEigenfunction {
                    lambda: r.lambda,
                    reason: format!(
                        "psi(0) is not proportional to phi(0) (defect {:e})",
                        r.proportionality_defect
                    ),
                });
            }
        }
        Ok(records)
    }

    /// Spectral data in the window.
    pub fn spectrum(&self) -> Result<Spectrum> {
        let records = self.eigen_records()?;
        spectrum_from_records(self.n_max, self.w.mu_pi(), &records)
    }
}

pub(crate) fn spectrum_from_records(
    n_max: usize,
    mu_pi: f64,
    records: &[EigenRecord],
) -> Result<Spectrum> {
    let entries = records
        .iter()
        .map(|r| SpectralEntry {
            n: r.n,
            lambda: r.lambda,
            alpha: r.alpha,
        })
        .collect();
    Spectrum::new(n_max, mu_pi, entries)
}

/// Roots of `f` in each bracket `nπ/μ(π) ± π/(2μ(π))`, `|n| ≤ N`. Brackets
/// are half-open, except the last one, so no root is reported twice.
pub(crate) fn scan_window<F>(
    f: &F,
    spacing: f64,
    n_max: usize,
    cells: usize,
    tol: f64,
) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let n = n_max as i64;
    (-n..=n)
        .into_par_iter()
        .map(|k| {
            let lo = (k as f64 - 0.5) * spacing;
            let hi = (k as f64 + 0.5) * spacing;
            bracket_roots(f, lo, hi, cells, tol, k == n)
        })
        .collect()
}

/// Δ(λ) on a mesh fitted to `λ`.
pub fn char_function(
    pot: &Potential,
    w: &WeightProfile,
    bc: &BoundaryParams,
    lambda: f64,
    opts: &IntegratorOptions,
) -> Result<f64> {
    OdeMesh::for_lambda(pot, w, opts, lambda)?.char_function(bc, lambda)
}

/// Eigenvalues in the window `|λ| < (N + ½)π/μ(π)`.
pub fn find_eigenvalues(
    pot: &Potential,
    w: &WeightProfile,
    bc: &BoundaryParams,
    n_max: usize,
    opts: &EigenOptions,
) -> Result<Vec<f64>> {
    DirectSolver::new(pot, w, bc, n_max, opts)?.find_eigenvalues()
}

/// αₙ for one eigenvalue on a mesh fitted to it.
pub fn normalizing_number(
    pot: &Potential,
    w: &WeightProfile,
    bc: &BoundaryParams,
    lambda: f64,
    opts: &EigenOptions,
) -> Result<f64> {
    let mesh = OdeMesh::for_lambda(pot, w, &opts.integrator, lambda)?;
    DirectSolver {
        w: *w,
        bc: *bc,
        n_max: 1,
        mesh,
        opts: *opts,
    }
    .normalizing_number(lambda)
}

/// `(βₙ, Δ̇(λₙ))` for one eigenvalue on a mesh fitted to it.
pub fn beta_and_ddelta(
    pot: &Potential,
    w: &WeightProfile,
    bc: &BoundaryParams,
    lambda: f64,
    opts: &EigenOptions,
) -> Result<(f64, f64)> {
    let bound = lambda.abs() * (1.0 + opts.fd_step) + opts.fd_step;
    let mesh = OdeMesh::for_lambda(pot, w, &opts.integrator, bound)?;
    DirectSolver {
        w: *w,
        bc: *bc,
        n_max: 1,
        mesh,
        opts: *opts,
    }
    .beta_and_ddelta(lambda)
}
