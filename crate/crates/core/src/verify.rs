//! Expansion, Parseval, boundary-constant recovery and the round trip.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use crate::direct::{DirectSolver, EigenOptions, IntegratorOptions, OdeMesh, TrajectoryTable};
use crate::error::{Error, Result};
use crate::glm::{reconstruct_potential, InverseOptions, Pairing};
use crate::grid::Grid;
use crate::mat2::Vec2;
use crate::potential::Potential;
use crate::spectrum::Spectrum;
use crate::weight::{BoundaryParams, WeightProfile};

/// A vector function sampled on the nodes of an [`ExpansionBasis`].
#[derive(Debug, Clone)]
pub struct SampledVector {
    x: Arc<[f64]>,
    values: Vec<Vec2>,
}

impl SampledVector {
    pub fn nodes(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[Vec2] {
        &self.values
    }
}

/// Which norm Parseval's identity is checked in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParsevalMode {
    /// `∫ |f|² ρ dx`, with `f` embedded as `(f, 0)`.
    #[default]
    Weighted,
    /// Adds `f1(π)²/h2` to the norm and `φ1(π)f1(π)/h2` to each coefficient.
    Extended,
}

/// Eigenfunctions φ(·, λₙ) of one spectrum on a common mesh, built by the
/// same rule as the eigenvalue search.
#[derive(Debug, Clone)]
pub struct ExpansionBasis {
    mesh: OdeMesh,
    spectrum: Spectrum,
    h2: f64,
    trajectories: Vec<TrajectoryTable>,
}

impl ExpansionBasis {
    pub fn new(
        pot: &Potential,
        w: &WeightProfile,
        bc: &BoundaryParams,
        spec: &Spectrum,
        opts: &IntegratorOptions,
    ) -> Result<Self> {
        let mesh = OdeMesh::for_lambda(pot, w, opts, spec.window())?;
        let trajectories = spec
            .entries()
            .par_iter()
            .map(|e| mesh.phi(e.lambda))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            mesh,
            spectrum: spec.clone(),
            h2: bc.h2,
            trajectories,
        })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn trajectories(&self) -> &[TrajectoryTable] {
        &self.trajectories
    }

    pub fn nodes(&self) -> &[f64] {
        self.mesh.nodes()
    }

    /// Samples `f` on the mesh.
    pub fn sample(&self, f: impl Fn(f64) -> Vec2) -> SampledVector {
        SampledVector {
            x: self.mesh.shared_nodes(),
            values: self.nodes().iter().map(|&x| f(x)).collect(),
        }
    }

    fn inner(&self, f: &SampledVector, g: &[Vec2]) -> f64 {
        let prod: Vec<f64> = f.values.iter().zip(g).map(|(a, b)| a.dot(b)).collect();
        self.mesh.integrate(&prod)
    }

    /// `∫ |f|² ρ dx`.
    pub fn norm_sq(&self, f: &SampledVector) -> f64 {
        self.inner(f, &f.values)
    }

    /// `aₙ = (1/αₙ) ∫ φ(x, λₙ)·f(x) ρ dx`, in spectrum order.
    pub fn coefficients(&self, f: &SampledVector) -> Vec<f64> {
        self.spectrum
            .entries()
            .par_iter()
            .zip(&self.trajectories)
            .map(|(e, phi)| phi.weighted_inner(&f.values) / e.alpha)
            .collect()
    }

    /// `|‖f‖² − Σ (1/αₙ)(f, φₙ)²| / ‖f‖²` over the spectrum.
    pub fn parseval_residual(&self, f: &SampledVector, mode: ParsevalMode) -> Result<f64> {
        let boundary = f.values[f.values.len() - 1][0];
        let mut norm = self.norm_sq(f);
        if mode == ParsevalMode::Extended {
            norm += boundary * boundary / self.h2;
        }
        if !(norm > 0.0) {
            return Err(Error::ZeroFunction);
        }
        let sum: f64 = self
            .spectrum
            .entries()
            .par_iter()
            .zip(&self.trajectories)
            .map(|(e, phi)| {
                let mut c = phi.weighted_inner(&f.values);
                if mode == ParsevalMode::Extended {
                    c += phi.end()[0] * boundary / self.h2;
                }
                c * c / e.alpha
            })
            .collect::<Vec<_>>()
            .iter()
            .sum();
        Ok((norm - sum).abs() / norm)
    }

    /// `Σ aₙ φ(·, λₙ)`.
    pub fn synthesize(&self, coeffs: &[f64]) -> SampledVector {
        let mut values = vec![Vec2::zeros(); self.nodes().len()];
        for (c, phi) in coeffs.iter().zip(&self.trajectories) {
            for (v, p) in values.iter_mut().zip(phi.values()) {
                *v += *c * p;
            }
        }
        SampledVector {
            x: self.mesh.shared_nodes(),
            values,
        }
    }

    /// `‖f − g‖ / ‖f‖` in the weighted norm.
    pub fn relative_error(&self, f: &SampledVector, g: &SampledVector) -> Result<f64> {
        let norm = self.norm_sq(f);
        if !(norm > 0.0) {
            return Err(Error::ZeroFunction);
        }
        let diff: Vec<Vec2> = f.values.iter().zip(&g.values).map(|(a, b)| a - b).collect();
        Ok((self.inner(
            &SampledVector {
                x: f.x.clone(),
                values: diff.clone(),
            },
            &diff,
        ) / norm)
            .sqrt())
    }
}

/// Expansion coefficients of `f` in the eigenfunctions of `spec`.
pub fn expansion_coefficients(
    f: impl Fn(f64) -> Vec2,
    pot: &Potential,
    w: &WeightProfile,
    bc: &BoundaryParams,
    spec: &Spectrum,
) -> Result<Vec<f64>> {
    let basis = ExpansionBasis::new(pot, w, bc, spec, &IntegratorOptions::default())?;
    Ok(basis.coefficients(&basis.sample(f)))
}

/// Parseval residual of `f` in the weighted norm.
pub fn parseval_residual(
    f: impl Fn(f64) -> Vec2,
    pot: &Potential,
    w: &WeightProfile,
    bc: &BoundaryParams,
    spec: &Spectrum,
) -> Result<f64> {
    let basis = ExpansionBasis::new(pot, w, bc, spec, &IntegratorOptions::default())?;
    basis.parseval_residual(&basis.sample(f), ParsevalMode::Weighted)
}

/// Boundary constants recovered by least squares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryRecovery {
    pub h1: f64,
    pub h2: f64,
    /// Largest `|(λₙ + ĥ1)φ1(π) + ĥ2 φ2(π)|`.
    pub max_residual: f64,
}

fn end_values(
    spec: &Spectrum,
    pot: &Potential,
    w: &WeightProfile,
    opts: &IntegratorOptions,
) -> Result<Vec<Vec2>> {
    let mesh = OdeMesh::for_lambda(pot, w, opts, spec.window())?;
    spec.entries()
        .par_iter()
        .map(|e| mesh.phi_at_pi(e.lambda))
        .collect()
}

/// Fits `(λₙ + h1)φ1(π, λₙ) + h2 φ2(π, λₙ) = 0` over all eigenvalues.
pub fn recover_boundary_constants(
    spec: &Spectrum,
    pot: &Potential,
    w: &WeightProfile,
    opts: &IntegratorOptions,
) -> Result<BoundaryRecovery> {
    if spec.len() < 2 {
        return Err(Error::DegenerateSystem(
            "need at least two eigenvalues".into(),
        ));
    }
    let ends = end_values(spec, pot, w, opts)?;
    let (mut g11, mut g12, mut g22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (e, v) in spec.entries().iter().zip(&ends) {
        let (a, b, y) = (v[0], v[1], -e.lambda * v[0]);
        g11 += a * a;
        g12 += a * b;
        g22 += b * b;
        r1 += a * y;
        r2 += b * y;
    }
    let det = g11 * g22 - g12 * g12;
    if !(det > 1e-14 * (g11 + g22).powi(2)) {
        return Err(Error::DegenerateSystem(format!(
            "normal matrix determinant {det:e}"
        )));
    }
    let h1 = (g22 * r1 - g12 * r2) / det;
    let h2 = (g11 * r2 - g12 * r1) / det;
    if !(h2 > 0.0) {
        return Err(Error::DegenerateSystem(format!(
            "recovered h2 = {h2} is not positive"
        )));
    }
    let max_residual = spec
        .entries()
        .iter()
        .zip(&ends)
        .map(|(e, v)| ((e.lambda + h1) * v[0] + h2 * v[1]).abs())
        .fold(0.0, f64::max);
    Ok(BoundaryRecovery {
        h1,
        h2,
        max_residual,
    })
}

/// `|(λₙ + h1)φ1(π, λₙ) + h2 φ2(π, λₙ)|` for known constants.
pub fn boundary_relation_residuals(
    spec: &Spectrum,
    pot: &Potential,
    w: &WeightProfile,
    bc: &BoundaryParams,
    opts: &IntegratorOptions,
) -> Result<Vec<f64>> {
    let ends = end_values(spec, pot, w, opts)?;
    Ok(spec
        .entries()
        .iter()
        .zip(&ends)
        .map(|(e, v)| ((e.lambda + bc.h1) * v[0] + bc.h2 * v[1]).abs())
        .collect())
}

/// Default Parseval test function `(sin 2x, cos x)`.
pub fn parseval_test_function(x: f64) -> Vec2 {
    Vec2::new((2.0 * x).sin(), x.cos())
}

/// Summary of a direct → inverse → compare run.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTripReport {
    pub n_max: usize,
    pub grid: usize,
    pub colloc: usize,
    pub pairing: Pairing,
    pub errors_p_l2_rel: f64,
    pub errors_q_l2_rel: f64,
    pub max_asym_defect: f64,
    pub max_condition: f64,
    pub max_origin_residual: f64,
    pub parseval_residual: f64,
    pub h1_hat: f64,
    pub h2_hat: f64,
    pub timings_direct: f64,
    pub timings_inverse: f64,
    pub timings_verify: f64,
    pub timings_total: f64,
}

impl RoundTripReport {
    /// `key = value` pairs in a fixed order.
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        let f = |v: f64| format!("{v:.16e}");
        let (kind, ph1, ph2) = match self.pairing {
            Pairing::Reference => ("reference", f64::NAN, f64::NAN),
            Pairing::Matched { h1, h2 } => ("matched", h1, h2),
        };
        vec![
            ("n_max", self.n_max.to_string()),
            ("grid", self.grid.to_string()),
            ("colloc", self.colloc.to_string()),
            ("pairing", kind.to_string()),
            ("pairing_h1", f(ph1)),
            ("pairing_h2", f(ph2)),
            ("errors_p_L2_rel", f(self.errors_p_l2_rel)),
            ("errors_q_L2_rel", f(self.errors_q_l2_rel)),
            ("max_asym_defect", f(self.max_asym_defect)),
            ("max_condition", f(self.max_condition)),
            ("max_origin_residual", f(self.max_origin_residual)),
            ("parseval_residual", f(self.parseval_residual)),
            ("h1_hat", f(self.h1_hat)),
            ("h2_hat", f(self.h2_hat)),
            ("timings_direct", f(self.timings_direct)),
            ("timings_inverse", f(self.timings_inverse)),
            ("timings_verify", f(self.timings_verify)),
            ("timings_total", f(self.timings_total)),
        ]
    }

    pub fn to_text(&self) -> String {
        self.fields()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    /// Parses the output of [`to_text`](Self::to_text). Blank lines, `#`
    /// comments and unknown keys are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = std::collections::HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                reason: "expected key = value".into(),
            })?;
            map.insert(k.trim().to_string(), (i + 1, v.trim().to_string()));
        }
        let get = |k: &str| {
            map.get(k).ok_or_else(|| Error::Parse {
                line: 0,
                reason: format!("missing {k}"),
            })
        };
        let num = |k: &str| -> Result<f64> {
            let (line, v) = get(k)?;
            v.parse().map_err(|_| Error::Parse {
                line: *line,
                reason: format!("bad number for {k}"),
            })
        };
        let int = |k: &str| -> Result<usize> {
            let (line, v) = get(k)?;
            v.parse().map_err(|_| Error::Parse {
                line: *line,
                reason: format!("bad integer for {k}"),
            })
        };
        let pairing = match get("pairing")?.1.as_str() {
            "reference" => Pairing::Reference,
            "matched" => Pairing::Matched {
                h1: num("pairing_h1")?,
                h2: num("pairing_h2")?,
            },
            other => {
                return Err(Error::Parse {
                    line: get("pairing")?.0,
                    reason: format!("unknown pairing {other}"),
                })
            }
        };
        Ok(Self {
            n_max: int("n_max")?,
            grid: int("grid")?,
            colloc: int("colloc")?,
            pairing,
            errors_p_l2_rel: num("errors_p_L2_rel")?,
            errors_q_l2_rel: num("errors_q_L2_rel")?,
            max_asym_defect: num("max_asym_defect")?,
            max_condition: num("max_condition")?,
            max_origin_residual: num("max_origin_residual")?,
            parseval_residual: num("parseval_residual")?,
            h1_hat: num("h1_hat")?,
            h2_hat: num("h2_hat")?,
            timings_direct: num("timings_direct")?,
            timings_inverse: num("timings_inverse")?,
            timings_verify: num("timings_verify")?,
            timings_total: num("timings_total")?,
        })
    }
}

/// Settings of a round trip.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RoundTripOptions {
    pub eigen: EigenOptions,
    pub inverse: InverseOptions,
}

/// Everything a round trip produces.
#[derive(Debug, Clone)]
pub struct RoundTrip {
    pub report: RoundTripReport,
    pub spectrum: Spectrum,
    /// Ω̂ resampled onto the input grid.
    pub reconstructed: Potential,
    pub inverse: crate::glm::Reconstruction,
}

/// Direct problem on `pot_in`, inverse problem on a `colloc`-cell grid, and
/// comparison on the grid of `pot_in`. Errors carry the failing stage.
pub fn roundtrip_report(
    pot_in: &Potential,
    w: &WeightProfile,
    bc: &BoundaryParams,
    n_max: usize,
    colloc: usize,
    opts: &RoundTripOptions,
) -> Result<RoundTrip> {
    let start = Instant::now();
    let spectrum = DirectSolver::new(pot_in, w, bc, n_max, &opts.eigen)
        .and_then(|s| s.spectrum())
        .map_err(|e| e.at_stage("direct"))?;
    let t_direct = start.elapsed().as_secs_f64();

    let t0 = Instant::now();
    let inverse = Grid::uniform(w, colloc)
        .and_then(|g| reconstruct_potential(&spectrum, w, &g, &opts.inverse))
        .map_err(|e| e.at_stage("inverse"))?;
    let reconstructed = inverse.potential.resample(pot_in.grid());
    let t_inverse = t0.elapsed().as_secs_f64();

    let t0 = Instant::now();
    let (ep, eq) = reconstructed.relative_l2_error(pot_in);
    let verify = || -> Result<(f64, BoundaryRecovery)> {
        let basis =
            ExpansionBasis::new(&inverse.potential, w, bc, &spectrum, &opts.eigen.integrator)?;
        let parseval = basis.parseval_residual(
            &basis.sample(parseval_test_function),
            ParsevalMode::Weighted,
        )?;
        let recovery =
            recover_boundary_constants(&spectrum, &inverse.potential, w, &opts.eigen.integrator)?;
        Ok((parseval, recovery))
    };
    let (parseval, recovery) = verify().map_err(|e| e.at_stage("verify"))?;
    let t_verify = t0.elapsed().as_secs_f64();

    let d = &inverse.diagnostics;
    let report = RoundTripReport {
        n_max,
        grid: pot_in.grid().cells(),
        colloc,
        pairing: d.pairing,
        errors_p_l2_rel: ep,
        errors_q_l2_rel: eq,
        max_asym_defect: d.max_asymmetry_defect(),
        max_condition: d.max_condition(),
        max_origin_residual: d.max_origin_residual(),
        parseval_residual: parseval,
        h1_hat: recovery.h1,
        h2_hat: recovery.h2,
        timings_direct: t_direct,
        timings_inverse: t_inverse,
        timings_verify: t_verify,
        timings_total: start.elapsed().as_secs_f64(),
    };
    Ok(RoundTrip {
        report,
        spectrum,
        reconstructed,
        inverse,
    })
}
