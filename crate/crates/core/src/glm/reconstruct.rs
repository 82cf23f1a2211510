//! Potential recovery from the kernel diagonal.

use super::kernel::{KernelBuilder, Pairing};
use super::system::{solve_kernel, GlmOptions, KernelField};
use crate::error::Result;
use crate::grid::Grid;
use crate::mat2::{self, Mat2, Vec2};
use crate::potential::Potential;
use crate::spectrum::Spectrum;
use crate::weight::WeightProfile;

/// How Ω is read off `K(x, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OmegaFormula {
    /// `ρ(x)(K B − B K)`. Symmetric and trace-free for an exact kernel. At
    /// the jump node ρ is replaced by the harmonic mean `2α/(1 + α)`, since
    /// the truncated kernel there converges to the mean of both sides.
    #[default]
    Weighted,
    /// `ρ(x) K B − B K`, with ρ(a) = 1.
    Unbalanced,
}

/// Which comparison spectrum to pair the data with.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PairingChoice {
    /// [`Pairing::auto`].
    #[default]
    Auto,
    Fixed(Pairing),
}

/// Settings of the inverse pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InverseOptions {
    pub glm: GlmOptions,
    pub pairing: PairingChoice,
    pub formula: OmegaFormula,
}

/// Ω̂ with the per-node symmetry defect `|M₁₁ + M₂₂| + |M₁₂ − M₂₁|` of the
/// raw matrix.
#[derive(Debug, Clone)]
pub struct OmegaReconstruction {
    pub potential: Potential,
    pub asymmetry_defect: Vec<f64>,
}

/// Reads Ω off the diagonal of a solved kernel.
pub fn reconstruct_omega(
    field: &KernelField,
    w: &WeightProfile,
    formula: OmegaFormula,
) -> Result<OmegaReconstruction> {
    let grid = field.grid();
    let b = mat2::symplectic();
    let mut p = Vec::with_capacity(grid.len());
    let mut q = Vec::with_capacity(grid.len());
    let mut defect = Vec::with_capacity(grid.len());
    for (i, &x) in grid.nodes().iter().enumerate() {
        let k = field.diagonal(i);
        let m: Mat2 = match formula {
            OmegaFormula::Weighted => {
                let rho = if i == grid.interface() {
                    2.0 * w.alpha() / (1.0 + w.alpha())
                } else {
                    w.rho(x)
                };
                rho * (k * b - b * k)
            }
            OmegaFormula::Unbalanced => w.rho(x) * k * b - b * k,
        };
        p.push(0.5 * (m[(0, 0)] - m[(1, 1)]));
        q.push(0.5 * (m[(0, 1)] + m[(1, 0)]));
        defect.push((m[(0, 0)] + m[(1, 1)]).abs() + (m[(0, 1)] - m[(1, 0)]).abs());
    }
    Ok(OmegaReconstruction {
        potential: Potential::new(grid.clone(), p, q)?,
        asymmetry_defect: defect,
    })
}

/// Per-node diagnostics of an inverse run.
#[derive(Debug, Clone)]
pub struct InverseDiagnostics {
    pub pairing: Pairing,
    pub x: Vec<f64>,
    pub condition: Vec<f64>,
    pub residual: Vec<f64>,
    pub asymmetry_defect: Vec<f64>,
    pub origin_residual: Vec<f64>,
}

impl InverseDiagnostics {
    pub fn max_condition(&self) -> f64 {
        self.condition.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_asymmetry_defect(&self) -> f64 {
        self.asymmetry_defect.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_origin_residual(&self) -> f64 {
        self.origin_residual.iter().copied().fold(0.0, f64::max)
    }
}

/// Output of [`reconstruct_potential`].
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub potential: Potential,
    pub field: KernelField,
    pub diagnostics: InverseDiagnostics,
}

/// Spectral data to Ω̂ on `grid`.
pub fn reconstruct_potential(
    spec: &Spectrum,
    w: &WeightProfile,
    grid: &Grid,
    opts: &InverseOptions,
) -> Result<Reconstruction> {
    let pairing = match opts.pairing {
        PairingChoice::Auto => Pairing::auto(spec),
        PairingChoice::Fixed(p) => p,
    };
    let kb = KernelBuilder::with_pairing(spec, w, pairing)?;
    let field = solve_kernel(&kb, grid, &opts.glm)?;
    let omega = reconstruct_omega(&field, w, opts.formula)?;
    let diagnostics = InverseDiagnostics {
        pairing,
        x: grid.nodes().to_vec(),
        condition: field.rows().iter().map(|r| r.condition).collect(),
        residual: field.rows().iter().map(|r| r.residual).collect(),
        asymmetry_defect: omega.asymmetry_defect,
        origin_residual: (0..grid.len()).map(|i| field.origin_residual(i)).collect(),
    };
    Ok(Reconstruction {
        potential: omega.potential,
        field,
        diagnostics,
    })
}

/// `φ̂(xᵢ, λ) = φ₀(xᵢ, λ) + ∫₀^{xᵢ} K(xᵢ, ξ) φ₀(ξ, λ) ρ(ξ) dξ` at the grid
/// nodes, with `φ₀(x, λ) = (sin λμ(x), −cos λμ(x))`.
pub fn reconstructed_trajectory(field: &KernelField, w: &WeightProfile, lambda: f64) -> Vec<Vec2> {
    let grid = field.grid();
    let free: Vec<Vec2> = grid
        .nodes()
        .iter()
        .map(|&x| mat2::free_column(lambda * w.mu_unchecked(x)))
        .collect();
    (0..grid.len())
        .map(|i| {
            let c = grid.trapezoid_weights(i, w);
            (0..=i).fold(free[i], |acc, k| acc + c[k] * field.value(i, k) * free[k])
        })
        .collect()
}

/// Pointwise `Bφ̂′ + Ω̂φ̂ − λρφ̂`. φ̂′ is the fourth-order five-point
/// difference, taken at nodes with two neighbours on each side within the
/// same uniform piece. Returns `(x, residual)` pairs.
pub fn trajectory_residual(
    field: &KernelField,
    omega: &Potential,
    w: &WeightProfile,
    lambda: f64,
) -> Vec<(f64, Vec2)> {
    let phi = reconstructed_trajectory(field, w, lambda);
    let grid = field.grid();
    let x = grid.nodes();
    let (ia, last) = (grid.interface(), x.len() - 1);
    let b = mat2::symplectic();
    let mut out = Vec::new();
    for i in 2..last.saturating_sub(1) {
        if i.abs_diff(ia) < 2 {
            continue;
        }
        let h = x[i + 1] - x[i];
        let d = (phi[i - 2] - 8.0 * phi[i - 1] + 8.0 * phi[i + 1] - phi[i + 2]) / (12.0 * h);
        let om = omega.omega_matrix(i).expect("node index in range");
        let r = b * d + om * phi[i] - lambda * w.rho(x[i]) * phi[i];
        out.push((x[i], r));
    }
    out
}
