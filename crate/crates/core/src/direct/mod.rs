//! The direct problem: shooting, eigenvalues and normalizing numbers.

mod eigen;
pub mod free;
mod ode;
mod product;

pub use eigen::{
    beta_and_ddelta, char_function, find_eigenvalues, normalizing_number, DirectSolver,
    EigenOptions, EigenRecord,
};
pub use ode::{IntegratorOptions, OdeMesh, TrajectoryTable};
pub use product::product_char_function;

use crate::error::Result;
use crate::potential::Potential;
use crate::weight::{BoundaryParams, WeightProfile};

/// φ(·, λ) on a mesh fitted to `λ`.
pub fn integrate_phi(
    pot: &Potential,
    w: &WeightProfile,
    lambda: f64,
    opts: &IntegratorOptions,
) -> Result<TrajectoryTable> {
    OdeMesh::for_lambda(pot, w, opts, lambda)?.phi(lambda)
}

/// ψ(·, λ) on a mesh fitted to `λ`.
pub fn integrate_psi(
    pot: &Potential,
    w: &WeightProfile,
    bc: &BoundaryParams,
    lambda: f64,
    opts: &IntegratorOptions,
) -> Result<TrajectoryTable> {
    OdeMesh::for_lambda(pot, w, opts, lambda)?.psi(bc, lambda)
}
