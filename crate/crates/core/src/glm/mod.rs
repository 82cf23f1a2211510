//! The inverse problem: kernel equation and potential recovery.

mod kernel;
mod reconstruct;
mod system;

pub use kernel::{AProfile, KernelBuilder, KernelTerm, Pairing};
pub use reconstruct::{
    reconstruct_omega, reconstruct_potential, reconstructed_trajectory, trajectory_residual,
    InverseDiagnostics, InverseOptions, OmegaFormula, OmegaReconstruction, PairingChoice,
    Reconstruction,
};
pub use system::{
    assemble_glm_system, solve_kernel, GlmOptions, GlmSolution, GlmSystem, KernelField, KernelRow,
};
