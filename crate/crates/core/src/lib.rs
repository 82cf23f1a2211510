//! Direct and inverse spectral problems for a Dirac system with a piecewise-constant weight.

// `!(x > y)` is used on purpose so that NaN takes the failure branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli_io;
pub mod direct;
mod error;
pub mod glm;
pub mod grid;
pub mod mat2;
pub mod potential;
pub mod roots;
pub mod spectrum;
pub mod verify;
pub mod weight;

pub use error::{Error, Result};
pub use grid::Grid;
pub use potential::{BuiltinPotential, Potential};
pub use spectrum::{SpectralEntry, Spectrum};
pub use weight::{BoundaryParams, WeightProfile};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/weight.md")]
    mod weight {}
    #[doc = include_str!("../../../book/src/direct.md")]
    mod direct {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/kernel.md")]
    mod kernel {}
    #[doc = include_str!("../../../book/src/reconstruction.md")]
    mod reconstruction {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
