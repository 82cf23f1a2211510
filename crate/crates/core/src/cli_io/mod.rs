//! Configuration, file formats and the subcommand drivers.

mod config;
pub mod files;
mod runs;

pub use config::{
    BoundarySection, NumericsSection, PairingName, PotentialSection, RunConfig, WeightSection,
};
pub use runs::{run_direct, run_inverse, run_roundtrip, run_verify, Check};
