//! TOML run configuration.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::direct::{EigenOptions, IntegratorOptions};
use crate::error::{Error, Result};
use crate::glm::{GlmOptions, InverseOptions, Pairing, PairingChoice};
use crate::grid::Grid;
use crate::potential::{BuiltinPotential, Potential};
use crate::verify::RoundTripOptions;
use crate::weight::{BoundaryParams, WeightProfile};

/// Jump point and weight ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSection {
    #[serde(default = "default_a")]
    pub a: f64,
    pub alpha: f64,
}

fn default_a() -> f64 {
    PI / 2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySection {
    pub h1: f64,
    pub h2: f64,
}

/// Where the potential comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PotentialSection {
    #[default]
    Zero,
    Trig {
        amp_p: f64,
        amp_q: f64,
    },
    Bump {
        amp_p: f64,
        amp_q: f64,
        center: f64,
        width: f64,
    },
    /// A potential CSV file, relative to the config file.
    File {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PairingName {
    #[default]
    Auto,
    Reference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericsSection {
    /// Spectral window size N.
    pub n_max: usize,
    /// Cells of the output grid M.
    pub grid: usize,
    /// Cells of the collocation grid J.
    pub colloc: usize,
    pub steps_per_unit: f64,
    pub root_tol: f64,
    pub glm_tol: f64,
    pub pairing: PairingName,
}

impl Default for NumericsSection {
    fn default() -> Self {
        Self {
            n_max: 32,
            grid: 200,
            colloc: 200,
            steps_per_unit: 128.0,
            root_tol: 1e-14,
            glm_tol: 1e-10,
            pairing: PairingName::Auto,
        }
    }
}

/// A full run configuration.
///
/// ```
/// # use dirac_inverse::cli_io::RunConfig;
/// let cfg = RunConfig::from_toml_str(r#"
///     [weight]
///     alpha = 2.0
///     [boundary]
///     h1 = 1.0
///     h2 = 1.0
///     [potential]
///     kind = "trig"
///     amp_p = 0.3
///     amp_q = 0.2
/// "#).unwrap();
/// assert_eq!(cfg.numerics.n_max, 32);
/// assert_eq!(cfg.config_hash().len(), 64);
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub weight: WeightSection,
    pub boundary: BoundarySection,
    #[serde(default)]
    pub potential: PotentialSection,
    #[serde(default)]
    pub numerics: NumericsSection,
    #[serde(skip)]
    base_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; relative potential paths resolve against its
    /// directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut cfg = Self::from_toml_str(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    /// Checks ranges of every field.
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        self.weight_profile()
            .map_err(|e| Error::Config(e.to_string()))?;
        self.boundary_params()
            .map_err(|e| Error::Config(e.to_string()))?;
        let n = &self.numerics;
        if !(1..=512).contains(&n.n_max) {
            return fail(format!("n_max = {} outside [1, 512]", n.n_max));
        }
        if !(8..=20000).contains(&n.grid) {
            return fail(format!("grid = {} outside [8, 20000]", n.grid));
        }
        if !(8..=4000).contains(&n.colloc) {
            return fail(format!("colloc = {} outside [8, 4000]", n.colloc));
        }
        for (name, v) in [
            ("steps_per_unit", n.steps_per_unit),
            ("root_tol", n.root_tol),
            ("glm_tol", n.glm_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return fail(format!("{name} = {v} must be positive"));
            }
        }
        match &self.potential {
            PotentialSection::Trig { amp_p, amp_q }
                if !(amp_p.is_finite() && amp_q.is_finite()) =>
            {
                fail("trig amplitudes must be finite".into())
            }
            PotentialSection::Bump {
                amp_p,
                amp_q,
                center,
                width,
            } if !(amp_p.is_finite()
                && amp_q.is_finite()
                && center.is_finite()
                && *width > 0.0) =>
            {
                fail("bump needs finite amplitudes and centre and a positive width".into())
            }
            _ => Ok(()),
        }
    }

    pub fn weight_profile(&self) -> Result<WeightProfile> {
        WeightProfile::new(self.weight.a, self.weight.alpha)
    }

    pub fn boundary_params(&self) -> Result<BoundaryParams> {
        BoundaryParams::new(self.boundary.h1, self.boundary.h2)
    }

    /// Output grid with `numerics.grid` cells.
    pub fn output_grid(&self) -> Result<Grid> {
        Grid::uniform(&self.weight_profile()?, self.numerics.grid)
    }

    /// The potential, sampled on the output grid or read from its file.
    pub fn potential(&self) -> Result<Potential> {
        let w = self.weight_profile()?;
        let builtin = match &self.potential {
            PotentialSection::Zero => BuiltinPotential::Zero,
            PotentialSection::Trig { amp_p, amp_q } => BuiltinPotential::Trig {
                amp_p: *amp_p,
                amp_q: *amp_q,
            },
            PotentialSection::Bump {
                amp_p,
                amp_q,
                center,
                width,
            } => BuiltinPotential::Bump {
                amp_p: *amp_p,
                amp_q: *amp_q,
                center: *center,
                width: *width,
            },
            PotentialSection::File { path } => {
                let full = match &self.base_dir {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path.clone(),
                };
                let text = std::fs::read_to_string(&full).map_err(|source| Error::Io {
                    path: full.display().to_string(),
                    source,
                })?;
                return super::files::read_potential(&text, &w);
            }
        };
        builtin.sample(&self.output_grid()?)
    }

    pub fn eigen_options(&self) -> EigenOptions {
        EigenOptions {
            integrator: IntegratorOptions {
                steps_per_unit: self.numerics.steps_per_unit,
                ..Default::default()
            },
            root_tol: self.numerics.root_tol,
            ..Default::default()
        }
    }

    pub fn inverse_options(&self) -> InverseOptions {
        InverseOptions {
            glm: GlmOptions {
                tol: self.numerics.glm_tol,
                ..Default::default()
            },
            pairing: match self.numerics.pairing {
                PairingName::Auto => PairingChoice::Auto,
                PairingName::Reference => PairingChoice::Fixed(Pairing::Reference),
            },
            ..Default::default()
        }
    }

    pub fn roundtrip_options(&self) -> RoundTripOptions {
        RoundTripOptions {
            eigen: self.eigen_options(),
            inverse: self.inverse_options(),
        }
    }

    /// Canonical TOML form, used for hashing.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical form, in hex. A potential file contributes
    /// its bytes.
    pub fn config_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.canonical().as_bytes());
        if let PotentialSection::File { path } = &self.potential {
            let full = match &self.base_dir {
                Some(dir) if path.is_relative() => dir.join(path),
                _ => path.clone(),
            };
            if let Ok(bytes) = std::fs::read(full) {
                hasher.update(&bytes);
            }
        }
        format!("{:x}", hasher.finalize())
    }
}
