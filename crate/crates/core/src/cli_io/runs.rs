//! The four CLI subcommands as library functions.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::RunConfig;
use super::files;
use crate::direct::{product_char_function, DirectSolver, EigenRecord};
use crate::error::{Error, Result};
use crate::glm::reconstruct_potential;
use crate::grid::Grid;
use crate::spectrum::Spectrum;
use crate::verify::{
    boundary_relation_residuals, parseval_test_function, roundtrip_report, ExpansionBasis,
    ParsevalMode, RoundTripReport,
};

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(path)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes `spectrum.txt` and `direct_diagnostics.csv`.
pub fn run_direct(cfg: &RunConfig, out: &Path) -> Result<Vec<EigenRecord>> {
    let hash = cfg.config_hash();
    let (w, bc) = (cfg.weight_profile()?, cfg.boundary_params()?);
    let pot = cfg.potential().map_err(|e| e.at_stage("config"))?;
    let solve = || -> Result<(Vec<EigenRecord>, Spectrum)> {
        let solver = DirectSolver::new(&pot, &w, &bc, cfg.numerics.n_max, &cfg.eigen_options())?;
        let records = solver.eigen_records()?;
        let entries = records
            .iter()
            .map(|r| crate::spectrum::SpectralEntry {
                n: r.n,
                lambda: r.lambda,
                alpha: r.alpha,
            })
            .collect();
        Ok((
            records,
            Spectrum::new(cfg.numerics.n_max, w.mu_pi(), entries)?,
        ))
    };
    let (records, spec) = solve().map_err(|e| e.at_stage("direct"))?;
    let io = |r: Result<PathBuf>| r.map_err(|e| e.at_stage("io"));
    io(write(
        out,
        "spectrum.txt",
        &files::write_spectrum(&spec, &w, &bc, &hash),
    ))?;
    io(write(
        out,
        "direct_diagnostics.csv",
        &files::write_direct_diagnostics(&records, &hash),
    ))?;
    Ok(records)
}

fn load_spectrum(cfg: &RunConfig, path: &Path) -> Result<Spectrum> {
    let (head, spec) = files::read_spectrum(&read(path)?)?;
    let w = cfg.weight_profile()?;
    if (head.a - w.a()).abs() > 1e-12 || (head.alpha - w.alpha()).abs() > 1e-12 * w.alpha() {
        return Err(Error::Config(format!(
            "spectrum file weight (a = {}, alpha = {}) differs from the config",
            head.a, head.alpha
        )));
    }
    Ok(spec)
}

/// Reads a spectrum file and writes `potential.csv` and
/// `inverse_diagnostics.csv`.
pub fn run_inverse(
    cfg: &RunConfig,
    spectrum: &Path,
    out: &Path,
) -> Result<crate::potential::Potential> {
    let hash = cfg.config_hash();
    let spec = load_spectrum(cfg, spectrum).map_err(|e| e.at_stage("config"))?;
    let w = cfg.weight_profile()?;
    let rec = Grid::uniform(&w, cfg.numerics.colloc)
        .and_then(|g| reconstruct_potential(&spec, &w, &g, &cfg.inverse_options()))
        .map_err(|e| e.at_stage("inverse"))?;
    let pot = rec.potential.resample(&cfg.output_grid()?);
    let io = |r: Result<PathBuf>| r.map_err(|e| e.at_stage("io"));
    io(write(
        out,
        "potential.csv",
        &files::write_potential(&pot, &hash),
    ))?;
    io(write(
        out,
        "inverse_diagnostics.csv",
        &files::write_inverse_diagnostics(&rec.diagnostics, &hash),
    ))?;
    Ok(pot)
}

/// Runs the round trip on the configured potential and writes `report.txt`,
/// `spectrum.txt`, `potential.csv` and `inverse_diagnostics.csv`.
pub fn run_roundtrip(cfg: &RunConfig, out: &Path) -> Result<RoundTripReport> {
    let hash = cfg.config_hash();
    let (w, bc) = (cfg.weight_profile()?, cfg.boundary_params()?);
    let pot = cfg.potential().map_err(|e| e.at_stage("config"))?;
    let rt = roundtrip_report(
        &pot,
        &w,
        &bc,
        cfg.numerics.n_max,
        cfg.numerics.colloc,
        &cfg.roundtrip_options(),
    )?;
    let io = |r: Result<PathBuf>| r.map_err(|e| e.at_stage("io"));
    io(write(
        out,
        "report.txt",
        &format!("config_hash = {hash}\n{}", rt.report.to_text()),
    ))?;
    io(write(
        out,
        "spectrum.txt",
        &files::write_spectrum(&rt.spectrum, &w, &bc, &hash),
    ))?;
    io(write(
        out,
        "potential.csv",
        &files::write_potential(&rt.reconstructed, &hash),
    ))?;
    io(write(
        out,
        "inverse_diagnostics.csv",
        &files::write_inverse_diagnostics(&rt.inverse.diagnostics, &hash),
    ))?;
    Ok(rt.report)
}

/// One line of a verify run.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    /// `None` for diagnostics that never fail.
    pub tol: Option<f64>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.tol.is_none_or(|t| self.value <= t)
    }

    pub fn line(&self) -> String {
        match self.tol {
            Some(t) => {
                let tag = if self.passed() { "PASS" } else { "FAIL" };
                format!(
                    "{tag} {} residual={:.6e} tol={:.1e}",
                    self.name, self.value, t
                )
            }
            None => format!("INFO {} value={:.6e}", self.name, self.value),
        }
    }
}

/// Checks a spectrum file against the configured potential and writes
/// `verify.txt`.
pub fn run_verify(cfg: &RunConfig, spectrum: &Path, out: &Path) -> Result<Vec<Check>> {
    let hash = cfg.config_hash();
    let spec = load_spectrum(cfg, spectrum).map_err(|e| e.at_stage("config"))?;
    let (w, bc) = (cfg.weight_profile()?, cfg.boundary_params()?);
    let pot = cfg.potential().map_err(|e| e.at_stage("config"))?;
    let checks = || -> Result<Vec<Check>> {
        let solver = DirectSolver::new(&pot, &w, &bc, spec.n_max(), &cfg.eigen_options())?;
        let records: Vec<EigenRecord> = spec
            .entries()
            .par_iter()
            .map(|e| solver.record(e.n, e.lambda))
            .collect::<Result<_>>()?;
        let max = |f: &dyn Fn(&EigenRecord) -> f64| records.iter().map(f).fold(0.0, f64::max);
        let alpha_dev = spec
            .entries()
            .iter()
            .zip(&records)
            .map(|(e, r)| (e.alpha - r.alpha).abs() / r.alpha)
            .fold(0.0, f64::max);
        let relation =
            boundary_relation_residuals(&spec, &pot, &w, &bc, &cfg.eigen_options().integrator)?
                .iter()
                .zip(spec.entries())
                .map(|(r, e)| r / (1.0 + e.lambda.abs()))
                .fold(0.0, f64::max);
        let basis = ExpansionBasis::new(&pot, &w, &bc, &spec, &cfg.eigen_options().integrator)?;
        let parseval = basis.parseval_residual(
            &basis.sample(parseval_test_function),
            ParsevalMode::Weighted,
        )?;
        let product = [0.37, -0.81, 1.93]
            .iter()
            .map(|&l| {
                let d = solver.char_function(l)?;
                Ok((product_char_function(&spec, l) - d).abs() / d.abs().max(1.0))
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok(vec![
            Check {
                name: "char_function_at_eigenvalues",
                value: max(&|r| r.delta_residual / (1.0 + r.lambda.abs())),
                tol: Some(1e-10),
            },
            Check {
                name: "normalizing_numbers",
                value: alpha_dev,
                tol: Some(1e-8),
            },
            Check {
                name: "ddelta_equals_beta_alpha",
                value: max(&|r| r.identity_residual),
                tol: Some(1e-4),
            },
            Check {
                name: "eigenfunction_proportionality",
                value: max(&|r| r.proportionality_defect),
                tol: Some(1e-6),
            },
            Check {
                name: "wronskian_drift",
                value: max(&|r| r.wronskian_drift),
                tol: Some(1e-6),
            },
            Check {
                name: "boundary_relation",
                value: relation,
                tol: Some(1e-8),
            },
            Check {
                name: "parseval",
                value: parseval,
                tol: Some(1e-2),
            },
            Check {
                name: "product_formula_deviation",
                value: product,
                tol: None,
            },
        ])
    };
    let checks = checks().map_err(|e| e.at_stage("verify"))?;
    let mut text = format!("# config_hash = {hash}\n");
    for c in &checks {
        text.push_str(&c.line());
        text.push('\n');
    }
    write(out, "verify.txt", &text).map_err(|e| e.at_stage("io"))?;
    Ok(checks)
}
