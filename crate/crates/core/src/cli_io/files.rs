//! Text formats for spectra, potentials and diagnostics.

use std::fmt::Write as _;

use crate::direct::EigenRecord;
use crate::error::{Error, Result};
use crate::glm::InverseDiagnostics;
use crate::grid::Grid;
use crate::potential::Potential;
use crate::spectrum::{SpectralEntry, Spectrum};
use crate::weight::{BoundaryParams, WeightProfile};

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Header of a spectrum file.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumHeader {
    pub mu_pi: f64,
    pub a: f64,
    pub alpha: f64,
    pub h1: f64,
    pub h2: f64,
    pub n_max: usize,
    pub config_hash: Option<String>,
}

/// Spectrum file text: `key = value` header lines, then `n,lambda,alpha` rows.
pub fn write_spectrum(
    spec: &Spectrum,
    w: &WeightProfile,
    bc: &BoundaryParams,
    config_hash: &str,
) -> String {
    let mut out = String::from("# dirac-inverse spectrum\n");
    for (k, v) in [
        ("config_hash", config_hash.to_string()),
        ("mu_pi", num(spec.mu_pi())),
        ("a", num(w.a())),
        ("alpha", num(w.alpha())),
        ("h1", num(bc.h1)),
        ("h2", num(bc.h2)),
        ("N", spec.n_max().to_string()),
    ] {
        let _ = writeln!(out, "{k} = {v}");
    }
    out.push_str("n,lambda,alpha\n");
    for e in spec.entries() {
        let _ = writeln!(out, "{},{},{}", e.n, num(e.lambda), num(e.alpha));
    }
    out
}

/// Parses [`write_spectrum`] output and validates the rows.
pub fn read_spectrum(text: &str) -> Result<(SpectrumHeader, Spectrum)> {
    let mut header = std::collections::HashMap::new();
    let mut rows = Vec::new();
    let mut in_rows = false;
    let mut row_lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !in_rows {
            if line.replace(' ', "") == "n,lambda,alpha" {
                in_rows = true;
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: lineno,
                reason: "expected key = value".into(),
            })?;
            header.insert(k.trim().to_string(), (lineno, v.trim().to_string()));
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 3 {
            return Err(Error::Parse {
                line: lineno,
                reason: format!("expected 3 columns, found {}", cols.len()),
            });
        }
        let bad = |what: &str| Error::Parse {
            line: lineno,
            reason: format!("bad {what}"),
        };
        rows.push(SpectralEntry {
            n: cols[0].parse().map_err(|_| bad("label"))?,
            lambda: cols[1].parse().map_err(|_| bad("lambda"))?,
            alpha: cols[2].parse().map_err(|_| bad("alpha"))?,
        });
        row_lines.push(lineno);
    }
    if !in_rows {
        return Err(Error::Parse {
            line: 0,
            reason: "missing n,lambda,alpha header".into(),
        });
    }
    let get = |k: &str| -> Result<&(usize, String)> {
        header.get(k).ok_or_else(|| Error::Parse {
            line: 0,
            reason: format!("missing header key {k}"),
        })
    };
    let real = |k: &str| -> Result<f64> {
        let (line, v) = get(k)?;
        v.parse().map_err(|_| Error::Parse {
            line: *line,
            reason: format!("bad number for {k}"),
        })
    };
    let n_line = get("N")?.0;
    let head = SpectrumHeader {
        mu_pi: real("mu_pi")?,
        a: real("a")?,
        alpha: real("alpha")?,
        h1: real("h1")?,
        h2: real("h2")?,
        n_max: get("N")?.1.parse().map_err(|_| Error::Parse {
            line: n_line,
            reason: "bad N".into(),
        })?,
        config_hash: header.get("config_hash").map(|(_, v)| v.clone()),
    };
    let w = WeightProfile::new(head.a, head.alpha)?;
    if (w.mu_pi() - head.mu_pi).abs() > 1e-12 * w.mu_pi() {
        return Err(Error::Parse {
            line: get("mu_pi")?.0,
            reason: format!(
                "mu_pi = {} inconsistent with a and alpha ({})",
                head.mu_pi,
                w.mu_pi()
            ),
        });
    }
    let spec = Spectrum::new(head.n_max, head.mu_pi, rows).map_err(|e| match e {
        Error::InvalidSpectrum {
            row: Some(r),
            reason,
        } => Error::InvalidSpectrum {
            row: Some(r),
            reason: format!("{reason} (line {})", row_lines[r]),
        },
        e => e,
    })?;
    Ok((head, spec))
}

/// Potential CSV `x,p,q` with the config hash as a comment.
pub fn write_potential(pot: &Potential, config_hash: &str) -> String {
    let mut out = format!("# dirac-inverse potential\n# config_hash = {config_hash}\nx,p,q\n");
    for ((x, p), q) in pot.grid().nodes().iter().zip(pot.p()).zip(pot.q()) {
        let _ = writeln!(out, "{},{},{}", num(*x), num(*p), num(*q));
    }
    out
}

/// Parses a potential CSV. The nodes must contain the jump point.
pub fn read_potential(text: &str, w: &WeightProfile) -> Result<Potential> {
    let (mut x, mut p, mut q) = (Vec::new(), Vec::new(), Vec::new());
    let mut seen_header = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_header {
            if line.replace(' ', "") != "x,p,q" {
                return Err(Error::Parse {
                    line: i + 1,
                    reason: "expected header x,p,q".into(),
                });
            }
            seen_header = true;
            continue;
        }
        let cols: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse {
                line: i + 1,
                reason: "bad number".into(),
            })?;
        if cols.len() != 3 {
            return Err(Error::Parse {
                line: i + 1,
                reason: "expected 3 columns".into(),
            });
        }
        x.push(cols[0]);
        p.push(cols[1]);
        q.push(cols[2]);
    }
    Potential::new(Grid::new(x, w)?, p, q)
}

/// Per-eigenvalue diagnostics of a direct run.
pub fn write_direct_diagnostics(records: &[EigenRecord], config_hash: &str) -> String {
    let mut out = format!(
        "# config_hash = {config_hash}\nn,lambda,alpha,beta,ddelta,delta_residual,identity_residual,wronskian_drift\n"
    );
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.n,
            num(r.lambda),
            num(r.alpha),
            num(r.beta),
            num(r.ddelta),
            num(r.delta_residual),
            num(r.identity_residual),
            num(r.wronskian_drift)
        );
    }
    out
}

/// Per-node diagnostics of an inverse run.
pub fn write_inverse_diagnostics(d: &InverseDiagnostics, config_hash: &str) -> String {
    let mut out = format!("# config_hash = {config_hash}\n");
    match d.pairing {
        crate::glm::Pairing::Reference => out.push_str("# pairing = reference\n"),
        crate::glm::Pairing::Matched { h1, h2 } => {
            let _ = writeln!(out, "# pairing = matched h1 = {} h2 = {}", num(h1), num(h2));
        }
    }
    out.push_str("x,condition,solve_residual,asym_defect,origin_residual\n");
    for i in 0..d.x.len() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            num(d.x[i]),
            num(d.condition[i]),
            num(d.residual[i]),
            num(d.asymmetry_defect[i]),
            num(d.origin_residual[i])
        );
    }
    out
}
