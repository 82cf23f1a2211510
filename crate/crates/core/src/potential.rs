//! Sampled potentials `Ω = [[p, q], [q, -p]]`.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::mat2::{self, Mat2};
use crate::weight::WeightProfile;

/// Samples of `p` and `q` on a grid. Values between nodes are linear.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    grid: Grid,
    p: Vec<f64>,
    q: Vec<f64>,
}

impl Potential {
    pub fn new(grid: Grid, p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        if p.len() != grid.len() || q.len() != grid.len() {
            return Err(Error::InvalidPotential(format!(
                "{} nodes but {} p-samples and {} q-samples",
                grid.len(),
                p.len(),
                q.len()
            )));
        }
        if let Some(i) = p
            .iter()
            .zip(&q)
            .position(|(a, b)| !a.is_finite() || !b.is_finite())
        {
            return Err(Error::InvalidPotential(format!(
                "non-finite sample at node {i}"
            )));
        }
        Ok(Self { grid, p, q })
    }

    /// Samples `f(x) = (p, q)` at the nodes.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> (f64, f64)) -> Result<Self> {
        let (p, q) = grid.nodes().iter().map(|&x| f(x)).unzip();
        Self::new(grid, p, q)
    }

    pub fn zero(grid: Grid) -> Self {
        let n = grid.len();
        Self {
            grid,
            p: vec![0.0; n],
            q: vec![0.0; n],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    /// Ω at node `i`.
    pub fn omega_matrix(&self, i: usize) -> Result<Mat2> {
        if i >= self.grid.len() {
            return Err(Error::Domain {
                what: "node index",
                value: i as f64,
            });
        }
        Ok(mat2::omega(self.p[i], self.q[i]))
    }

    /// `(p, q)` at `x`, linear between nodes. `x` is clamped to `[0, π]`.
    pub fn at(&self, x: f64) -> (f64, f64) {
        let nodes = self.grid.nodes();
        let k = nodes.partition_point(|&t| t <= x).clamp(1, nodes.len() - 1) - 1;
        let s = ((x - nodes[k]) / (nodes[k + 1] - nodes[k])).clamp(0.0, 1.0);
        (
            self.p[k] + s * (self.p[k + 1] - self.p[k]),
            self.q[k] + s * (self.q[k + 1] - self.q[k]),
        )
    }

    /// Linear resampling onto another grid.
    pub fn resample(&self, grid: &Grid) -> Self {
        let (p, q) = grid.nodes().iter().map(|&x| self.at(x)).unzip();
        Self {
            grid: grid.clone(),
            p,
            q,
        }
    }

    /// Checks that the grid matches the weight's jump point.
    pub(crate) fn check_weight(&self, w: &WeightProfile) -> Result<()> {
        let a = self.grid.nodes()[self.grid.interface()];
        if (a - w.a()).abs() > 1e-12 {
            return Err(Error::InvalidGrid(format!(
                "grid jump node {a} differs from a = {}",
                w.a()
            )));
        }
        Ok(())
    }

    /// Relative `L²` distances of `p` and `q` to `reference`, on this grid with
    /// plain `dx`. A vanishing reference component gives the absolute norm.
    pub fn relative_l2_error(&self, reference: &Potential) -> (f64, f64) {
        let nodes = self.grid.nodes();
        let (mut dp, mut dq, mut np, mut nq) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for (i, &x) in nodes.iter().enumerate() {
            let (rp, rq) = reference.at(x);
            dp.push((self.p[i] - rp).powi(2));
            dq.push((self.q[i] - rq).powi(2));
            np.push(rp * rp);
            nq.push(rq * rq);
        }
        let rel = |d: &[f64], n: &[f64]| {
            let num = trapezoid(nodes, d).sqrt();
            let den = trapezoid(nodes, n).sqrt();
            if den > 0.0 {
                num / den
            } else {
                num
            }
        };
        (rel(&dp, &np), rel(&dq, &nq))
    }
}

fn trapezoid(x: &[f64], f: &[f64]) -> f64 {
    x.windows(2)
        .zip(f.windows(2))
        .map(|(x, f)| 0.5 * (x[1] - x[0]) * (f[0] + f[1]))
        .sum()
}

/// Analytic test potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BuiltinPotential {
    Zero,
    /// `p = amp_p sin x`, `q = amp_q cos x`.
    Trig {
        amp_p: f64,
        amp_q: f64,
    },
    /// Smooth compact bump of unit height centred at `center`.
    Bump {
        amp_p: f64,
        amp_q: f64,
        center: f64,
        width: f64,
    },
}

impl BuiltinPotential {
    pub fn eval(&self, x: f64) -> (f64, f64) {
        match *self {
            BuiltinPotential::Zero => (0.0, 0.0),
            BuiltinPotential::Trig { amp_p, amp_q } => (amp_p * x.sin(), amp_q * x.cos()),
            BuiltinPotential::Bump {
                amp_p,
                amp_q,
                center,
                width,
            } => {
                let r = (x - center) / width;
                let b = if r.abs() < 1.0 {
                    (1.0 - 1.0 / (1.0 - r * r)).exp()
                } else {
                    0.0
                };
                (amp_p * b, amp_q * b)
            }
        }
    }

    pub fn sample(&self, grid: &Grid) -> Result<Potential> {
        Potential::from_fn(grid.clone(), |x| self.eval(x))
    }
}
