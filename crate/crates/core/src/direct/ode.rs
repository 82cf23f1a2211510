//! Fixed-step RK4 shooting on a mesh split at the jump point.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mat2::Vec2;
use crate::potential::Potential;
use crate::weight::{BoundaryParams, WeightProfile};

/// Step density of the shooting mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    /// Steps per unit length at λ = 0. The count grows with `1 + |λ|ρ`.
    pub steps_per_unit: f64,
    /// Lower bound for the steps on each side.
    pub min_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            steps_per_unit: 128.0,
            min_steps: 16,
        }
    }
}

/// RK4 mesh with the potential sampled at every stage point.
///
/// Each side of the jump point has its own uniform, even step count, so
/// Simpson's rule applies piecewise.
#[derive(Debug, Clone)]
pub struct OdeMesh {
    x: Arc<[f64]>,
    interface: usize,
    alpha: f64,
    at_nodes: Vec<(f64, f64)>,
    at_mids: Vec<(f64, f64)>,
}

impl OdeMesh {
    /// Mesh with the given step counts, rounded up to even.
    pub fn new(
        pot: &Potential,
        w: &WeightProfile,
        steps_left: usize,
        steps_right: usize,
    ) -> Result<Self> {
        pot.check_weight(w)?;
        let a = w.a();
        let nl = steps_left.max(2).next_multiple_of(2);
        let nr = steps_right.max(2).next_multiple_of(2);
        for (steps, length) in [(nl, a), (nr, PI - a)] {
            if length / steps as f64 <= 64.0 * f64::EPSILON * PI {
                return Err(Error::StepUnderflow { steps, length });
            }
        }
        let mut x = Vec::with_capacity(nl + nr + 1);
        x.extend((0..nl).map(|k| a * k as f64 / nl as f64));
        x.push(a);
        x.extend((1..nr).map(|k| a + (PI - a) * k as f64 / nr as f64));
        x.push(PI);
        let at_nodes = x.iter().map(|&t| pot.at(t)).collect();
        let at_mids = x.windows(2).map(|p| pot.at(0.5 * (p[0] + p[1]))).collect();
        Ok(Self {
            x: x.into(),
            interface: nl,
            alpha: w.alpha(),
            at_nodes,
            at_mids,
        })
    }

    /// Mesh resolving oscillations up to `|λ| ≤ lambda_bound`.
    pub fn for_lambda(
        pot: &Potential,
        w: &WeightProfile,
        opts: &IntegratorOptions,
        lambda_bound: f64,
    ) -> Result<Self> {
        let bound = lambda_bound.abs();
        if !bound.is_finite() {
            return Err(Error::Domain {
                what: "lambda",
                value: lambda_bound,
            });
        }
        let count = |length: f64, rho: f64| {
            ((length * opts.steps_per_unit * (1.0 + bound * rho)).ceil() as usize)
                .max(opts.min_steps)
        };
        Self::new(pot, w, count(w.a(), 1.0), count(PI - w.a(), w.alpha()))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.x
    }

    pub(crate) fn shared_nodes(&self) -> Arc<[f64]> {
        Arc::clone(&self.x)
    }

    /// Index of the jump point.
    pub fn interface(&self) -> usize {
        self.interface
    }

    pub fn steps(&self) -> usize {
        self.x.len() - 1
    }

    fn rho_of_step(&self, k: usize) -> f64 {
        if k < self.interface {
            1.0
        } else {
            self.alpha
        }
    }

    /// Runs RK4 from `y0`, visiting the state at every node. Forward sweeps
    /// start at 0, backward sweeps at π. Returns the final state.
    fn sweep(
        &self,
        lambda: f64,
        y0: [f64; 2],
        forward: bool,
        mut visit: impl FnMut(usize, [f64; 2]),
    ) -> Result<[f64; 2]> {
        let rhs = |pq: (f64, f64), lr: f64, y: [f64; 2]| {
            let (p, q) = pq;
            [q * y[0] - (p + lr) * y[1], (lr - p) * y[0] - q * y[1]]
        };
        let n = self.steps();
        let mut y = y0;
        let start = if forward { 0 } else { n };
        visit(start, y);
        for s in 0..n {
            let k = if forward { s } else { n - 1 - s };
            let (from, to) = if forward { (k, k + 1) } else { (k + 1, k) };
            let h = self.x[to] - self.x[from];
            let lr = lambda * self.rho_of_step(k);
            let mid = self.at_mids[k];
            let k1 = rhs(self.at_nodes[from], lr, y);
            let k2 = rhs(mid, lr, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
            let k3 = rhs(mid, lr, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
            let k4 = rhs(self.at_nodes[to], lr, [y[0] + h * k3[0], y[1] + h * k3[1]]);
            for c in 0..2 {
                y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
            }
            if !(y[0].is_finite() && y[1].is_finite()) {
                return Err(Error::NonFinite { x: self.x[to] });
            }
            visit(to, y);
        }
        Ok(y)
    }

    fn table(&self, lambda: f64, y0: [f64; 2], forward: bool) -> Result<TrajectoryTable> {
        let mut values = vec![Vec2::zeros(); self.x.len()];
        self.sweep(lambda, y0, forward, |i, y| {
            values[i] = Vec2::new(y[0], y[1])
        })?;
        Ok(TrajectoryTable {
            lambda,
            x: self.shared_nodes(),
            interface: self.interface,
            alpha: self.alpha,
            values,
        })
    }

    /// φ(·, λ) with φ(0) = (0, −1).
    pub fn phi(&self, lambda: f64) -> Result<TrajectoryTable> {
        self.table(lambda, [0.0, -1.0], true)
    }

    /// ψ(·, λ) with ψ(π) = (h2, −λ − h1).
    pub fn psi(&self, bc: &BoundaryParams, lambda: f64) -> Result<TrajectoryTable> {
        self.table(lambda, [bc.h2, -lambda - bc.h1], false)
    }

    /// φ(π, λ) without storing the trajectory.
    pub fn phi_at_pi(&self, lambda: f64) -> Result<Vec2> {
        let y = self.sweep(lambda, [0.0, -1.0], true, |_, _| {})?;
        Ok(Vec2::new(y[0], y[1]))
    }

    /// ψ(0, λ) without storing the trajectory.
    pub fn psi_at_zero(&self, bc: &BoundaryParams, lambda: f64) -> Result<Vec2> {
        let y = self.sweep(lambda, [bc.h2, -lambda - bc.h1], false, |_, _| {})?;
        Ok(Vec2::new(y[0], y[1]))
    }

    /// Δ(λ) = (λ + h1)φ1(π) + h2 φ2(π).
    pub fn char_function(&self, bc: &BoundaryParams, lambda: f64) -> Result<f64> {
        let end = self.phi_at_pi(lambda)?;
        Ok((lambda + bc.h1) * end[0] + bc.h2 * end[1])
    }

    /// `∫₀^π f ρ dx` by Simpson's rule on each side.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        simpson(&self.x, f, self.interface, self.alpha)
    }
}

pub(crate) fn simpson(x: &[f64], f: &[f64], interface: usize, alpha: f64) -> f64 {
    let side = |lo: usize, hi: usize| {
        let h = (x[hi] - x[lo]) / (hi - lo) as f64;
        let inner: f64 = (lo + 1..hi)
            .map(|k| {
                if (k - lo) % 2 == 1 {
                    4.0 * f[k]
                } else {
                    2.0 * f[k]
                }
            })
            .sum();
        h / 3.0 * (f[lo] + inner + f[hi])
    };
    side(0, interface) + alpha * side(interface, x.len() - 1)
}

/// Solution samples at the mesh nodes for one λ.
#[derive(Debug, Clone)]
pub struct TrajectoryTable {
    lambda: f64,
    x: Arc<[f64]>,
    interface: usize,
    alpha: f64,
    values: Vec<Vec2>,
}

impl TrajectoryTable {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn nodes(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[Vec2] {
        &self.values
    }

    pub fn start(&self) -> Vec2 {
        self.values[0]
    }

    pub fn end(&self) -> Vec2 {
        self.values[self.values.len() - 1]
    }

    /// `∫₀^π (y1² + y2²) ρ dx`.
    pub fn weighted_norm_sq(&self) -> f64 {
        let f: Vec<f64> = self.values.iter().map(|v| v.norm_squared()).collect();
        simpson(&self.x, &f, self.interface, self.alpha)
    }

    /// `∫₀^π (y · g) ρ dx` for samples `g` on the same nodes.
    pub fn weighted_inner(&self, g: &[Vec2]) -> f64 {
        let f: Vec<f64> = self.values.iter().zip(g).map(|(a, b)| a.dot(b)).collect();
        simpson(&self.x, &f, self.interface, self.alpha)
    }

    /// `φ2ψ1 − φ1ψ2` at every node, with `self` as φ.
    pub fn wronskian(&self, psi: &TrajectoryTable) -> Vec<f64> {
        self.values
            .iter()
            .zip(&psi.values)
            .map(|(f, g)| f[1] * g[0] - f[0] * g[1])
            .collect()
    }
}
