//! Sample grids on `[0, π]` that contain the jump point.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::weight::WeightProfile;

const SNAP: f64 = 1e-12;

/// Strictly increasing nodes from 0 to π with the jump point as a node.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    nodes: Vec<f64>,
    interface: usize,
}

impl Grid {
    /// Validates user nodes. Endpoints and the jump point are snapped when
    /// they are within 1e-12.
    pub fn new(mut nodes: Vec<f64>, w: &WeightProfile) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::InvalidGrid(format!(
                "{} nodes, need at least 3",
                nodes.len()
            )));
        }
        if let Some(i) = nodes.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidGrid(format!("node {i} is not finite")));
        }
        let last = nodes.len() - 1;
        if nodes[0].abs() > SNAP || (nodes[last] - PI).abs() > SNAP {
            return Err(Error::InvalidGrid(
                "grid must start at 0 and end at pi".into(),
            ));
        }
        nodes[0] = 0.0;
        nodes[last] = PI;
        if let Some(i) = nodes.windows(2).position(|p| p[1] <= p[0]) {
            return Err(Error::InvalidGrid(format!(
                "nodes not increasing at index {}",
                i + 1
            )));
        }
        let interface = nodes
            .iter()
            .position(|&x| (x - w.a()).abs() <= SNAP)
            .ok_or_else(|| Error::InvalidGrid(format!("jump point {} is not a node", w.a())))?;
        nodes[interface] = w.a();
        Ok(Self { nodes, interface })
    }

    /// Grid with `cells` intervals, uniform in travel time on each side of the
    /// jump point. Cells are shared between the sides in proportion to their
    /// travel time, with at least one per side.
    pub fn uniform(w: &WeightProfile, cells: usize) -> Result<Self> {
        if cells < 2 {
            return Err(Error::InvalidGrid(format!(
                "{cells} cells, need at least 2"
            )));
        }
        let left = ((cells as f64 * w.a() / w.mu_pi()).round() as usize).clamp(1, cells - 1);
        Self::split(w, left, cells - left)
    }

    /// Uniform cells on each side: `left` on `[0, a]`, `right` on `[a, π]`.
    pub fn split(w: &WeightProfile, left: usize, right: usize) -> Result<Self> {
        if left == 0 || right == 0 {
            return Err(Error::InvalidGrid(
                "each side needs at least one cell".into(),
            ));
        }
        let a = w.a();
        let mut nodes = Vec::with_capacity(left + right + 1);
        nodes.extend((0..left).map(|i| a * i as f64 / left as f64));
        nodes.push(a);
        nodes.extend((1..right).map(|i| a + (PI - a) * i as f64 / right as f64));
        nodes.push(PI);
        Ok(Self {
            nodes,
            interface: left,
        })
    }

    /// Halves every cell.
    pub fn refine(&self) -> Self {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len() - 1);
        for p in self.nodes.windows(2) {
            nodes.push(p[0]);
            nodes.push(0.5 * (p[0] + p[1]));
        }
        nodes.push(PI);
        Self {
            nodes,
            interface: 2 * self.interface,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn cells(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Index of the jump point.
    pub fn interface(&self) -> usize {
        self.interface
    }

    /// Trapezoid weights, including ρ, for `∫₀^{x_i}` over the first `i + 1` nodes.
    pub fn trapezoid_weights(&self, i: usize, w: &WeightProfile) -> Vec<f64> {
        let mut out = vec![0.0; i + 1];
        for k in 0..i {
            let rho = if k < self.interface { 1.0 } else { w.alpha() };
            let half = 0.5 * rho * (self.nodes[k + 1] - self.nodes[k]);
            out[k] += half;
            out[k + 1] += half;
        }
        out
    }

    /// `∫₀^π f ρ dx` by the trapezoid rule on the nodes.
    pub fn integrate(&self, values: &[f64], w: &WeightProfile) -> f64 {
        self.trapezoid_weights(self.cells(), w)
            .iter()
            .zip(values)
            .map(|(a, b)| a * b)
            .sum()
    }
}
