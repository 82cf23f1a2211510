//! Nyström discretization of the kernel equation and its solution.

use nalgebra::{DMatrix, DVector, LU};
use rayon::prelude::*;

use super::kernel::KernelBuilder;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::mat2::Mat2;

/// Settings of the kernel solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlmOptions {
    /// Bound on the relative residual `‖Mu − b‖∞ / max(1, ‖b‖∞)`.
    pub tol: f64,
    /// Condition estimates above this are treated as singular.
    pub max_condition: f64,
}

impl Default for GlmOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_condition: 1e12,
        }
    }
}

/// F(ξₖ, tⱼ) for all node pairs of a grid.
#[derive(Debug, Clone)]
pub(crate) struct KernelTable {
    n: usize,
    f: [DMatrix<f64>; 4],
}

impl KernelTable {
    pub(crate) fn new(kb: &KernelBuilder, grid: &Grid) -> Self {
        let w = kb.weight();
        let terms = kb.terms();
        let n = grid.len();
        let mu: Vec<f64> = grid.nodes().iter().map(|&x| w.mu_unchecked(x)).collect();
        let sin = DMatrix::from_fn(terms.len(), n, |m, k| (terms[m].lambda * mu[k]).sin());
        let cos = DMatrix::from_fn(terms.len(), n, |m, k| (terms[m].lambda * mu[k]).cos());
        let weights = DVector::from_iterator(terms.len(), terms.iter().map(|t| t.weight));
        let ws = DMatrix::from_fn(terms.len(), n, |m, k| weights[m] * sin[(m, k)]);
        let wc = DMatrix::from_fn(terms.len(), n, |m, k| weights[m] * cos[(m, k)]);
        let f = [
            ws.tr_mul(&sin),
            -ws.tr_mul(&cos),
            -wc.tr_mul(&sin),
            wc.tr_mul(&cos),
        ];
        Self { n, f }
    }

    /// F(ξₖ, tⱼ).
    pub(crate) fn get(&self, k: usize, j: usize) -> Mat2 {
        debug_assert!(k < self.n && j < self.n);
        Mat2::new(
            self.f[0][(k, j)],
            self.f[1][(k, j)],
            self.f[2][(k, j)],
            self.f[3][(k, j)],
        )
    }
}

/// The linear system for row `x = x_i` of the kernel.
///
/// Unknowns are the rows of `K(x, tⱼ)`, `j ≤ i`, stacked as 2-blocks. Block
/// `(j, k)` of the matrix is `δⱼₖ I + cₖ F(ξₖ, tⱼ)ᵀ` with trapezoid weights
/// `cₖ` including ρ; the two right-hand columns hold `−F(x, tⱼ)ᵀ`.
#[derive(Debug, Clone)]
pub struct GlmSystem {
    x: f64,
    nodes: Vec<f64>,
    matrix: DMatrix<f64>,
    rhs: DMatrix<f64>,
}

/// Solution of one [`GlmSystem`].
#[derive(Debug, Clone)]
pub struct GlmSolution {
    /// `K(x, tⱼ) = A(x, μ(tⱼ))` for `tⱼ ≤ x`.
    pub values: Vec<Mat2>,
    /// 1-norm condition estimate of the matrix.
    pub condition: f64,
    /// Relative residual of the solve.
    pub residual: f64,
}

/// System for grid node `index`.
pub fn assemble_glm_system(kb: &KernelBuilder, grid: &Grid, index: usize) -> Result<GlmSystem> {
    if index >= grid.len() {
        return Err(Error::Domain {
            what: "node index",
            value: index as f64,
        });
    }
    Ok(GlmSystem::from_table(
        &KernelTable::new(kb, grid),
        kb,
        grid,
        index,
    ))
}

impl GlmSystem {
    pub(crate) fn from_table(
        table: &KernelTable,
        kb: &KernelBuilder,
        grid: &Grid,
        i: usize,
    ) -> Self {
        let n = i + 1;
        let c = grid.trapezoid_weights(i, kb.weight());
        let mut matrix = DMatrix::identity(2 * n, 2 * n);
        let mut rhs = DMatrix::zeros(2 * n, 2);
        for j in 0..n {
            for k in 0..n {
                let f = table.get(k, j);
                for (r, s) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    matrix[(2 * j + r, 2 * k + s)] += c[k] * f[(s, r)];
                }
            }
            let f = table.get(i, j);
            for (r, s) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                rhs[(2 * j + r, s)] = -f[(s, r)];
            }
        }
        Self {
            x: grid.nodes()[i],
            nodes: grid.nodes()[..n].to_vec(),
            matrix,
            rhs,
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn rhs(&self) -> &DMatrix<f64> {
        &self.rhs
    }

    /// LU solve with one refinement step when the residual exceeds `tol`.
    pub fn solve(&self, opts: &GlmOptions) -> Result<GlmSolution> {
        let singular = |condition: f64| Error::SingularSystem {
            x: self.x,
            condition,
        };
        let lu = self.matrix.clone().lu();
        let mut sol = lu.solve(&self.rhs).ok_or_else(|| singular(f64::INFINITY))?;
        let condition = self
            .matrix
            .column_iter()
            .map(|c| c.lp_norm(1))
            .fold(0.0, f64::max)
            * inverse_norm1(&lu);
        if !(condition <= opts.max_condition) {
            return Err(singular(condition));
        }
        let scale = self.rhs.amax().max(1.0);
        let mut residual = (&self.matrix * &sol - &self.rhs).amax() / scale;
        if residual > opts.tol {
            let correction = lu
                .solve(&(&self.rhs - &self.matrix * &sol))
                .ok_or_else(|| singular(condition))?;
            sol += correction;
            residual = (&self.matrix * &sol - &self.rhs).amax() / scale;
        }
        if !(residual <= opts.tol) {
            return Err(singular(condition));
        }
        let values = (0..self.nodes.len())
            .map(|j| {
                Mat2::new(
                    sol[(2 * j, 0)],
                    sol[(2 * j + 1, 0)],
                    sol[(2 * j, 1)],
                    sol[(2 * j + 1, 1)],
                )
            })
            .collect();
        Ok(GlmSolution {
            values,
            condition,
            residual,
        })
    }
}

/// Hager's estimate of `‖M⁻¹‖₁` from an LU factorization.
fn inverse_norm1(lu: &LU<f64, nalgebra::Dyn, nalgebra::Dyn>) -> f64 {
    let n = lu.u().nrows();
    let (l, u) = (lu.l(), lu.u());
    let solve_t = |b: &DVector<f64>| -> Option<DVector<f64>> {
        let y = u.tr_solve_upper_triangular(b)?;
        let mut z = l.tr_solve_lower_triangular(&y)?;
        lu.p().inv_permute_rows(&mut z);
        Some(z)
    };
    let mut x = DVector::from_element(n, 1.0 / n as f64);
    let mut estimate = 0.0;
    for iter in 0..5 {
        let Some(y) = lu.solve(&x) else {
            return f64::INFINITY;
        };
        let norm = y.lp_norm(1);
        if iter > 0 && norm <= estimate {
            break;
        }
        estimate = norm;
        let signs = y.map(|v| if v >= 0.0 { 1.0 } else { -1.0 });
        let Some(z) = solve_t(&signs) else {
            return f64::INFINITY;
        };
        let j = z.iamax();
        if z[j].abs() <= z.dot(&x) {
            break;
        }
        x = DVector::zeros(n);
        x[j] = 1.0;
    }
    estimate
}

/// One solved row of the kernel field.
#[derive(Debug, Clone)]
pub struct KernelRow {
    pub values: Vec<Mat2>,
    pub condition: f64,
    pub residual: f64,
}

/// `K(xᵢ, tⱼ)` for all grid nodes `tⱼ ≤ xᵢ`.
#[derive(Debug, Clone)]
pub struct KernelField {
    grid: Grid,
    rows: Vec<KernelRow>,
}

/// Solves the kernel equation at every node of `grid`.
pub fn solve_kernel(kb: &KernelBuilder, grid: &Grid, opts: &GlmOptions) -> Result<KernelField> {
    let table = KernelTable::new(kb, grid);
    let rows = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let s = GlmSystem::from_table(&table, kb, grid, i).solve(opts)?;
            Ok(KernelRow {
                values: s.values,
                condition: s.condition,
                residual: s.residual,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KernelField {
        grid: grid.clone(),
        rows,
    })
}

impl KernelField {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn rows(&self) -> &[KernelRow] {
        &self.rows
    }

    /// K(xᵢ, tⱼ), `j ≤ i`.
    pub fn value(&self, i: usize, j: usize) -> Mat2 {
        self.rows[i].values[j]
    }

    /// K(xᵢ, xᵢ).
    pub fn diagonal(&self, i: usize) -> Mat2 {
        self.rows[i].values[i]
    }

    /// `|K₁₁(xᵢ, 0)| + |K₂₁(xᵢ, 0)|`.
    pub fn origin_residual(&self, i: usize) -> f64 {
        let k = self.rows[i].values[0];
        k[(0, 0)].abs() + k[(1, 0)].abs()
    }

    /// Largest entry difference to a field solved on `self.grid().refine()`,
    /// over the nodes of this grid.
    pub fn max_difference_refined(&self, fine: &KernelField) -> Result<f64> {
        if fine.grid != self.grid.refine() {
            return Err(Error::InvalidGrid(
                "second field is not on the refined grid".into(),
            ));
        }
        let mut worst = 0.0_f64;
        for (i, row) in self.rows.iter().enumerate() {
            for (j, k) in row.values.iter().enumerate() {
                worst = worst.max((k - fine.value(2 * i, 2 * j)).amax());
            }
        }
        Ok(worst)
    }
}
