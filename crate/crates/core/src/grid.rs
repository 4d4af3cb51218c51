//! Radial discretization of the ball B(R) ⊂ ℝ^N.
//!
//! Nodes satisfy r_0 = 0 < r_1 < … < r_M = R. The default grading clusters
//! nodes geometrically toward the origin, where all the singular behavior
//! lives. The discrete Laplacian uses the standard nonuniform three-point
//! stencil on interior nodes, the symmetry-regularized stencil
//! ΔU(0) = N·U_rr(0) ≈ 2N(U_1 − U_0)/r_1² at the origin (the radial
//! equations all assume U_r(0) = 0), and returns 0 at the boundary node by
//! convention; the integrator never reads that entry.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::tridiag::Tridiagonal;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grading {
    Uniform,
    /// spacing(R)/spacing(0) equals `ratio`; `ratio = 1` degenerates to uniform.
    Geometric { ratio: f64 },
}

#[derive(Debug, Clone)]
pub struct RadialGrid {
    dimension: u32,
    radius: f64,
    grading: Grading,
    nodes: Vec<f64>,
}

impl RadialGrid {
    /// Builds a grid with `intervals` cells (so `intervals + 1` nodes).
    /// Rebuilding with the same arguments yields bit-identical nodes.
    pub fn build(dimension: u32, radius: f64, intervals: usize, grading: Grading) -> Result<Self> {
        if dimension < 1 {
            return Err(Error::Config("dimension must be >= 1".into()));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::Config(format!("radius must be positive, got {radius}")));
        }
        if intervals < 16 {
            return Err(Error::Config(format!(
                "need at least 16 intervals, got {intervals}"
            )));
        }
        let m = intervals;
        let nodes = match grading {
            Grading::Uniform => uniform_nodes(radius, m),
            Grading::Geometric { ratio } => {
                if !(ratio.is_finite() && ratio >= 1.0) {
                    return Err(Error::Config(format!(
                        "grading ratio must be >= 1, got {ratio}"
                    )));
                }
                if ratio == 1.0 {
                    uniform_nodes(radius, m)
                } else {
                    geometric_nodes(radius, m, ratio)
                }
            }
        };
        debug_assert_eq!(nodes.len(), m + 1);
        debug_assert_eq!(nodes[0], 0.0);
        debug_assert_eq!(nodes[m], radius);
        Ok(Self {
            dimension,
            radius,
            grading,
            nodes,
        })
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn intervals(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Spacing of cell `i`, i.e. r_{i+1} − r_i.
    pub fn spacing(&self, i: usize) -> f64 {
        self.nodes[i + 1] - self.nodes[i]
    }

    pub fn origin_spacing(&self) -> f64 {
        self.spacing(0)
    }

    pub fn boundary_spacing(&self) -> f64 {
        self.spacing(self.intervals() - 1)
    }

    /// The discrete radial Laplacian as a tridiagonal operator. The boundary
    /// row is zero, matching the convention that the operator's output at
    /// r = R is 0.
    pub fn laplacian_operator(&self) -> Tridiagonal {
        let n = self.nodes.len();
        let dim = f64::from(self.dimension);
        let mut op = Tridiagonal::zeros(n);

        // Origin row: 2N (U_1 − U_0) / r_1².
        let h0 = self.nodes[1];
        op.diag[0] = -2.0 * dim / (h0 * h0);
        op.sup[0] = 2.0 * dim / (h0 * h0);

        for i in 1..n - 1 {
            let hm = self.nodes[i] - self.nodes[i - 1];
            let hp = self.nodes[i + 1] - self.nodes[i];
            let r = self.nodes[i];
            // Nonuniform second-difference weights.
            let d2_sub = 2.0 / (hm * (hm + hp));
            let d2_diag = -2.0 / (hm * hp);
            let d2_sup = 2.0 / (hp * (hm + hp));
            // Nonuniform centered first-difference weights.
            let d1_sub = -hp / (hm * (hm + hp));
            let d1_diag = (hp - hm) / (hm * hp);
            let d1_sup = hm / (hp * (hm + hp));
            let drift = (dim - 1.0) / r;
            op.sub[i] = d2_sub + drift * d1_sub;
            op.diag[i] = d2_diag + drift * d1_diag;
            op.sup[i] = d2_sup + drift * d1_sup;
        }
        op
    }

    /// Applies the discrete radial Laplacian to nodal values.
    pub fn laplacian_into(&self, values: &[f64], out: &mut [f64]) {
        debug_assert_eq!(values.len(), self.nodes.len());
        self.laplacian_operator().apply(values, out);
    }
}

fn uniform_nodes(radius: f64, m: usize) -> Vec<f64> {
    let mut nodes: Vec<f64> = (0..=m).map(|i| radius * (i as f64) / (m as f64)).collect();
    nodes[0] = 0.0;
    nodes[m] = radius;
    nodes
}

/// Geometric grading: spacings h, hq, hq², …, so spacing(R)/spacing(0) = q^{M−1}
/// equals the requested ratio.
fn geometric_nodes(radius: f64, m: usize, ratio: f64) -> Vec<f64> {
    let q = ratio.powf(1.0 / (m as f64 - 1.0));
    let h0 = radius * (q - 1.0) / (q.powi(m as i32) - 1.0);
    let mut nodes = Vec::with_capacity(m + 1);
    nodes.push(0.0);
    let mut h = h0;
    for _ in 0..m {
        let next = nodes.last().unwrap() + h;
        nodes.push(next);
        h *= q;
    }
    nodes[m] = radius;
    nodes
}

/// Nodal values of a radial function on a shared grid. Values are always
/// finite; NaN or ∞ is a construction error, never silently stored.
#[derive(Debug, Clone)]
pub struct RadialField {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
}

impl RadialField {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.nodes().len() {
            return Err(Error::Config(format!(
                "field has {} values for {} nodes",
                values.len(),
                grid.nodes().len()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite value {} at node {bad}",
                values[bad]
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: &Arc<RadialGrid>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::new(Arc::clone(grid), values)
    }

    pub fn constant(grid: &Arc<RadialGrid>, c: f64) -> Result<Self> {
        Self::new(Arc::clone(grid), vec![c; grid.nodes().len()])
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn grid_arc(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut Vec<f64> {
        &mut self.values
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Discrete radial Laplacian of this field; boundary entry is 0 by
    /// convention.
    pub fn laplacian(&self) -> RadialField {
        let mut out = vec![0.0; self.values.len()];
        self.grid.laplacian_into(&self.values, &mut out);
        RadialField {
            grid: Arc::clone(&self.grid),
            values: out,
        }
    }
}
