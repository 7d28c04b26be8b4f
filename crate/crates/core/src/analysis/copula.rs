//! Exact copula evaluation of grid measures and a certified sup-distance
//! bound on a joint refinement grid.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::grid::GridMeasure;
use crate::rational::{lcm_usize, rat_usize, to_f64, Rational};

/// Hard cap on the refined vertex grid used by the sup-distance bound.
const VERTEX_BUDGET: usize = 1 << 21;

/// Mass of the lower-left box `prod [0, x_j]`, with each cell's mass spread
/// uniformly inside the cell (piecewise-multilinear interpolation at cell
/// granularity). Exact.
pub fn copula_eval(mu: &GridMeasure, x: &[Rational]) -> Result<Rational> {
    if x.len() != mu.d() {
        return Err(Error::IndexLengthMismatch {
            index: format!("{x:?}"),
            got: x.len(),
            expected: mu.d(),
        });
    }
    if x.iter().any(|v| *v < Rational::zero() || *v > Rational::one()) {
        return Err(Error::InvalidParameter(
            "evaluation point must lie in the unit cube".to_string(),
        ));
    }
    let mut total = Rational::zero();
    'cells: for (cell, mass) in mu.cells() {
        let mut factor = Rational::one();
        for (axis, (&c, &r)) in cell.iter().zip(mu.resolution()).enumerate() {
            let lo = rat_usize(c - 1, r);
            let hi = rat_usize(c, r);
            if x[axis] <= lo {
                continue 'cells;
            }
            if x[axis] < hi {
                factor *= (&x[axis] - &lo) / (&hi - &lo);
            }
        }
        total += mass * factor;
    }
    Ok(total)
}

/// Certified upper bound on the sup-distance of two copulas on the unit
/// cube: the exact maximum over all joint refinement grid vertices plus the
/// Lipschitz slack `d/(2G)`. The slack term presumes copula-grade inputs
/// (1-Lipschitz in every coordinate, i.e. d-stochastic measures); the vertex
/// maximum is exact for any pair of grid measures.
#[derive(Debug, Clone)]
pub struct CopulaDistance {
    pub vertex_max: Rational,
    pub lipschitz_slack: Rational,
    /// Per-axis refinement resolution the vertices were taken on.
    pub refinement: Vec<usize>,
}

impl CopulaDistance {
    pub fn bound(&self) -> Rational {
        &self.vertex_max + &self.lipschitz_slack
    }

    pub fn bound_f64(&self) -> f64 {
        to_f64(&self.bound())
    }

    pub fn vertex_max_f64(&self) -> f64 {
        to_f64(&self.vertex_max)
    }
}

pub fn copula_sup_distance(mu: &GridMeasure, nu: &GridMeasure) -> Result<CopulaDistance> {
    if mu.d() != nu.d() {
        return Err(Error::ShapeMismatch(format!(
            "dimension {} vs {}",
            mu.d(),
            nu.d()
        )));
    }
    let d = mu.d();
    let refinement: Vec<usize> = mu
        .resolution()
        .iter()
        .zip(nu.resolution())
        .map(|(&a, &b)| lcm_usize(a, b))
        .collect();
    let vertices: usize = refinement.iter().product();
    if vertices > VERTEX_BUDGET {
        return Err(Error::BudgetExceeded {
            budget: VERTEX_BUDGET,
            required: vertices,
        });
    }

    let grid_mu = refined_cell_masses(mu, &refinement);
    let grid_nu = refined_cell_masses(nu, &refinement);

    let cum_mu = prefix_sums(grid_mu, &refinement);
    let cum_nu = prefix_sums(grid_nu, &refinement);

    let mut vertex_max = Rational::zero();
    for (a, b) in cum_mu.iter().zip(&cum_nu) {
        let diff = (a - b).abs();
        if diff > vertex_max {
            vertex_max = diff;
        }
    }
    let g_min = *refinement.iter().min().unwrap();
    Ok(CopulaDistance {
        vertex_max,
        lipschitz_slack: rat_usize(d, 2 * g_min),
        refinement,
    })
}

/// Splits each cell evenly over the refinement grid. `refinement[j]` must be
/// a multiple of the measure's resolution on axis `j`.
fn refined_cell_masses(mu: &GridMeasure, refinement: &[usize]) -> Vec<Rational> {
    let strides = row_major_strides(refinement);
    let mut grid = vec![Rational::zero(); refinement.iter().product()];
    let factors: Vec<usize> = refinement
        .iter()
        .zip(mu.resolution())
        .map(|(&g, &r)| g / r)
        .collect();
    let pieces: usize = factors.iter().product();
    for (cell, mass) in mu.cells() {
        let piece = mass / rat_usize(pieces, 1);
        // Enumerate the refined block of this cell with an odometer.
        let base: Vec<usize> = cell
            .iter()
            .zip(&factors)
            .map(|(&c, &f)| (c - 1) * f)
            .collect();
        let mut offsets = vec![0usize; refinement.len()];
        loop {
            let flat: usize = base
                .iter()
                .zip(&offsets)
                .zip(&strides)
                .map(|((b, o), s)| (b + o) * s)
                .sum();
            grid[flat] += &piece;
            let mut axis = refinement.len();
            let mut done = true;
            while axis > 0 {
                axis -= 1;
                if offsets[axis] + 1 < factors[axis] {
                    offsets[axis] += 1;
                    done = false;
                    break;
                }
                offsets[axis] = 0;
            }
            if done {
                break;
            }
        }
    }
    grid
}

/// In-place d-dimensional inclusive prefix sums: afterwards, entry `c`
/// holds the cumulative mass of the box below the upper corner of cell `c`,
/// i.e. the copula value at that grid vertex.
fn prefix_sums(mut grid: Vec<Rational>, shape: &[usize]) -> Vec<Rational> {
    let strides = row_major_strides(shape);
    let total = grid.len();
    for (axis, (&extent, &stride)) in shape.iter().zip(&strides).enumerate() {
        let _ = axis;
        for flat in 0..total {
            let coord = flat / stride % extent;
            if coord > 0 {
                let prev = grid[flat - stride].clone();
                grid[flat] += prev;
            }
        }
    }
    grid
}

fn row_major_strides(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; shape.len()];
    for axis in (0..shape.len().saturating_sub(1)).rev() {
        strides[axis] = strides[axis + 1] * shape[axis + 1];
    }
    strides
}
