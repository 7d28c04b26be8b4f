//! Exact marginals of grid measures.

use std::collections::BTreeMap;

use num::Zero;

use crate::error::{Error, Result};
use crate::grid::GridMeasure;
use crate::matrix::lex_grid;
use crate::rational::{rat_usize, Rational};

/// Push-forward onto the coordinates other than `drop_axis` (0-based):
/// exact fiber sums.
pub fn marginal(mu: &GridMeasure, drop_axis: usize) -> Result<GridMeasure> {
    if mu.d() < 2 {
        return Err(Error::InvalidParameter(
            "marginal needs at least two coordinates".to_string(),
        ));
    }
    if drop_axis >= mu.d() {
        return Err(Error::InvalidParameter(format!(
            "coordinate {} out of range for dimension {}",
            drop_axis + 1,
            mu.d()
        )));
    }
    let mut resolution = mu.resolution().to_vec();
    resolution.remove(drop_axis);
    let mut cells: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for (cell, mass) in mu.cells() {
        let mut reduced = cell.clone();
        reduced.remove(drop_axis);
        *cells.entry(reduced).or_insert_with(Rational::zero) += mass;
    }
    GridMeasure::new(resolution, cells)
}

/// First cell (lexicographically) of the marginal that deviates from the
/// uniform measure at its resolution, with its actual mass. `None` when the
/// marginal is exactly uniform.
pub fn first_nonuniform_cell(
    mu: &GridMeasure,
    drop_axis: usize,
) -> Result<Option<(Vec<usize>, Rational)>> {
    let m = marginal(mu, drop_axis)?;
    let total: usize = m.resolution().iter().product();
    let expected = rat_usize(1, total);
    for cell in lex_grid(m.resolution()) {
        let mass = m.mass_of(&cell);
        if mass != expected {
            return Ok(Some((cell, mass)));
        }
    }
    Ok(None)
}
