//! Exact-rational histogram measures on product grids, and the Markov
//! operator acting on them.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{lex_grid, TransformationMatrix};
use crate::rational::{rat_usize, Rational};

pub use crate::cellset::DEFAULT_CELL_BUDGET;

/// Sparse histogram measure on the product grid with `resolution[j]` cells
/// along axis `j`. Cell indices are 1-based; cell `c` covers
/// `[(c-1)/r, c/r]` on its axis. Only positive masses are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMeasure {
    resolution: Vec<usize>,
    cells: BTreeMap<Vec<usize>, Rational>,
}

impl GridMeasure {
    pub fn new(
        resolution: Vec<usize>,
        cells: impl IntoIterator<Item = (Vec<usize>, Rational)>,
    ) -> Result<Self> {
        if resolution.is_empty() || resolution.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "bad grid resolution {resolution:?}"
            )));
        }
        let mut map = BTreeMap::new();
        for (cell, mass) in cells {
            if cell.len() != resolution.len() {
                return Err(Error::IndexLengthMismatch {
                    index: format!("{cell:?}"),
                    got: cell.len(),
                    expected: resolution.len(),
                });
            }
            for (axis, (&c, &r)) in cell.iter().zip(&resolution).enumerate() {
                if c == 0 || c > r {
                    return Err(Error::IndexOutOfRange {
                        index: format!("{cell:?}"),
                        coord: axis + 1,
                        max: r,
                    });
                }
            }
            if mass <= Rational::zero() {
                return Err(Error::NonPositiveEntry {
                    index: format!("{cell:?}"),
                    value: mass,
                });
            }
            if map.insert(cell.clone(), mass).is_some() {
                return Err(Error::DuplicateIndex(format!("{cell:?}")));
            }
        }
        Ok(Self {
            resolution,
            cells: map,
        })
    }

    /// Lebesgue measure as the single-cell grid measure.
    pub fn lebesgue(d: usize) -> Self {
        let mut cells = BTreeMap::new();
        cells.insert(vec![1usize; d], Rational::one());
        Self {
            resolution: vec![1; d],
            cells,
        }
    }

    /// Uniform measure at an arbitrary resolution (mass `1/prod(r)` per cell).
    pub fn uniform(resolution: Vec<usize>) -> Self {
        let total: usize = resolution.iter().product();
        let cells = lex_grid(&resolution)
            .into_iter()
            .map(|c| (c, rat_usize(1, total)))
            .collect();
        Self { resolution, cells }
    }

    pub fn d(&self) -> usize {
        self.resolution.len()
    }

    pub fn resolution(&self) -> &[usize] {
        &self.resolution
    }

    /// Cells in lexicographic index order.
    pub fn cells(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.cells.iter()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn mass_of(&self, cell: &[usize]) -> Rational {
        self.cells.get(cell).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_mass(&self) -> Rational {
        self.cells.values().sum()
    }

    /// True when every cell of the grid carries the same mass.
    pub fn is_uniform(&self) -> bool {
        let total: usize = self.resolution.iter().product();
        self.cells.len() == total
            && self.cells.values().all(|m| *m == rat_usize(1, total))
    }

    /// If all axes share one resolution `n^k`, returns `k`.
    pub fn uniform_power_of(&self, n: usize) -> Option<u32> {
        let r = self.resolution[0];
        if self.resolution.iter().any(|&rj| rj != r) {
            return None;
        }
        if r == 1 {
            return Some(0);
        }
        if n < 2 {
            return None;
        }
        let mut value = r;
        let mut k = 0u32;
        while value > 1 {
            if !value.is_multiple_of(n) {
                return None;
            }
            value /= n;
            k += 1;
        }
        Some(k)
    }

    /// Volume of one grid cell.
    pub fn cell_volume(&self) -> Rational {
        self.resolution
            .iter()
            .map(|&r| rat_usize(1, r))
            .product()
    }

    /// Center of a cell, as floats.
    pub fn cell_center_f64(&self, cell: &[usize]) -> Vec<f64> {
        cell.iter()
            .zip(&self.resolution)
            .map(|(&c, &r)| (c as f64 - 0.5) / r as f64)
            .collect()
    }

    /// Euclidean diameter of a single cell.
    pub fn cell_diameter_f64(&self) -> f64 {
        self.resolution
            .iter()
            .map(|&r| 1.0 / (r as f64 * r as f64))
            .sum::<f64>()
            .sqrt()
    }
}

/// One exact application of the Markov operator. Requires a uniform-class
/// matrix and a uniform source resolution `N^k`; the image lives at
/// resolution `N^(k+1)`, with the mass of cell `c` under map `i` landing in
/// cell `(i_j - 1) * N^k + c_j`, weighted by `tau(i)`.
pub fn markov_step(t: &TransformationMatrix, mu: &GridMeasure) -> Result<GridMeasure> {
    let d = t.d();
    if mu.d() != d {
        return Err(Error::ShapeMismatch(format!(
            "matrix dimension {} vs measure dimension {}",
            d,
            mu.d()
        )));
    }
    let n = t.dims().level_count(0);
    if t.uniform_class_n().is_none() {
        return Err(Error::UnsupportedConfiguration(
            "exact Markov iteration needs a uniform-class matrix (equal cells on every axis); \
             use chaos-game sampling for general matrices"
                .to_string(),
        ));
    }
    if mu.uniform_power_of(n).is_none() {
        return Err(Error::UnsupportedConfiguration(format!(
            "exact Markov iteration needs a uniform source resolution that is a power of {n}, got {:?}",
            mu.resolution()
        )));
    }
    let r = mu.resolution()[0];
    let out_res = vec![r * n; d];
    let mut cells: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for (index, weight) in t.entries() {
        for (cell, mass) in mu.cells() {
            let image: Vec<usize> = index
                .levels()
                .iter()
                .zip(cell)
                .map(|(&level, &c)| (level - 1) * r + c)
                .collect();
            *cells.entry(image).or_insert_with(Rational::zero) += weight * mass;
        }
    }
    let out = GridMeasure {
        resolution: out_res,
        cells,
    };
    debug_assert!(out.total_mass().is_one());
    Ok(out)
}

/// Exact iterates `[mu0, V(mu0), ..., V^n(mu0)]`. The image of a step has
/// exactly `support * cells` cells; the budget is checked before each step.
pub fn iterate_markov(
    t: &TransformationMatrix,
    mu0: &GridMeasure,
    n: usize,
    budget: usize,
) -> Result<Vec<GridMeasure>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(mu0.clone());
    for _ in 0..n {
        let current = out.last().unwrap();
        let required = current.len().saturating_mul(t.support_size());
        if required > budget {
            return Err(Error::BudgetExceeded { budget, required });
        }
        out.push(markov_step(t, current)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::testutil::{matrix_from, skewed_product_matrix, uniform_matrix};

    fn tetra() -> TransformationMatrix {
        matrix_from(
            vec![2, 2, 2],
            &[
                (&[1, 1, 1], rat(1, 4)),
                (&[1, 2, 2], rat(1, 4)),
                (&[2, 1, 2], rat(1, 4)),
                (&[2, 2, 1], rat(1, 4)),
            ],
        )
    }

    #[test]
    fn grid_measure_structural_checks() {
        assert!(GridMeasure::new(vec![], vec![]).is_err());
        assert!(GridMeasure::new(vec![2, 0], vec![]).is_err());
        assert!(GridMeasure::new(vec![2, 2], vec![(vec![3, 1], rat(1, 1))]).is_err());
        assert!(GridMeasure::new(vec![2, 2], vec![(vec![1, 1], rat(0, 1))]).is_err());
        assert!(GridMeasure::new(
            vec![2, 2],
            vec![(vec![1, 1], rat(1, 2)), (vec![1, 1], rat(1, 2))]
        )
        .is_err());
    }

    #[test]
    fn lebesgue_is_the_single_cell_measure() {
        let mu = GridMeasure::lebesgue(3);
        assert_eq!(mu.len(), 1);
        assert_eq!(mu.total_mass(), rat(1, 1));
        assert!(mu.is_uniform());
        assert_eq!(mu.uniform_power_of(2), Some(0));
    }

    #[test]
    fn first_tetra_step_gives_four_quarter_cells() {
        let out = markov_step(&tetra(), &GridMeasure::lebesgue(3)).unwrap();
        assert_eq!(out.resolution(), &[2, 2, 2]);
        assert_eq!(out.len(), 4);
        let cells: Vec<Vec<usize>> = out.cells().map(|(c, _)| c.clone()).collect();
        assert_eq!(
            cells,
            vec![
                vec![1, 1, 1],
                vec![1, 2, 2],
                vec![2, 1, 2],
                vec![2, 2, 1]
            ]
        );
        for (_, m) in out.cells() {
            assert_eq!(*m, rat(1, 4));
        }
    }

    #[test]
    fn uniform_matrix_fixes_the_uniform_measure() {
        let t = uniform_matrix(3, 2);
        let out = markov_step(&t, &GridMeasure::lebesgue(3)).unwrap();
        assert_eq!(out, GridMeasure::uniform(vec![2, 2, 2]));
        let out2 = markov_step(&t, &out).unwrap();
        assert_eq!(out2, GridMeasure::uniform(vec![4, 4, 4]));
    }

    #[test]
    fn non_uniform_class_matrix_is_rejected() {
        let err = markov_step(&skewed_product_matrix(), &GridMeasure::lebesgue(3)).unwrap_err();
        assert!(matches!(err, Error::UnsupportedConfiguration(_)));
    }

    #[test]
    fn mismatched_resolution_is_rejected() {
        let mu = GridMeasure::uniform(vec![3, 3, 3]);
        assert!(matches!(
            markov_step(&tetra(), &mu),
            Err(Error::UnsupportedConfiguration(_))
        ));
        let ragged = GridMeasure::uniform(vec![2, 2, 4]);
        assert!(markov_step(&tetra(), &ragged).is_err());
    }

    #[test]
    fn example_5_1_first_step_has_fifteen_cells_at_resolution_three() {
        let t = crate::constructions::example_5_1().unwrap();
        let out = markov_step(&t, &GridMeasure::lebesgue(3)).unwrap();
        assert_eq!(out.resolution(), &[3, 3, 3]);
        assert_eq!(out.len(), 15);
        let (mut ninth, mut eighteenth) = (0, 0);
        for (_, mass) in out.cells() {
            if *mass == rat(1, 9) {
                ninth += 1;
            } else {
                assert_eq!(*mass, rat(1, 18));
                eighteenth += 1;
            }
        }
        assert_eq!((ninth, eighteenth), (3, 12));
    }

    #[test]
    fn single_coordinate_uniformity_is_preserved_sharply() {
        // The source has a uniform marginal only w.r.t. dropping the last
        // coordinate; the step keeps exactly that marginal uniform.
        let mu = GridMeasure::new(
            vec![2, 2, 2],
            vec![
                (vec![1, 1, 1], rat(1, 4)),
                (vec![1, 2, 1], rat(1, 4)),
                (vec![2, 1, 1], rat(1, 4)),
                (vec![2, 2, 2], rat(1, 4)),
            ],
        )
        .unwrap();
        let out = markov_step(&tetra(), &mu).unwrap();
        let kept = crate::analysis::marginal(&out, 2).unwrap();
        assert_eq!(kept, GridMeasure::uniform(vec![4, 4]));
        let other = crate::analysis::marginal(&out, 0).unwrap();
        assert!(!other.is_uniform());
    }

    #[test]
    fn iterate_zero_echoes_the_start() {
        let mu = GridMeasure::lebesgue(3);
        let out = iterate_markov(&tetra(), &mu, 0, DEFAULT_CELL_BUDGET).unwrap();
        assert_eq!(out, vec![mu]);
    }

    #[test]
    fn iterate_counts_follow_the_support_power_law() {
        let out = iterate_markov(&tetra(), &GridMeasure::lebesgue(3), 6, DEFAULT_CELL_BUDGET)
            .unwrap();
        for (n, mu) in out.iter().enumerate() {
            assert_eq!(mu.len(), 4usize.pow(n as u32));
            assert_eq!(mu.total_mass(), rat(1, 1));
            if n > 0 {
                let mass = rat_usize(1, 4usize.pow(n as u32));
                assert!(mu.cells().all(|(_, m)| *m == mass));
            }
        }
    }

    #[test]
    fn iterate_budget_names_the_limit() {
        let err =
            iterate_markov(&tetra(), &GridMeasure::lebesgue(3), 9, 1000).unwrap_err();
        match err {
            Error::BudgetExceeded { budget, required } => {
                assert_eq!(budget, 1000);
                assert_eq!(required, 1024);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn cell_geometry_helpers() {
        let mu = GridMeasure::uniform(vec![4, 4]);
        assert_eq!(mu.cell_volume(), rat(1, 16));
        assert_eq!(mu.cell_center_f64(&[1, 4]), vec![0.125, 0.875]);
        let diam = mu.cell_diameter_f64();
        assert!((diam - (2.0f64 / 16.0).sqrt()).abs() < 1e-15);
    }
}
