//! Rectangle-set iterates of the Hutchinson operator, with exact volumes.

use std::collections::BTreeSet;

use num::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ifsp::{build_ifsp, AffineMap, Ifsp};
use crate::matrix::TransformationMatrix;
use crate::rational::Rational;

/// Default cap on the number of rectangles an iteration may materialize.
pub const DEFAULT_CELL_BUDGET: usize = 20_000_000;

/// Axis-aligned rectangle with rational corners.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rect {
    lo: Vec<Rational>,
    hi: Vec<Rational>,
}

impl Rect {
    pub fn new(lo: Vec<Rational>, hi: Vec<Rational>) -> Self {
        debug_assert_eq!(lo.len(), hi.len());
        debug_assert!(lo.iter().zip(&hi).all(|(a, b)| a < b));
        Self { lo, hi }
    }

    pub fn unit(d: usize) -> Self {
        Self {
            lo: vec![Rational::zero(); d],
            hi: vec![num::one(); d],
        }
    }

    pub fn d(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[Rational] {
        &self.lo
    }

    pub fn hi(&self) -> &[Rational] {
        &self.hi
    }

    pub fn volume(&self) -> Rational {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| b - a)
            .product()
    }

    pub fn center_f64(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| {
                let mid = (a + b) / Rational::from_integer(2.into());
                mid.to_f64().expect("center fits f64")
            })
            .collect()
    }

    /// True when `other` lies inside this rectangle (closed containment).
    pub fn contains(&self, other: &Rect) -> bool {
        self.lo
            .iter()
            .zip(&other.lo)
            .all(|(a, b)| a <= b)
            && self.hi.iter().zip(&other.hi).all(|(a, b)| a >= b)
    }

    /// Euclidean distance from a point to this rectangle (0 inside).
    pub fn distance_f64(&self, point: &[f64]) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(point)
            .map(|((lo, hi), &x)| {
                let lo = lo.to_f64().unwrap();
                let hi = hi.to_f64().unwrap();
                let gap = if x < lo {
                    lo - x
                } else if x > hi {
                    x - hi
                } else {
                    0.0
                };
                gap * gap
            })
            .sum::<f64>()
            .sqrt()
    }

    fn image_under(&self, map: &AffineMap) -> Rect {
        Rect {
            lo: map.apply(&self.lo),
            hi: map.apply(&self.hi),
        }
    }
}

/// A depth-n Hutchinson iterate: finitely many rectangles with pairwise
/// null intersections, sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellSet {
    depth: usize,
    rects: Vec<Rect>,
}

impl CellSet {
    pub fn unit_cube(d: usize) -> Self {
        Self {
            depth: 0,
            rects: vec![Rect::unit(d)],
        }
    }

    pub fn from_rects(depth: usize, rects: impl IntoIterator<Item = Rect>) -> Self {
        let set: BTreeSet<Rect> = rects.into_iter().collect();
        Self {
            depth,
            rects: set.into_iter().collect(),
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn d(&self) -> usize {
        self.rects.first().map_or(0, Rect::d)
    }
}

/// One application of the Hutchinson operator: the union of the images of
/// every rectangle under every map of the induced system. Duplicates are
/// merged; the depth counter increments.
pub fn hutchinson_step(t: &TransformationMatrix, cells: &CellSet) -> Result<CellSet> {
    let system = build_ifsp(t)?;
    Ok(hutchinson_step_system(&system, cells))
}

fn hutchinson_step_system(system: &Ifsp, cells: &CellSet) -> CellSet {
    let images = cells
        .rects()
        .iter()
        .flat_map(|rect| system.maps().iter().map(move |m| rect.image_under(&m.map)));
    CellSet::from_rects(cells.depth() + 1, images)
}

/// Depth-n iterate starting from the unit cube, with a cell budget. The
/// pre-step size estimate `|support| * |cells|` is checked before each step.
pub fn hutchinson_iterate(t: &TransformationMatrix, n: usize, budget: usize) -> Result<CellSet> {
    let system = build_ifsp(t)?;
    let mut cells = CellSet::unit_cube(t.d());
    for _ in 0..n {
        let required = cells.len().saturating_mul(system.len());
        if required > budget {
            return Err(Error::BudgetExceeded { budget, required });
        }
        cells = hutchinson_step_system(&system, &cells);
    }
    Ok(cells)
}

/// Exact total volume; valid because distinct rectangles of an iterate
/// intersect in null sets only.
pub fn cellset_volume(cells: &CellSet) -> Rational {
    cells.rects().iter().map(Rect::volume).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_usize};
    use crate::testutil::{matrix_from, uniform_matrix};

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
    fn unit_cube_has_volume_one() {
        let c = CellSet::unit_cube(3);
        assert_eq!(c.depth(), 0);
        assert_eq!(cellset_volume(&c), rat(1, 1));
    }

    #[test]
    fn first_step_of_tetra_gives_four_half_cubes() {
        let c = hutchinson_step(&tetra(), &CellSet::unit_cube(3)).unwrap();
        assert_eq!(c.depth(), 1);
        assert_eq!(c.len(), 4);
        for r in c.rects() {
            assert_eq!(r.volume(), rat(1, 8));
        }
        // The four cells sit at the digit-sum-even corners of the 2x2x2 grid.
        let corners: Vec<Vec<Rational>> = c.rects().iter().map(|r| r.lo().to_vec()).collect();
        let expected: Vec<Vec<Rational>> = [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]]
            .iter()
            .map(|c| c.iter().map(|&v| rat(v, 2)).collect())
            .collect();
        assert_eq!(corners, expected);
    }

    #[test]
    fn tetra_depth_n_counts_and_volumes() {
        let mut c = CellSet::unit_cube(3);
        let t = tetra();
        for n in 1..=5usize {
            c = hutchinson_step(&t, &c).unwrap();
            assert_eq!(c.len(), 4usize.pow(n as u32));
            assert_eq!(cellset_volume(&c), rat_usize(1, 2usize.pow(n as u32)));
        }
    }

    #[test]
    fn full_support_covers_the_cube_at_every_depth() {
        let t = uniform_matrix(3, 2);
        let c = hutchinson_iterate(&t, 3, DEFAULT_CELL_BUDGET).unwrap();
        assert_eq!(c.len(), 8usize.pow(3));
        assert_eq!(cellset_volume(&c), rat(1, 1));
    }

    #[test]
    fn iterates_are_monotone_decreasing_as_point_sets() {
        let t = tetra();
        let shallow = hutchinson_iterate(&t, 2, DEFAULT_CELL_BUDGET).unwrap();
        let deep = hutchinson_iterate(&t, 3, DEFAULT_CELL_BUDGET).unwrap();
        for small in deep.rects() {
            assert!(
                shallow.rects().iter().any(|big| big.contains(small)),
                "depth-3 cell escapes the depth-2 set"
            );
        }
    }

    #[test]
    fn volume_law_for_general_matrices() {
        // Support {(1,1,1),(2,2,1),(1,2,2),(2,1,1)} has image volume sum 5/8;
        // the depth-n volume is its n-th power.
        let t = matrix_from(
            vec![2, 2, 2],
            &[
                (&[1, 1, 1], rat(1, 4)),
                (&[2, 2, 1], rat(1, 4)),
                (&[1, 2, 2], rat(1, 4)),
                (&[2, 1, 1], rat(1, 4)),
            ],
        );
        let system = build_ifsp(&t).unwrap();
        assert_eq!(crate::ifsp::image_volume_sum(&system), rat(5, 8));
        for n in 0..=3usize {
            let c = hutchinson_iterate(&t, n, DEFAULT_CELL_BUDGET).unwrap();
            let expected: Rational = (0..n).map(|_| rat(5, 8)).product();
            assert_eq!(cellset_volume(&c), expected, "depth {n}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = hutchinson_iterate(&tetra(), 4, 100).unwrap_err();
        match err {
            Error::BudgetExceeded { budget, required } => {
                assert_eq!(budget, 100);
                assert_eq!(required, 256);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn hausdorff_distance_of_center_clouds_contracts() {
        // delta_H between successive iterates via cell centers, ratio <= 1/N
        // plus slack.
        let t = tetra();
        let sets: Vec<CellSet> = (1..=4)
            .map(|n| hutchinson_iterate(&t, n, DEFAULT_CELL_BUDGET).unwrap())
            .collect();
        let centers: Vec<Vec<Vec<f64>>> = sets
            .iter()
            .map(|s| s.rects().iter().map(Rect::center_f64).collect())
            .collect();
        let dist = |a: &[f64], b: &[f64]| -> f64 {
            a.iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt()
        };
        let hausdorff = |xs: &Vec<Vec<f64>>, ys: &Vec<Vec<f64>>| -> f64 {
            let one_sided = |from: &Vec<Vec<f64>>, to: &Vec<Vec<f64>>| {
                from.iter()
                    .map(|p| {
                        to.iter()
                            .map(|q| dist(p, q))
                            .fold(f64::INFINITY, f64::min)
                    })
                    .fold(0.0, f64::max)
            };
            one_sided(xs, ys).max(one_sided(ys, xs))
        };
        let h01 = hausdorff(&centers[0], &centers[1]);
        let h12 = hausdorff(&centers[1], &centers[2]);
        let h23 = hausdorff(&centers[2], &centers[3]);
        assert!(h12 / h01 <= 0.5 + 0.05, "ratio {}", h12 / h01);
        assert!(h23 / h12 <= 0.5 + 0.05, "ratio {}", h23 / h12);
    }
}
