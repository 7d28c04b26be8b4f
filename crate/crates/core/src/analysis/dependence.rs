//! Matrix-level and empirical complete-dependence diagnostics.

use std::collections::BTreeMap;

use crate::chaos::SampleCloud;
use crate::constructions::cube_index;
use crate::error::{Error, Result};
use crate::matrix::TransformationMatrix;
use crate::rational::rat_usize;

/// True iff every fiber along `axis` (over the full reduced grid) carries
/// exactly one positive entry: the matrix-level statement that coordinate
/// `axis` is a function of the others.
pub fn fiber_uniqueness(t: &TransformationMatrix, axis: usize) -> bool {
    let fibers = t.fiber_levels(axis);
    let full: usize = t.dims().reduced_m(axis).iter().product();
    fibers.len() == full && fibers.values().all(|levels| levels.len() == 1)
}

/// Fraction of samples whose depth-`k` grid cell on the last coordinate
/// disagrees with the level forced by the unique fiber of its projection.
/// Requires fiber uniqueness in every direction and equal column sums (so
/// the depth-k cells form the `N^k` grid). Samples lying exactly on a cell
/// boundary count toward the lower cell.
pub fn empirical_dependence_check(
    cloud: &SampleCloud,
    t: &TransformationMatrix,
    depth: u32,
) -> Result<f64> {
    let d = t.d();
    if cloud.d() != d {
        return Err(Error::ShapeMismatch(format!(
            "cloud dimension {} vs matrix dimension {}",
            cloud.d(),
            d
        )));
    }
    for axis in 0..d {
        if !fiber_uniqueness(t, axis) {
            return Err(Error::InvalidParameter(format!(
                "matrix is not completely dependent in direction {}",
                axis + 1
            )));
        }
    }
    let n = t.dims().level_count(0);
    let level_mass = rat_usize(1, n);
    let equal_cells = (0..d).all(|axis| {
        t.dims().level_count(axis) == n
            && t.column_sums(axis).iter().all(|s| *s == level_mass)
    });
    if !equal_cells {
        return Err(Error::UnsupportedConfiguration(
            "depth-k cell decomposition needs equal column sums on every axis".to_string(),
        ));
    }
    if depth == 0 || cloud.is_empty() {
        return Err(Error::InvalidParameter(
            "need a positive depth and a non-empty cloud".to_string(),
        ));
    }

    // Unique positive level per (d-1)-fiber along the last coordinate.
    let fiber_map: BTreeMap<Vec<usize>, usize> = t
        .fiber_levels(d - 1)
        .into_iter()
        .map(|(reduced, levels)| (reduced, levels[0]))
        .collect();

    let resolution = n.pow(depth);
    let mut violations = 0usize;
    for point in cloud.iter_points() {
        let cells: Vec<usize> = point.iter().map(|&x| cube_index(x, resolution)).collect();
        // Base-N digits of the first d-1 cells predict the last one,
        // level by level (most significant digit first).
        let mut predicted = 0usize;
        for level in 0..depth {
            let shift = n.pow(depth - 1 - level);
            let digits: Vec<usize> = cells[..d - 1]
                .iter()
                .map(|&c| (c - 1) / shift % n + 1)
                .collect();
            let forced = fiber_map[&digits];
            predicted += (forced - 1) * shift;
        }
        if predicted + 1 != cells[d - 1] {
            violations += 1;
        }
    }
    Ok(violations as f64 / cloud.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::{chaos_game, DEFAULT_BURN_IN};
    use crate::constructions::{example_5_1, rotation_tau, sierpinski_tau};
    use crate::matrix::Permutation;
    use crate::testutil::uniform_matrix;

    #[test]
    fn sierpinski_is_fiber_unique_in_every_direction() {
        for (d, n) in [(3usize, 2usize), (3, 3), (4, 2)] {
            let t = sierpinski_tau(d, n).unwrap();
            for axis in 0..d {
                assert!(fiber_uniqueness(&t, axis), "(d,N)=({d},{n}), axis {axis}");
            }
        }
    }

    #[test]
    fn uniform_matrix_is_not_fiber_unique() {
        let t = uniform_matrix(3, 2);
        assert!(!fiber_uniqueness(&t, 0));
    }

    #[test]
    fn example_5_1_not_fiber_unique_along_the_last_axis() {
        let t = example_5_1().unwrap();
        assert!(!fiber_uniqueness(&t, 2));
        // The fiber (1,2,.) carries both (1,2,1) and (1,2,2).
        let fibers = t.fiber_levels(2);
        assert_eq!(fibers[&vec![1, 2]].len(), 2);
    }

    #[test]
    fn sierpinski_cloud_respects_the_fiber_map() {
        let t = sierpinski_tau(3, 2).unwrap();
        let cloud = chaos_game(&t, 20_000, 11, DEFAULT_BURN_IN).unwrap();
        let fraction = empirical_dependence_check(&cloud, &t, 4).unwrap();
        assert!(fraction <= 1e-3, "violation fraction {fraction}");
    }

    #[test]
    fn rotation_cloud_respects_the_fiber_map() {
        let t = rotation_tau(3, &Permutation::new(vec![2, 3, 1]).unwrap()).unwrap();
        let cloud = chaos_game(&t, 20_000, 12, DEFAULT_BURN_IN).unwrap();
        let fraction = empirical_dependence_check(&cloud, &t, 3).unwrap();
        assert!(fraction <= 1e-3, "violation fraction {fraction}");
    }

    #[test]
    fn non_dependent_matrix_is_rejected() {
        let t = uniform_matrix(3, 2);
        let cloud = chaos_game(&t, 100, 1, DEFAULT_BURN_IN).unwrap();
        assert!(empirical_dependence_check(&cloud, &t, 2).is_err());
    }
}
