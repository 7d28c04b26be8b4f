//! Shared helpers for unit tests.

use crate::matrix::{Dims, MultiIndex, TransformationMatrix};
use crate::rational::Rational;

pub fn matrix_from(m: Vec<usize>, entries: &[(&[usize], Rational)]) -> TransformationMatrix {
    TransformationMatrix::new(
        Dims::new(m).unwrap(),
        entries
            .iter()
            .map(|(levels, value)| (MultiIndex::new(levels.to_vec()), value.clone())),
    )
    .unwrap()
}

/// Uniform product measure on {1..n}^d.
pub fn uniform_matrix(d: usize, n: usize) -> TransformationMatrix {
    let dims = Dims::cubic(d, n).unwrap();
    let total = n.pow(d as u32);
    let entries: Vec<_> = dims
        .all_indices()
        .into_iter()
        .map(|i| (i, crate::rational::rat_usize(1, total)))
        .collect();
    TransformationMatrix::new(dims, entries).unwrap()
}

/// Valid non-uniform-class matrix: product measure with per-axis weights
/// (1/3, 2/3). Column sums are unequal, so the induced maps are not
/// similarities.
pub fn skewed_product_matrix() -> TransformationMatrix {
    use crate::rational::rat;
    let dims = Dims::cubic(3, 2).unwrap();
    let w = [rat(1, 3), rat(2, 3)];
    let entries: Vec<_> = dims
        .all_indices()
        .into_iter()
        .map(|i| {
            let mass = i.levels().iter().map(|&l| w[l - 1].clone()).product();
            (i, mass)
        })
        .collect();
    TransformationMatrix::new(dims, entries).unwrap()
}
