//! Generators for the concrete transformation matrices and grid measures
//! used throughout: the digit-sum family, rotation orbits, the mod-1 sum
//! measure, dense-dimension mixtures and checkerboard coarsenings.

use std::collections::BTreeMap;

use num::Zero;

use crate::chaos::SampleCloud;
use crate::error::{Error, Result};
use crate::grid::GridMeasure;
use crate::matrix::{convex_combination, lex_grid, Dims, MultiIndex, Permutation, TransformationMatrix};
use crate::rational::{rat_usize, Rational};

/// Mass `1/N^(d-1)` on every index whose digit sum `sum_j (i_j - 1)` is a
/// multiple of `N`; support size is exactly `N^(d-1)` and the result lies in
/// the uniform class. The d=3, N=2 instance carries the Sierpinski
/// tetrahedron.
pub fn sierpinski_tau(d: usize, n: usize) -> Result<TransformationMatrix> {
    if d < 3 {
        return Err(Error::InvalidParameter(format!(
            "digit-sum construction needs d >= 3, got {d}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "digit-sum construction needs N >= 2, got {n}"
        )));
    }
    let dims = Dims::cubic(d, n)?;
    let mass = rat_usize(1, n.pow((d - 1) as u32));
    let entries = dims.all_indices().into_iter().filter_map(|index| {
        let digit_sum: usize = index.levels().iter().map(|&l| l - 1).sum();
        if digit_sum.is_multiple_of(n) {
            Some((index, mass.clone()))
        } else {
            None
        }
    });
    TransformationMatrix::new(dims, entries.collect::<Vec<_>>())
}

/// Discrete uniform distribution (mass `1/N^2`) on the orbit triples
/// `(i, eps^m(i), m)`. The permutation must be a single N-cycle so that
/// every fiber in each direction carries exactly one point.
pub fn rotation_tau(n: usize, eps: &Permutation) -> Result<TransformationMatrix> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "rotation construction needs N >= 3, got {n}"
        )));
    }
    if eps.n() != n {
        return Err(Error::ShapeMismatch(format!(
            "permutation acts on {} points, expected {}",
            eps.n(),
            n
        )));
    }
    if !eps.is_full_cycle() {
        return Err(Error::NotFullCycle(eps.to_string(), n));
    }
    let dims = Dims::cubic(3, n)?;
    let mass = rat_usize(1, n * n);
    let mut entries = Vec::with_capacity(n * n);
    for i in 1..=n {
        for m in 1..=n {
            entries.push((MultiIndex::new(vec![i, eps.pow(m).apply(i), m]), mass.clone()));
        }
    }
    TransformationMatrix::new(dims, entries)
}

/// The mixture `(tau' + tau'')/2` of the two order-3 rotation matrices with
/// cycles (2 3 1) and (3 1 2): fifteen support points, twelve of mass 1/18
/// and the three diagonal points `(i,i,3)` of mass 1/9. The support is
/// computed from the definitions, never hard-coded.
pub fn example_5_1() -> Result<TransformationMatrix> {
    let first = rotation_tau(3, &Permutation::new(vec![2, 3, 1])?)?;
    let second = rotation_tau(3, &Permutation::new(vec![3, 1, 2])?)?;
    convex_combination(&[first, second], &[rat_usize(1, 2), rat_usize(1, 2)])
}

/// Grid discretization of the completely dependent vector
/// `(X_1, ..., X_{d-1}, sum X_i mod 1)`: mass `k^-(d-1)` on every cell whose
/// last index satisfies `c_d - 1 = sum_{j<d} (c_j - 1) (mod k)`. All
/// (d-1)-dimensional marginals are exactly uniform.
pub fn modsum_grid_measure(d: usize, k: usize) -> Result<GridMeasure> {
    if d < 3 {
        return Err(Error::InvalidParameter(format!(
            "mod-1 sum measure needs d >= 3, got {d}"
        )));
    }
    if k < 1 {
        return Err(Error::InvalidParameter("resolution must be positive".into()));
    }
    let mass = rat_usize(1, k.pow((d - 1) as u32));
    let cells = lex_grid(&vec![k; d - 1]).into_iter().map(|base| {
        let digit_sum: usize = base.iter().map(|&c| c - 1).sum();
        let mut cell = base;
        cell.push(digit_sum % k + 1);
        (cell, mass.clone())
    });
    GridMeasure::new(vec![k; d], cells.collect::<Vec<_>>())
}

/// Exhaustive enumeration of d-tuples of permutations of `{1..N}`,
/// lexicographic over one-line notation, the identity tuple first.
pub struct PermutationTupleEnumerator {
    perms: Vec<Permutation>,
    d: usize,
    odometer: Option<Vec<usize>>,
}

impl PermutationTupleEnumerator {
    pub fn new(n: usize, d: usize) -> Self {
        Self {
            perms: Permutation::all(n),
            d,
            odometer: Some(vec![0; d]),
        }
    }

    /// Total number of tuples, `(N!)^d`.
    pub fn total(&self) -> usize {
        self.perms.len().pow(self.d as u32)
    }
}

impl Iterator for PermutationTupleEnumerator {
    type Item = Vec<Permutation>;

    fn next(&mut self) -> Option<Self::Item> {
        let state = self.odometer.as_mut()?;
        let tuple: Vec<Permutation> = state.iter().map(|&k| self.perms[k].clone()).collect();
        let mut axis = self.d;
        loop {
            if axis == 0 {
                self.odometer = None;
                break;
            }
            axis -= 1;
            if state[axis] + 1 < self.perms.len() {
                state[axis] += 1;
                break;
            }
            state[axis] = 0;
        }
        Some(tuple)
    }
}

/// Averages permutation-twisted copies of the digit-sum matrix in
/// enumeration order until the support size first enters
/// `[(k-1) N^(d-1), k N^(d-1)]` (endpoints included), and returns that
/// mixture. Its attractor dimension then lies in
/// `[log(k-1)/log N + d - 1, log k/log N + d - 1]`.
pub fn dense_dimension_tau(d: usize, n: usize, k: usize) -> Result<TransformationMatrix> {
    if !(2..=n).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "support target k must satisfy 2 <= k <= N, got k={k}, N={n}"
        )));
    }
    let base = sierpinski_tau(d, n)?;
    let block = n.pow((d - 1) as u32);
    let lo = (k - 1) * block;
    let hi = k * block;
    let mut accumulated: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
    let mut steps = 0usize;
    for tuple in PermutationTupleEnumerator::new(n, d) {
        let twisted = base.permuted(&tuple)?;
        for (index, mass) in twisted.entries() {
            *accumulated.entry(index.clone()).or_insert_with(Rational::zero) += mass;
        }
        steps += 1;
        if (lo..=hi).contains(&accumulated.len()) {
            let weight = rat_usize(1, steps);
            let entries: Vec<_> = accumulated
                .into_iter()
                .map(|(index, mass)| (index, mass * &weight))
                .collect();
            return TransformationMatrix::new(base.dims().clone(), entries);
        }
    }
    Err(Error::UnsupportedConfiguration(format!(
        "support size never entered [{lo}, {hi}] over the full enumeration"
    )))
}

/// Cube coarsening `tau(i) = mu(C_i)` at `N` boxes per axis. Exact for grid
/// measures whose resolution is divisible by `N` on every axis; the result
/// is a uniform-class matrix whenever `mu` has uniform (d-1)-marginals.
pub fn checkerboard_tau(mu: &GridMeasure, n: usize) -> Result<TransformationMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "checkerboard needs N >= 2, got {n}"
        )));
    }
    for (axis, &r) in mu.resolution().iter().enumerate() {
        if !r.is_multiple_of(n) {
            return Err(Error::UnsupportedConfiguration(format!(
                "checkerboard size {n} does not divide resolution {r} on coordinate {}",
                axis + 1
            )));
        }
    }
    let dims = Dims::cubic(mu.d(), n)?;
    let mut cubes: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
    for (cell, mass) in mu.cells() {
        let cube: Vec<usize> = cell
            .iter()
            .zip(mu.resolution())
            .map(|(&c, &r)| (c - 1) * n / r + 1)
            .collect();
        *cubes
            .entry(MultiIndex::new(cube))
            .or_insert_with(Rational::zero) += mass;
    }
    TransformationMatrix::new(dims, cubes)
}

/// Checkerboard coarsening of a sample cloud: cube masses are empirical
/// frequencies `count/total` (exact rationals, but only an approximation of
/// the sampled measure). Points on a cube boundary count toward the lower
/// cube.
pub fn checkerboard_tau_from_cloud(cloud: &SampleCloud, n: usize) -> Result<TransformationMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "checkerboard needs N >= 2, got {n}"
        )));
    }
    if cloud.is_empty() {
        return Err(Error::InvalidParameter("empty sample cloud".to_string()));
    }
    let dims = Dims::cubic(cloud.d(), n)?;
    let mut counts: BTreeMap<MultiIndex, usize> = BTreeMap::new();
    for point in cloud.iter_points() {
        let cube: Vec<usize> = point.iter().map(|&x| cube_index(x, n)).collect();
        *counts.entry(MultiIndex::new(cube)).or_insert(0) += 1;
    }
    let total = cloud.len();
    let entries: Vec<_> = counts
        .into_iter()
        .map(|(cube, c)| (cube, rat_usize(c, total)))
        .collect();
    TransformationMatrix::new(dims, entries)
}

/// 1-based cell index of a coordinate at resolution `r`; boundary values
/// fall to the lower cell.
pub fn cube_index(x: f64, r: usize) -> usize {
    let idx = (x * r as f64).ceil() as isize;
    idx.clamp(1, r as isize) as usize
}
