//! Generalized transformation matrices: sparse exact-rational probability
//! tensors on a multi-index grid `{1..m_1} x ... x {1..m_d}`, together with
//! the validity and uniformity predicates that drive everything else.
//!
//! Conventions: coordinates (axes) are 0-based in code, levels are 1-based
//! to match the text formats. Reports and `Display` impls print coordinates
//! 1-based.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat_usize, Rational};

/// Grid shape: the dimension `d` and the per-axis level counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dims {
    m: Vec<usize>,
}

impl Dims {
    pub fn new(m: Vec<usize>) -> Result<Self> {
        if m.len() < 2 {
            return Err(Error::DimensionTooSmall(m.len()));
        }
        for (axis, &count) in m.iter().enumerate() {
            if count < 2 {
                return Err(Error::LevelCountTooSmall {
                    coord: axis + 1,
                    count,
                });
            }
        }
        Ok(Self { m })
    }

    /// `d` axes with `n` levels each.
    pub fn cubic(d: usize, n: usize) -> Result<Self> {
        Self::new(vec![n; d])
    }

    pub fn d(&self) -> usize {
        self.m.len()
    }

    pub fn m(&self) -> &[usize] {
        &self.m
    }

    pub fn level_count(&self, axis: usize) -> usize {
        self.m[axis]
    }

    /// Level counts with one axis removed.
    pub fn reduced_m(&self, axis: usize) -> Vec<usize> {
        let mut m = self.m.clone();
        m.remove(axis);
        m
    }

    /// All multi-indices of the full grid, lexicographically.
    pub fn all_indices(&self) -> Vec<MultiIndex> {
        lex_grid(&self.m).into_iter().map(MultiIndex).collect()
    }
}

/// Every point of `{1..m_1} x ... x {1..m_k}` in lexicographic order.
pub fn lex_grid(m: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(m.iter().product());
    let mut cur = vec![1usize; m.len()];
    loop {
        out.push(cur.clone());
        let mut axis = m.len();
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            if cur[axis] < m[axis] {
                cur[axis] += 1;
                break;
            }
            cur[axis] = 1;
        }
    }
}

/// A point of the index grid; levels are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn new(levels: Vec<usize>) -> Self {
        Self(levels)
    }

    pub fn levels(&self) -> &[usize] {
        &self.0
    }

    pub fn level(&self, axis: usize) -> usize {
        self.0[axis]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The index with `axis` dropped (a point of the reduced grid).
    pub fn reduced(&self, axis: usize) -> Vec<usize> {
        let mut v = self.0.clone();
        v.remove(axis);
        v
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, level) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{level}")?;
        }
        write!(f, ")")
    }
}

fn display_reduced(levels: &[usize], axis: usize) -> String {
    let mut parts: Vec<String> = levels.iter().map(|l| l.to_string()).collect();
    parts.insert(axis, "\u{b7}".to_string());
    format!("({})", parts.join(","))
}

/// A permutation of `{1..n}` in one-line notation: position `j` (1-based)
/// holds the image of `j`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(one_line: Vec<usize>) -> Result<Self> {
        let n = one_line.len();
        let mut seen = vec![false; n + 1];
        for &v in &one_line {
            if v == 0 || v > n || seen[v] {
                return Err(Error::NotAPermutation(format!("{one_line:?}")));
            }
            seen[v] = true;
        }
        Ok(Self(one_line))
    }

    pub fn identity(n: usize) -> Self {
        Self((1..=n).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn one_line(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, level: usize) -> usize {
        self.0[level - 1]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0usize; self.0.len()];
        for (pos, &img) in self.0.iter().enumerate() {
            inv[img - 1] = pos + 1;
        }
        Permutation(inv)
    }

    /// k-fold composition with itself; `pow(0)` is the identity.
    pub fn pow(&self, k: usize) -> Permutation {
        let mut out = Permutation::identity(self.n());
        for _ in 0..k {
            out = Permutation(out.0.iter().map(|&v| self.apply(v)).collect());
        }
        out
    }

    pub fn orbit_length(&self, point: usize) -> usize {
        let mut cur = self.apply(point);
        let mut len = 1;
        while cur != point {
            cur = self.apply(cur);
            len += 1;
        }
        len
    }

    /// True when the permutation is a single n-cycle, i.e. every point has
    /// minimal period n.
    pub fn is_full_cycle(&self) -> bool {
        (1..=self.n()).all(|p| self.orbit_length(p) == self.n())
    }

    /// All permutations of `{1..n}` in lexicographic one-line order;
    /// the identity comes first.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n + 1];
        build_permutations(n, &mut cur, &mut used, &mut out);
        out
    }
}

fn build_permutations(
    n: usize,
    cur: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Permutation>,
) {
    if cur.len() == n {
        out.push(Permutation(cur.clone()));
        return;
    }
    for v in 1..=n {
        if !used[v] {
            used[v] = true;
            cur.push(v);
            build_permutations(n, cur, used, out);
            cur.pop();
            used[v] = false;
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Sparse exact-rational probability tensor on a multi-index grid.
/// Only positive entries are stored; the stored key set is the support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformationMatrix {
    dims: Dims,
    entries: BTreeMap<MultiIndex, Rational>,
}

impl TransformationMatrix {
    /// Builds the tensor, enforcing the structural invariants: every key has
    /// `d` components within bounds, every entry is positive, keys are
    /// distinct. Whether the entries form a valid transformation matrix
    /// (total mass one, positive slices) is reported by [`validate`].
    ///
    /// [`validate`]: TransformationMatrix::validate
    pub fn new(
        dims: Dims,
        entries: impl IntoIterator<Item = (MultiIndex, Rational)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (index, value) in entries {
            if index.len() != dims.d() {
                return Err(Error::IndexLengthMismatch {
                    index: index.to_string(),
                    got: index.len(),
                    expected: dims.d(),
                });
            }
            for (axis, &level) in index.levels().iter().enumerate() {
                if level == 0 || level > dims.level_count(axis) {
                    return Err(Error::IndexOutOfRange {
                        index: index.to_string(),
                        coord: axis + 1,
                        max: dims.level_count(axis),
                    });
                }
            }
            if value <= Rational::zero() {
                return Err(Error::NonPositiveEntry {
                    index: index.to_string(),
                    value,
                });
            }
            if map.insert(index.clone(), value).is_some() {
                return Err(Error::DuplicateIndex(index.to_string()));
            }
        }
        Ok(Self { dims, entries: map })
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn d(&self) -> usize {
        self.dims.d()
    }

    /// Entries in lexicographic key order.
    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &MultiIndex> {
        self.entries.keys()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn contains(&self, index: &MultiIndex) -> bool {
        self.entries.contains_key(index)
    }

    pub fn mass(&self, index: &MultiIndex) -> Rational {
        self.entries
            .get(index)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_mass(&self) -> Rational {
        self.entries.values().sum()
    }

    /// Sum over all entries whose component on `axis` equals `level`.
    pub fn column_sum(&self, axis: usize, level: usize) -> Rational {
        self.entries
            .iter()
            .filter(|(i, _)| i.level(axis) == level)
            .map(|(_, v)| v)
            .sum()
    }

    pub fn column_sums(&self, axis: usize) -> Vec<Rational> {
        let mut sums = vec![Rational::zero(); self.dims.level_count(axis)];
        for (index, value) in &self.entries {
            sums[index.level(axis) - 1] += value;
        }
        sums
    }

    /// Fiber sums along `axis`: for every reduced index that carries mass,
    /// the sum over all levels of `axis`.
    pub fn fiber_sums(&self, axis: usize) -> BTreeMap<Vec<usize>, Rational> {
        let mut sums: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for (index, value) in &self.entries {
            *sums.entry(index.reduced(axis)).or_insert_with(Rational::zero) += value;
        }
        sums
    }

    /// Positive levels per fiber along `axis`.
    pub fn fiber_levels(&self, axis: usize) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let mut levels: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for index in self.entries.keys() {
            levels
                .entry(index.reduced(axis))
                .or_default()
                .push(index.level(axis));
        }
        levels
    }

    /// Checks the defining conditions: total mass exactly one and a strictly
    /// positive slice sum for every coordinate and level.
    pub fn validate(&self) -> ValidationReport {
        let total_mass = self.total_mass();
        let mut empty_slices = Vec::new();
        for axis in 0..self.dims.d() {
            for (level0, sum) in self.column_sums(axis).iter().enumerate() {
                if *sum <= Rational::zero() {
                    empty_slices.push(SliceRef {
                        axis,
                        level: level0 + 1,
                    });
                }
            }
        }
        ValidationReport {
            total_mass,
            empty_slices,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Partition endpoints `a^j_0 = 0 <= a^j_1 <= ... <= a^j_{m_j}` induced
    /// by cumulative column sums. Strict monotonicity and `a^j_{m_j} = 1`
    /// hold exactly when the matrix is valid.
    pub fn partition_endpoints(&self, axis: usize) -> Vec<Rational> {
        let mut endpoints = Vec::with_capacity(self.dims.level_count(axis) + 1);
        let mut acc = Rational::zero();
        endpoints.push(acc.clone());
        for sum in self.column_sums(axis) {
            acc += sum;
            endpoints.push(acc.clone());
        }
        endpoints
    }

    /// The uniformity condition w.r.t. one coordinate: every fiber along
    /// `axis` must sum to the product of the complementary cell lengths.
    pub fn uniformity_wrt(&self, axis: usize) -> UniformityCheck {
        let cell_lengths: Vec<Vec<Rational>> =
            (0..self.dims.d()).map(|a| self.column_sums(a)).collect();
        let sums = self.fiber_sums(axis);
        let reduced_axes: Vec<usize> = (0..self.dims.d()).filter(|&a| a != axis).collect();
        for reduced in lex_grid(&self.dims.reduced_m(axis)) {
            let mut expected = Rational::one();
            for (pos, &a) in reduced_axes.iter().enumerate() {
                expected *= &cell_lengths[a][reduced[pos] - 1];
            }
            let actual = sums.get(&reduced).cloned().unwrap_or_else(Rational::zero);
            if actual != expected {
                return UniformityCheck {
                    holds: false,
                    violation: Some(FiberViolation {
                        axis,
                        reduced,
                        expected,
                        actual,
                    }),
                };
            }
        }
        UniformityCheck {
            holds: true,
            violation: None,
        }
    }

    /// Membership in the uniform class for grid size `n`: all axes have `n`
    /// levels, every column sum is exactly `1/n`, and the uniformity
    /// condition holds for every coordinate.
    pub fn is_uniform_class(&self, n: usize) -> bool {
        if self.dims.m().iter().any(|&mj| mj != n) {
            return false;
        }
        let level_mass = rat_usize(1, n);
        for axis in 0..self.dims.d() {
            if self.column_sums(axis).iter().any(|s| *s != level_mass) {
                return false;
            }
        }
        (0..self.dims.d()).all(|axis| self.uniformity_wrt(axis).holds)
    }

    /// Detects the grid size for which `is_uniform_class` holds, if any.
    pub fn uniform_class_n(&self) -> Option<usize> {
        let n = self.dims.level_count(0);
        if self.is_uniform_class(n) {
            Some(n)
        } else {
            None
        }
    }

    /// Relabels levels coordinatewise: the result assigns to `i` the mass
    /// this matrix assigns to `(eps_1(i_1), ..., eps_d(i_d))`.
    pub fn permuted(&self, eps: &[Permutation]) -> Result<TransformationMatrix> {
        if eps.len() != self.dims.d() {
            return Err(Error::ArityMismatch {
                context: "permutation tuple",
                expected: self.dims.d(),
                got: eps.len(),
            });
        }
        for (axis, p) in eps.iter().enumerate() {
            if p.n() != self.dims.level_count(axis) {
                return Err(Error::ShapeMismatch(format!(
                    "permutation on coordinate {} acts on {} levels, axis has {}",
                    axis + 1,
                    p.n(),
                    self.dims.level_count(axis)
                )));
            }
        }
        let inverses: Vec<Permutation> = eps.iter().map(Permutation::inverse).collect();
        let entries = self.entries.iter().map(|(index, value)| {
            let levels = index
                .levels()
                .iter()
                .enumerate()
                .map(|(axis, &l)| inverses[axis].apply(l))
                .collect();
            (MultiIndex::new(levels), value.clone())
        });
        TransformationMatrix::new(self.dims.clone(), entries)
    }
}

/// Entrywise weighted sum. Weights must be positive and sum to exactly one;
/// all operands must share the same grid shape.
pub fn convex_combination(
    parts: &[TransformationMatrix],
    weights: &[Rational],
) -> Result<TransformationMatrix> {
    if parts.is_empty() {
        return Err(Error::ArityMismatch {
            context: "convex combination",
            expected: 1,
            got: 0,
        });
    }
    if parts.len() != weights.len() {
        return Err(Error::ArityMismatch {
            context: "convex combination weights",
            expected: parts.len(),
            got: weights.len(),
        });
    }
    let dims = parts[0].dims().clone();
    if parts.iter().any(|t| *t.dims() != dims) {
        return Err(Error::ShapeMismatch(
            "convex combination operands must share dims".to_string(),
        ));
    }
    for w in weights {
        if *w <= Rational::zero() {
            return Err(Error::InvalidParameter(format!(
                "convex weight {w} is not positive"
            )));
        }
    }
    let total: Rational = weights.iter().sum();
    if !total.is_one() {
        return Err(Error::WeightSumNotOne(total));
    }
    let mut acc: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
    for (t, w) in parts.iter().zip(weights) {
        for (index, value) in t.entries() {
            *acc.entry(index.clone()).or_insert_with(Rational::zero) += value * w;
        }
    }
    TransformationMatrix::new(dims, acc)
}

/// A coordinate/level pair naming an empty slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceRef {
    /// 0-based axis.
    pub axis: usize,
    /// 1-based level.
    pub level: usize,
}

impl fmt::Display for SliceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(j={}, k={})", self.axis + 1, self.level)
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub total_mass: Rational,
    pub empty_slices: Vec<SliceRef>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.total_mass.is_one() && self.empty_slices.is_empty()
    }

    pub fn describe(&self) -> String {
        if self.is_ok() {
            return "ok".to_string();
        }
        let mut parts = Vec::new();
        if !self.total_mass.is_one() {
            parts.push(format!("total mass {} != 1", self.total_mass));
        }
        for slice in &self.empty_slices {
            parts.push(format!("empty slice {slice}"));
        }
        parts.join("; ")
    }
}

#[derive(Debug, Clone)]
pub struct UniformityCheck {
    pub holds: bool,
    pub violation: Option<FiberViolation>,
}

#[derive(Debug, Clone)]
pub struct FiberViolation {
    /// 0-based axis the fiber runs along.
    pub axis: usize,
    /// Levels of the other axes, in axis order.
    pub reduced: Vec<usize>,
    pub expected: Rational,
    pub actual: Rational,
}

impl fmt::Display for FiberViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "fiber {} sums to {}, expected {}",
            display_reduced(&self.reduced, self.axis),
            self.actual,
            self.expected
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::testutil::matrix_from;

    /// Uniform product measure on {1,2}^3, each point 1/8.
    fn uniform_cube() -> TransformationMatrix {
        crate::testutil::uniform_matrix(3, 2)
    }

    /// The four digit-sum-even points of {1,2}^3, each 1/4.
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
    fn dims_rejects_degenerate_shapes() {
        assert!(Dims::new(vec![2]).is_err());
        assert!(Dims::new(vec![2, 1]).is_err());
        assert!(Dims::new(vec![2, 2]).is_ok());
    }

    #[test]
    fn structural_checks_on_construction() {
        let dims = Dims::cubic(3, 2).unwrap();
        let short = TransformationMatrix::new(
            dims.clone(),
            vec![(MultiIndex::new(vec![1, 1]), rat(1, 1))],
        );
        assert!(matches!(short, Err(Error::IndexLengthMismatch { .. })));

        let out = TransformationMatrix::new(
            dims.clone(),
            vec![(MultiIndex::new(vec![1, 1, 3]), rat(1, 1))],
        );
        assert!(matches!(out, Err(Error::IndexOutOfRange { .. })));

        let neg = TransformationMatrix::new(
            dims.clone(),
            vec![(MultiIndex::new(vec![1, 1, 1]), rat(-1, 2))],
        );
        assert!(matches!(neg, Err(Error::NonPositiveEntry { .. })));

        let dup = TransformationMatrix::new(
            dims,
            vec![
                (MultiIndex::new(vec![1, 1, 1]), rat(1, 2)),
                (MultiIndex::new(vec![1, 1, 1]), rat(1, 2)),
            ],
        );
        assert!(matches!(dup, Err(Error::DuplicateIndex(_))));
    }

    #[test]
    fn uniform_product_measure_is_valid() {
        assert!(uniform_cube().validate().is_ok());
    }

    #[test]
    fn tetra_matrix_valid_with_all_slices_positive() {
        // Oracle: enumerate every slice sum directly.
        let t = tetra();
        for axis in 0..3 {
            for level in 1..=2 {
                let sum: Rational = t
                    .entries()
                    .filter(|(i, _)| i.level(axis) == level)
                    .map(|(_, v)| v.clone())
                    .sum();
                assert_eq!(sum, rat(1, 2), "axis {axis} level {level}");
            }
        }
        assert!(t.validate().is_ok());
    }

    #[test]
    fn mass_concentrated_on_one_slice_reports_the_empty_one() {
        let t = matrix_from(
            vec![2, 2, 2],
            &[
                (&[1, 1, 1], rat(1, 4)),
                (&[1, 1, 2], rat(1, 4)),
                (&[1, 2, 1], rat(1, 4)),
                (&[1, 2, 2], rat(1, 4)),
            ],
        );
        let report = t.validate();
        assert!(!report.is_ok());
        assert_eq!(report.empty_slices, vec![SliceRef { axis: 0, level: 2 }]);
        assert_eq!(report.empty_slices[0].to_string(), "(j=1, k=2)");
    }

    #[test]
    fn uniformity_of_the_uniform_product_measure() {
        let t = uniform_cube();
        for axis in 0..3 {
            assert!(t.uniformity_wrt(axis).holds);
        }
        assert!(t.is_uniform_class(2));
    }

    #[test]
    fn tetra_uniform_in_every_coordinate() {
        let t = tetra();
        for axis in 0..3 {
            assert!(t.uniformity_wrt(axis).holds, "axis {axis}");
        }
        assert!(t.is_uniform_class(2));
    }

    #[test]
    fn lopsided_matrix_uniform_only_along_last_axis() {
        // Mass 1/4 on {(1,1,1),(2,2,1),(1,2,2),(2,1,1)}: fiber sums along
        // axis 2 are all 1/4, but the fiber (.,1,1) along axis 0 sums to 1/2.
        let t = matrix_from(
            vec![2, 2, 2],
            &[
                (&[1, 1, 1], rat(1, 4)),
                (&[2, 2, 1], rat(1, 4)),
                (&[1, 2, 2], rat(1, 4)),
                (&[2, 1, 1], rat(1, 4)),
            ],
        );
        assert!(t.validate().is_ok());
        assert!(t.uniformity_wrt(2).holds);

        let check = t.uniformity_wrt(0);
        assert!(!check.holds);
        let violation = check.violation.unwrap();
        assert_eq!(violation.reduced, vec![1, 1]);
        assert_eq!(violation.actual, rat(1, 2));
        // Column sums along axis 2 are (3/4, 1/4), so the expected fiber sum
        // is lambda(E^2_1) * lambda(E^3_1) = 1/2 * 3/4.
        assert_eq!(violation.expected, rat(3, 8));
        assert!(!t.is_uniform_class(2));
    }

    #[test]
    fn partition_endpoints_are_cumulative_column_sums() {
        let t = matrix_from(
            vec![2, 2, 2],
            &[
                (&[1, 1, 1], rat(1, 4)),
                (&[2, 2, 1], rat(1, 4)),
                (&[1, 2, 2], rat(1, 4)),
                (&[2, 1, 1], rat(1, 4)),
            ],
        );
        assert_eq!(
            t.partition_endpoints(2),
            vec![rat(0, 1), rat(3, 4), rat(1, 1)]
        );
    }

    #[test]
    fn permutation_basics() {
        assert!(Permutation::new(vec![2, 2, 1]).is_err());
        assert!(Permutation::new(vec![1, 2, 4]).is_err());
        let p = Permutation::new(vec![2, 3, 1]).unwrap();
        assert_eq!(p.apply(1), 2);
        assert_eq!(p.inverse().one_line(), &[3, 1, 2]);
        assert_eq!(p.pow(2).one_line(), &[3, 1, 2]);
        assert_eq!(p.pow(3), Permutation::identity(3));
        assert!(p.is_full_cycle());
        assert!(!Permutation::new(vec![1, 3, 2]).unwrap().is_full_cycle());

        let all = Permutation::all(3);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], Permutation::identity(3));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn identity_permutation_tuple_fixes_matrix() {
        let t = tetra();
        let eps = vec![Permutation::identity(2); 3];
        assert_eq!(t.permuted(&eps).unwrap(), t);
    }

    #[test]
    fn swap_on_first_axis_moves_support_as_expected() {
        let t = tetra();
        let eps = vec![
            Permutation::new(vec![2, 1]).unwrap(),
            Permutation::identity(2),
            Permutation::identity(2),
        ];
        let moved = t.permuted(&eps).unwrap();
        let support: Vec<Vec<usize>> = moved.support().map(|i| i.levels().to_vec()).collect();
        assert_eq!(
            support,
            vec![
                vec![1, 1, 2],
                vec![1, 2, 1],
                vec![2, 1, 1],
                vec![2, 2, 2],
            ]
        );
        assert!(moved.is_uniform_class(2));
    }

    #[test]
    fn permuted_rejects_wrong_sizes() {
        let t = tetra();
        assert!(t.permuted(&vec![Permutation::identity(2); 2]).is_err());
        let wrong = vec![
            Permutation::identity(3),
            Permutation::identity(2),
            Permutation::identity(2),
        ];
        assert!(matches!(t.permuted(&wrong), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn convex_combination_identity_and_uniform() {
        let t = tetra();
        let same = convex_combination(std::slice::from_ref(&t), &[rat(1, 1)]).unwrap();
        assert_eq!(same, t);

        let u = uniform_cube();
        let mix = convex_combination(&[u.clone(), u.clone()], &[rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(mix, u);
    }

    #[test]
    fn convex_combination_rejects_bad_weights() {
        let t = tetra();
        let u = uniform_cube();
        assert!(matches!(
            convex_combination(&[t.clone(), u.clone()], &[rat(1, 2), rat(1, 3)]),
            Err(Error::WeightSumNotOne(_))
        ));
        assert!(convex_combination(&[t.clone(), u.clone()], &[rat(3, 2), rat(-1, 2)]).is_err());
        assert!(convex_combination(&[], &[]).is_err());
        assert!(convex_combination(&[t, u], &[rat(1, 1)]).is_err());
    }

    #[test]
    fn convex_combination_support_is_union_and_mass_exact() {
        let t = tetra();
        let u = uniform_cube();
        let mix = convex_combination(&[t.clone(), u.clone()], &[rat(1, 3), rat(2, 3)]).unwrap();
        assert_eq!(mix.total_mass(), rat(1, 1));
        let union: std::collections::BTreeSet<_> =
            t.support().chain(u.support()).cloned().collect();
        assert_eq!(mix.support_size(), union.len());
        assert_eq!(
            mix.mass(&MultiIndex::new(vec![1, 1, 1])),
            rat(1, 3) * rat(1, 4) + rat(2, 3) * rat(1, 8)
        );
    }

    #[test]
    fn lex_grid_order() {
        let g = lex_grid(&[2, 3]);
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], vec![1, 1]);
        assert_eq!(g[1], vec![1, 2]);
        assert_eq!(g[5], vec![2, 3]);
    }
}
