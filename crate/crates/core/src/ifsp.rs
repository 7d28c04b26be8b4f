//! The iterated function system with probabilities induced by a
//! transformation matrix, and the similarity-dimension solver.

use num::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::{MultiIndex, TransformationMatrix};
use crate::rational::Rational;

/// Default tolerance for the bisection dimension solver.
pub const DEFAULT_DIMENSION_TOL: f64 = 1e-12;

/// Per-axis partition of [0,1] into consecutive cells, endpoints
/// `a^j_0 = 0 < a^j_1 < ... < a^j_{m_j} = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    endpoints: Vec<Vec<Rational>>,
}

impl Partition {
    /// Cumulative column sums of a valid transformation matrix.
    pub fn from_matrix(t: &TransformationMatrix) -> Result<Self> {
        let report = t.validate();
        if !report.is_ok() {
            return Err(Error::InvalidMatrix(report.describe()));
        }
        let endpoints = (0..t.d()).map(|axis| t.partition_endpoints(axis)).collect();
        Ok(Self { endpoints })
    }

    pub fn d(&self) -> usize {
        self.endpoints.len()
    }

    pub fn endpoints(&self, axis: usize) -> &[Rational] {
        &self.endpoints[axis]
    }

    /// Closed cell `[a^j_{k-1}, a^j_k]`; `level` is 1-based.
    pub fn cell(&self, axis: usize, level: usize) -> (Rational, Rational) {
        (
            self.endpoints[axis][level - 1].clone(),
            self.endpoints[axis][level].clone(),
        )
    }

    pub fn cell_length(&self, axis: usize, level: usize) -> Rational {
        &self.endpoints[axis][level] - &self.endpoints[axis][level - 1]
    }
}

/// Diagonal affine contraction of the unit cube: coordinate `j` maps to
/// `offset_j + scale_j * x_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    offset: Vec<Rational>,
    scale: Vec<Rational>,
}

impl AffineMap {
    pub fn new(offset: Vec<Rational>, scale: Vec<Rational>) -> Self {
        debug_assert_eq!(offset.len(), scale.len());
        debug_assert!(scale.iter().all(|s| *s > Rational::zero()));
        Self { offset, scale }
    }

    pub fn d(&self) -> usize {
        self.scale.len()
    }

    pub fn offset(&self) -> &[Rational] {
        &self.offset
    }

    pub fn scale(&self) -> &[Rational] {
        &self.scale
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        x.iter()
            .zip(self.offset.iter().zip(&self.scale))
            .map(|(xj, (off, sc))| off + sc * xj)
            .collect()
    }

    /// True when all diagonal entries coincide, i.e. the map is a similarity.
    pub fn is_similarity(&self) -> bool {
        self.scale.windows(2).all(|w| w[0] == w[1])
    }
}

#[derive(Debug, Clone)]
pub struct IfspMap {
    pub index: MultiIndex,
    pub map: AffineMap,
    pub prob: Rational,
}

/// One contraction per support point of the inducing matrix, weighted by
/// its mass. Image rectangles of distinct maps have null intersections by
/// construction, so the open set condition holds structurally.
#[derive(Debug, Clone)]
pub struct Ifsp {
    d: usize,
    partition: Partition,
    maps: Vec<IfspMap>,
}

impl Ifsp {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Maps in lexicographic order of their support indices.
    pub fn maps(&self) -> &[IfspMap] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Per-map contraction factors, defined only for similarity systems.
    pub fn similarity_factors(&self) -> Result<Vec<f64>> {
        if !is_similarity_system(self) {
            return Err(Error::NotSimilaritySystem);
        }
        Ok(self
            .maps
            .iter()
            .map(|m| m.map.scale()[0].to_f64().expect("scale fits f64"))
            .collect())
    }
}

/// Builds the induced IFSP of a valid transformation matrix: for support
/// index `i`, scale_j = a^j_{i_j} - a^j_{i_j - 1}, offset_j = a^j_{i_j - 1},
/// probability tau(i).
pub fn build_ifsp(t: &TransformationMatrix) -> Result<Ifsp> {
    let partition = Partition::from_matrix(t)?;
    let maps = t
        .entries()
        .map(|(index, prob)| {
            let mut offset = Vec::with_capacity(t.d());
            let mut scale = Vec::with_capacity(t.d());
            for (axis, &level) in index.levels().iter().enumerate() {
                let (lo, hi) = partition.cell(axis, level);
                scale.push(&hi - &lo);
                offset.push(lo);
            }
            IfspMap {
                index: index.clone(),
                map: AffineMap::new(offset, scale),
                prob: prob.clone(),
            }
        })
        .collect();
    Ok(Ifsp {
        d: t.d(),
        partition,
        maps,
    })
}

/// True iff every map of the system is a similarity.
pub fn is_similarity_system(s: &Ifsp) -> bool {
    s.maps.iter().all(|m| m.map.is_similarity())
}

/// Solves `sum_i c_i^s = 1` for `s >= 0` by bisection. The objective is
/// strictly decreasing in `s` for factors in (0,1), so the root is unique;
/// the bracket is grown by doubling until the objective drops below one.
pub fn similarity_dimension(factors: &[f64], tol: f64) -> Result<f64> {
    if factors.is_empty() {
        return Err(Error::InvalidParameter(
            "similarity dimension of an empty system".to_string(),
        ));
    }
    for &c in factors {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::InvalidContraction(c));
        }
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} is not positive"
        )));
    }
    let objective = |s: f64| factors.iter().map(|c| c.powf(s)).sum::<f64>();
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    while objective(hi) > 1.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::InvalidParameter(
                "dimension bracket expansion failed".to_string(),
            ));
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if objective(mid) >= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Hausdorff dimension of the attractor. For uniform-class matrices this is
/// the exact closed form `log(#support) / log(N)`; otherwise the bisection
/// solver runs on the per-map contraction factors (the open set condition
/// holds by construction, but the system must consist of similarities).
pub fn attractor_dimension(t: &TransformationMatrix) -> Result<f64> {
    if let Some(n) = t.uniform_class_n() {
        return Ok((t.support_size() as f64).ln() / (n as f64).ln());
    }
    let system = build_ifsp(t)?;
    let factors = system.similarity_factors()?;
    similarity_dimension(&factors, DEFAULT_DIMENSION_TOL)
}

/// Total volume of the image rectangles, `sum_i prod_j scale_j`.
pub fn image_volume_sum(s: &Ifsp) -> Rational {
    s.maps()
        .iter()
        .map(|m| m.map.scale().iter().product::<Rational>())
        .sum()
}
