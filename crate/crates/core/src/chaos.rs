//! Chaos-game sampling of the fixed-point measure: random iteration
//! `x -> f_I(x)` with `I` drawn according to the matrix weights.

use num::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ifsp::build_ifsp;
use crate::matrix::TransformationMatrix;

/// Default number of discarded warm-up iterations. Every map contracts by
/// at most 1/2 per axis for grids with at least two levels, so 64 steps
/// push the initial displacement below double precision.
pub const DEFAULT_BURN_IN: usize = 64;

/// RNG stream identifier recorded in sample clouds. Index selection is
/// inverse-CDF over the support in lexicographic order, one `f64` draw in
/// [0,1) per step.
pub const CHAOS_ALGO: &str = "chacha8";

/// Seeded sample cloud in `[0,1]^d`, stored row-major.
#[derive(Debug, Clone)]
pub struct SampleCloud {
    d: usize,
    points: Vec<f64>,
    seed: u64,
    burn_in: usize,
    algo: String,
}

impl SampleCloud {
    pub fn new(d: usize, points: Vec<f64>, seed: u64, burn_in: usize, algo: String) -> Result<Self> {
        if d == 0 || !points.len().is_multiple_of(d) {
            return Err(Error::InvalidParameter(format!(
                "point buffer of length {} is not a multiple of d={}",
                points.len(),
                d
            )));
        }
        if points.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidParameter(
                "sample coordinates must lie in [0,1]".to_string(),
            ));
        }
        Ok(Self {
            d,
            points,
            seed,
            burn_in,
            algo,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.d..(i + 1) * self.d]
    }

    pub fn iter_points(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.d)
    }

    /// One coordinate across all samples; `axis` is 0-based.
    pub fn coordinate(&self, axis: usize) -> Vec<f64> {
        self.iter_points().map(|p| p[axis]).collect()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn burn_in(&self) -> usize {
        self.burn_in
    }

    pub fn algo(&self) -> &str {
        &self.algo
    }
}

/// Runs the chaos game: starting from the cube center, applies `burn_in`
/// unrecorded steps, then records `count` consecutive iterates.
/// Deterministic for a fixed seed; works for every valid matrix, not only
/// the uniform class.
pub fn chaos_game(
    t: &TransformationMatrix,
    count: usize,
    seed: u64,
    burn_in: usize,
) -> Result<SampleCloud> {
    if count == 0 {
        return Err(Error::InvalidParameter(
            "sample count must be positive".to_string(),
        ));
    }
    let system = build_ifsp(t)?;
    let d = system.d();

    // f64 copies of the maps, in lexicographic support order.
    let mut cumulative = Vec::with_capacity(system.len());
    let mut offsets = Vec::with_capacity(system.len());
    let mut scales = Vec::with_capacity(system.len());
    let mut acc = 0.0f64;
    for m in system.maps() {
        acc += m.prob.to_f64().expect("probability fits f64");
        cumulative.push(acc);
        offsets.push(
            m.map
                .offset()
                .iter()
                .map(|v| v.to_f64().unwrap())
                .collect::<Vec<f64>>(),
        );
        scales.push(
            m.map
                .scale()
                .iter()
                .map(|v| v.to_f64().unwrap())
                .collect::<Vec<f64>>(),
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.5f64; d];
    let mut points = Vec::with_capacity(count * d);
    for step in 0..burn_in + count {
        let u: f64 = rng.gen();
        let mut pick = cumulative.partition_point(|c| *c <= u);
        if pick >= cumulative.len() {
            pick = cumulative.len() - 1;
        }
        for j in 0..d {
            x[j] = offsets[pick][j] + scales[pick][j] * x[j];
        }
        if step >= burn_in {
            points.extend_from_slice(&x);
        }
    }
    SampleCloud::new(d, points, seed, burn_in, CHAOS_ALGO.to_string())
}
