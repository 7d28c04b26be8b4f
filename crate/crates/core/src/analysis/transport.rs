//! Exact Wasserstein-1 between grid measures: optimal transport between
//! cell-center discretizations under the Euclidean ground metric, solved by
//! successive shortest paths with potentials. Supplies are scaled to a
//! common integer grid, so flows are exact rationals; only arc costs are
//! floating point.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::collections::HashMap;

use num::bigint::BigInt;
use num::{Integer, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::grid::GridMeasure;
use crate::rational::Rational;

/// Default maximum number of cells per side of the transport problem.
pub const DEFAULT_TRANSPORT_BUDGET: usize = 4000;

/// Largest common supply denominator the integer scaling accepts.
const MAX_SCALED_SUPPLY: i128 = 1 << 40;

/// Feasible transport plan between the cells of two grid measures, together
/// with the dual potentials the solver ended on.
#[derive(Debug, Clone)]
pub struct TransportPlan {
    pub source_cells: Vec<Vec<usize>>,
    pub target_cells: Vec<Vec<usize>>,
    /// `(source index, target index, flow)`, sorted, flows positive and
    /// summing to one.
    pub flows: Vec<(usize, usize, Rational)>,
    pub source_potentials: Vec<f64>,
    pub target_potentials: Vec<f64>,
}

impl TransportPlan {
    pub fn total_flow(&self) -> Rational {
        self.flows.iter().map(|(_, _, f)| f).sum()
    }

    pub fn row_sums(&self) -> Vec<Rational> {
        let mut sums = vec![Rational::zero(); self.source_cells.len()];
        for (i, _, f) in &self.flows {
            sums[*i] += f;
        }
        sums
    }

    pub fn column_sums(&self) -> Vec<Rational> {
        let mut sums = vec![Rational::zero(); self.target_cells.len()];
        for (_, j, f) in &self.flows {
            sums[*j] += f;
        }
        sums
    }

    /// Exact feasibility: row sums equal the source masses and column sums
    /// the target masses.
    pub fn verify_feasibility(&self, mu: &GridMeasure, nu: &GridMeasure) -> Result<()> {
        let rows = self.row_sums();
        for (cell, expected) in self.source_cells.iter().zip(rows.iter().zip(mu_masses(mu))) {
            let (got, want) = expected;
            if *got != want {
                return Err(Error::InvalidParameter(format!(
                    "row sum {got} differs from source mass {want} at cell {cell:?}"
                )));
            }
        }
        let cols = self.column_sums();
        for (cell, expected) in self.target_cells.iter().zip(cols.iter().zip(mu_masses(nu))) {
            let (got, want) = expected;
            if *got != want {
                return Err(Error::InvalidParameter(format!(
                    "column sum {got} differs from target mass {want} at cell {cell:?}"
                )));
            }
        }
        Ok(())
    }

    /// Largest complementary-slackness defect: for support arcs the reduced
    /// cost should vanish, and no arc may have a substantially negative
    /// reduced cost. Returns `(max |rc| on support, most negative rc overall)`.
    pub fn slackness_defect(&self, mu: &GridMeasure, nu: &GridMeasure) -> (f64, f64) {
        let src: Vec<Vec<f64>> = self
            .source_cells
            .iter()
            .map(|c| mu.cell_center_f64(c))
            .collect();
        let dst: Vec<Vec<f64>> = self
            .target_cells
            .iter()
            .map(|c| nu.cell_center_f64(c))
            .collect();
        let reduced = |i: usize, j: usize| {
            euclidean(&src[i], &dst[j]) + self.source_potentials[i] - self.target_potentials[j]
        };
        let mut support_defect = 0.0f64;
        for (i, j, _) in &self.flows {
            support_defect = support_defect.max(reduced(*i, *j).abs());
        }
        let mut most_negative = 0.0f64;
        for i in 0..src.len() {
            for j in 0..dst.len() {
                most_negative = most_negative.min(reduced(i, j));
            }
        }
        (support_defect, most_negative)
    }
}

fn mu_masses(mu: &GridMeasure) -> Vec<Rational> {
    mu.cells().map(|(_, m)| m.clone()).collect()
}

#[derive(Debug, Clone)]
pub struct Wasserstein1 {
    /// Optimal transport cost between the cell-center discretizations.
    pub distance: f64,
    /// Discretization error bound: the diameter of the largest cell.
    pub discretization_bound: f64,
    pub plan: TransportPlan,
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Exact optimal transport between the cell centers of two grid measures.
pub fn wasserstein1(mu: &GridMeasure, nu: &GridMeasure, budget: usize) -> Result<Wasserstein1> {
    if mu.d() != nu.d() {
        return Err(Error::ShapeMismatch(format!(
            "dimension {} vs {}",
            mu.d(),
            nu.d()
        )));
    }
    if mu.len() > budget || nu.len() > budget {
        return Err(Error::BudgetExceeded {
            budget,
            required: mu.len().max(nu.len()),
        });
    }

    let source_cells: Vec<Vec<usize>> = mu.cells().map(|(c, _)| c.clone()).collect();
    let target_cells: Vec<Vec<usize>> = nu.cells().map(|(c, _)| c.clone()).collect();
    let src_pts: Vec<Vec<f64>> = source_cells.iter().map(|c| mu.cell_center_f64(c)).collect();
    let dst_pts: Vec<Vec<f64>> = target_cells.iter().map(|c| nu.cell_center_f64(c)).collect();

    let (scale, supplies) = scaled_integer_masses(mu, nu)?;
    let m = source_cells.len();
    let n = target_cells.len();
    let (mut remaining_supply, mut remaining_demand) = supplies;

    // Dense cost cache when affordable, otherwise compute on the fly.
    let cache = if m.saturating_mul(n) <= 1 << 23 {
        let mut c = Vec::with_capacity(m * n);
        for s in &src_pts {
            for t in &dst_pts {
                c.push(euclidean(s, t));
            }
        }
        Some(c)
    } else {
        None
    };
    let cost = |i: usize, j: usize| match &cache {
        Some(c) => c[i * n + j],
        None => euclidean(&src_pts[i], &dst_pts[j]),
    };

    // Node layout: sources 0..m, sinks m..m+n.
    let mut potential = vec![0.0f64; m + n];
    let mut flow: HashMap<(u32, u32), i128> = HashMap::new();
    // Sources with positive flow into each sink (may hold stale entries).
    let mut by_sink: Vec<Vec<u32>> = vec![Vec::new(); n];

    let mut dist = vec![f64::INFINITY; m + n];
    let mut parent: Vec<Option<usize>> = vec![None; m + n];
    let mut finalized = vec![false; m + n];

    while remaining_supply.iter().any(|s| *s > 0) {
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        parent.iter_mut().for_each(|p| *p = None);
        finalized.iter_mut().for_each(|f| *f = false);

        let mut heap: BinaryHeap<Reverse<HeapItem>> = BinaryHeap::new();
        for (i, s) in remaining_supply.iter().enumerate() {
            if *s > 0 {
                dist[i] = 0.0;
                heap.push(Reverse(HeapItem(0.0, i as u32)));
            }
        }

        let mut sink_found = None;
        while let Some(Reverse(HeapItem(d, node))) = heap.pop() {
            let node = node as usize;
            if finalized[node] {
                continue;
            }
            finalized[node] = true;
            if node >= m && remaining_demand[node - m] > 0 {
                sink_found = Some(node - m);
                break;
            }
            if node < m {
                let i = node;
                for j in 0..n {
                    let rc = (cost(i, j) + potential[i] - potential[m + j]).max(0.0);
                    let nd = d + rc;
                    if nd < dist[m + j] {
                        dist[m + j] = nd;
                        parent[m + j] = Some(i);
                        heap.push(Reverse(HeapItem(nd, (m + j) as u32)));
                    }
                }
            } else {
                let j = node - m;
                by_sink[j].retain(|&iu| flow.get(&(iu, j as u32)).is_some_and(|f| *f > 0));
                for &iu in &by_sink[j] {
                    let i = iu as usize;
                    let rc = (-cost(i, j) + potential[m + j] - potential[i]).max(0.0);
                    let nd = d + rc;
                    if nd < dist[i] {
                        dist[i] = nd;
                        parent[i] = Some(m + j);
                        heap.push(Reverse(HeapItem(nd, i as u32)));
                    }
                }
            }
        }

        let Some(t) = sink_found else {
            return Err(Error::InvalidParameter(
                "transport network disconnected; masses do not balance".to_string(),
            ));
        };

        // Walk the augmenting path backwards, collecting arcs.
        let mut path = Vec::new(); // (source, sink, forward?)
        let mut node = m + t;
        while let Some(prev) = parent[node] {
            if prev < m {
                path.push((prev, node - m, true));
            } else {
                path.push((node, prev - m, false));
            }
            node = prev;
        }
        let seed = node; // source the path started from

        let mut bottleneck = remaining_supply[seed].min(remaining_demand[t]);
        for (i, j, forward) in &path {
            if !forward {
                bottleneck = bottleneck.min(flow[&(*i as u32, *j as u32)]);
            }
        }
        debug_assert!(bottleneck > 0);

        for (i, j, forward) in &path {
            let key = (*i as u32, *j as u32);
            if *forward {
                let entry = flow.entry(key).or_insert(0);
                if *entry == 0 {
                    by_sink[*j].push(*i as u32);
                }
                *entry += bottleneck;
            } else {
                let entry = flow.get_mut(&key).unwrap();
                *entry -= bottleneck;
                if *entry == 0 {
                    flow.remove(&key);
                }
            }
        }
        remaining_supply[seed] -= bottleneck;
        remaining_demand[t] -= bottleneck;

        let d_t = dist[m + t];
        for (v, p) in potential.iter_mut().enumerate() {
            *p += dist[v].min(d_t);
        }
    }

    let mut flows: Vec<(usize, usize, Rational)> = flow
        .into_iter()
        .map(|((i, j), f)| {
            (
                i as usize,
                j as usize,
                Rational::new(BigInt::from(f), BigInt::from(scale)),
            )
        })
        .collect();
    flows.sort_by_key(|f| (f.0, f.1));

    let distance = flows
        .iter()
        .map(|(i, j, f)| f.to_f64().unwrap() * cost(*i, *j))
        .sum();

    let plan = TransportPlan {
        source_cells,
        target_cells,
        flows,
        source_potentials: potential[..m].to_vec(),
        target_potentials: potential[m..].to_vec(),
    };
    Ok(Wasserstein1 {
        distance,
        discretization_bound: mu.cell_diameter_f64().max(nu.cell_diameter_f64()),
        plan,
    })
}

type ScaledMasses = (i128, (Vec<i128>, Vec<i128>));

/// Scales both mass vectors by the least common denominator. Returns the
/// scale and the two integer vectors (each summing to the scale).
fn scaled_integer_masses(mu: &GridMeasure, nu: &GridMeasure) -> Result<ScaledMasses> {
    let mut denom = BigInt::from(1);
    for (_, mass) in mu.cells().chain(nu.cells()) {
        denom = denom.lcm(mass.denom());
    }
    let scale = denom
        .to_i128()
        .filter(|s| *s <= MAX_SCALED_SUPPLY)
        .ok_or_else(|| {
            Error::UnsupportedConfiguration(
                "mass denominators too large for exact transport; coarsen the measures"
                    .to_string(),
            )
        })?;
    let to_int = |mass: &Rational| -> i128 {
        let scaled = mass * Rational::from_integer(denom.clone());
        debug_assert!(scaled.is_integer());
        scaled.to_integer().to_i128().expect("scaled mass fits i128")
    };
    let supplies: Vec<i128> = mu.cells().map(|(_, m)| to_int(m)).collect();
    let demands: Vec<i128> = nu.cells().map(|(_, m)| to_int(m)).collect();
    debug_assert_eq!(supplies.iter().sum::<i128>(), scale);
    debug_assert_eq!(demands.iter().sum::<i128>(), scale);
    Ok((scale, (supplies, demands)))
}

struct HeapItem(f64, u32);

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0).is_eq() && self.1 == other.1
    }
}
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::sierpinski_tau;
    use crate::grid::{iterate_markov, DEFAULT_CELL_BUDGET};
    use crate::rational::rat;

    fn point_mass(d: usize, r: usize, cell: Vec<usize>) -> GridMeasure {
        GridMeasure::new(vec![r; d], vec![(cell, rat(1, 1))]).unwrap()
    }

    #[test]
    fn point_masses_pay_the_center_distance() {
        let a = point_mass(3, 2, vec![1, 1, 1]);
        let b = point_mass(3, 2, vec![2, 2, 2]);
        let w = wasserstein1(&a, &b, DEFAULT_TRANSPORT_BUDGET).unwrap();
        let expected = (3.0f64 * 0.25).sqrt(); // centers (1/4,..) and (3/4,..)
        assert!((w.distance - expected).abs() < 1e-12);
        assert_eq!(w.plan.flows.len(), 1);
        assert_eq!(w.plan.flows[0].2, rat(1, 1));
    }

    #[test]
    fn identical_measures_cost_nothing() {
        let mu = crate::constructions::modsum_grid_measure(3, 4).unwrap();
        let w = wasserstein1(&mu, &mu, DEFAULT_TRANSPORT_BUDGET).unwrap();
        assert_eq!(w.distance, 0.0);
        w.plan.verify_feasibility(&mu, &mu).unwrap();
    }

    #[test]
    fn plan_is_feasible_and_slack_free_on_iterates() {
        let t = sierpinski_tau(3, 2).unwrap();
        let iterates =
            iterate_markov(&t, &GridMeasure::lebesgue(3), 3, DEFAULT_CELL_BUDGET).unwrap();
        let w = wasserstein1(&iterates[2], &iterates[3], DEFAULT_TRANSPORT_BUDGET).unwrap();
        w.plan.verify_feasibility(&iterates[2], &iterates[3]).unwrap();
        assert_eq!(w.plan.total_flow(), rat(1, 1));
        let (support_defect, most_negative) = w.plan.slackness_defect(&iterates[2], &iterates[3]);
        assert!(support_defect <= 1e-9, "support defect {support_defect}");
        assert!(most_negative >= -1e-9, "negative rc {most_negative}");
        assert!(w.distance > 0.0);
    }

    #[test]
    fn split_mass_moves_half() {
        // One cell vs an even split across that cell and a neighbor: only
        // half the mass travels.
        let a = GridMeasure::new(vec![2], vec![(vec![1], rat(1, 1))]).unwrap();
        let b = GridMeasure::new(
            vec![2],
            vec![(vec![1], rat(1, 2)), (vec![2], rat(1, 2))],
        )
        .unwrap();
        let w = wasserstein1(&a, &b, DEFAULT_TRANSPORT_BUDGET).unwrap();
        assert!((w.distance - 0.25).abs() < 1e-12);
        w.plan.verify_feasibility(&a, &b).unwrap();
    }

    #[test]
    fn budget_is_enforced() {
        let mu = GridMeasure::uniform(vec![4, 4]);
        assert!(matches!(
            wasserstein1(&mu, &mu, 5),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn symmetry_within_float_noise() {
        let a = crate::constructions::modsum_grid_measure(3, 2).unwrap();
        let b = GridMeasure::uniform(vec![2, 2, 2]);
        let ab = wasserstein1(&a, &b, DEFAULT_TRANSPORT_BUDGET).unwrap();
        let ba = wasserstein1(&b, &a, DEFAULT_TRANSPORT_BUDGET).unwrap();
        assert!((ab.distance - ba.distance).abs() < 1e-10);
    }
}
