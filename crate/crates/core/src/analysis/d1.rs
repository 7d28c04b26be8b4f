//! Integrated L1 distance between the conditional-distribution kernels of
//! two grid measures with uniform base marginals. Kernels of grid measures
//! are piecewise constant in the conditioning variables and piecewise
//! linear in the conditioned one, so the double integral has a closed form
//! per cell pair and the result is exact.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use crate::analysis::marginal::first_nonuniform_cell;
use crate::error::{Error, Result};
use crate::grid::GridMeasure;
use crate::rational::{lcm_usize, rat_usize, Rational};

/// Per-base-cell cumulative kernel values of a grid measure: entry `s` of a
/// cdf is `K(x, [0, s/r_y])` for `x` in that base cell.
pub(crate) fn kernel_cdf_table(mu: &GridMeasure) -> BTreeMap<Vec<usize>, Vec<Rational>> {
    let d = mu.d();
    let y_res = mu.resolution()[d - 1];
    let base_volume: Rational = mu.resolution()[..d - 1]
        .iter()
        .map(|&r| rat_usize(1, r))
        .product();
    let mut masses: BTreeMap<Vec<usize>, Vec<Rational>> = BTreeMap::new();
    for (cell, mass) in mu.cells() {
        let base = cell[..d - 1].to_vec();
        let y = cell[d - 1];
        let slot = masses
            .entry(base)
            .or_insert_with(|| vec![Rational::zero(); y_res]);
        slot[y - 1] += mass;
    }
    masses
        .into_iter()
        .map(|(base, levels)| {
            let mut cdf = Vec::with_capacity(y_res + 1);
            let mut acc = Rational::zero();
            cdf.push(acc.clone());
            for level in levels {
                acc += level / &base_volume;
                cdf.push(acc.clone());
            }
            debug_assert!(cdf.last().unwrap().is_one(), "kernel must normalize");
            (base, cdf)
        })
        .collect()
}

/// Linear interpolation of a cdf at the refined knot `s/l_y`, where `l_y`
/// is a multiple of the cdf's own resolution.
fn cdf_at(cdf: &[Rational], y_res: usize, s: usize, l_y: usize) -> Rational {
    let q = l_y / y_res;
    let idx = s / q;
    let rem = s % q;
    if rem == 0 {
        cdf[idx].clone()
    } else {
        &cdf[idx] + (&cdf[idx + 1] - &cdf[idx]) * rat_usize(rem, q)
    }
}

/// Integral of `|a + (b - a) t/h|` over `t` in `[0, h]`.
fn segment_abs_integral(a: &Rational, b: &Rational, h: &Rational) -> Rational {
    if (a.is_negative() && b.is_positive()) || (a.is_positive() && b.is_negative()) {
        let abs_a = a.abs();
        let abs_b = b.abs();
        h * (a * a + b * b) / ((&abs_a + &abs_b) * rat_usize(2, 1))
    } else {
        h * (a.abs() + b.abs()) / rat_usize(2, 1)
    }
}

fn require_uniform_base(mu: &GridMeasure, side: &'static str) -> Result<()> {
    let drop = mu.d() - 1;
    if let Some((cell, mass)) = first_nonuniform_cell(mu, drop)? {
        let total: usize = mu.resolution()[..drop].iter().product();
        return Err(Error::NonUniformBaseMarginal {
            side,
            fiber: format!("{cell:?}"),
            mass: Box::new(mass),
            expected: Box::new(rat_usize(1, total)),
        });
    }
    Ok(())
}

/// Exact value of the kernel metric
/// `int int |K_mu(x, [0,y]) - K_nu(x, [0,y])| dlambda(x) dlambda(y)`.
/// Both measures must have an exactly uniform marginal over the first `d-1`
/// coordinates.
pub fn d1_distance(mu: &GridMeasure, nu: &GridMeasure) -> Result<Rational> {
    if mu.d() != nu.d() {
        return Err(Error::ShapeMismatch(format!(
            "dimension {} vs {}",
            mu.d(),
            nu.d()
        )));
    }
    if mu.d() < 2 {
        return Err(Error::InvalidParameter(
            "kernel metric needs at least two coordinates".to_string(),
        ));
    }
    require_uniform_base(mu, "first operand")?;
    require_uniform_base(nu, "second operand")?;

    let d = mu.d();
    let base_refined: Vec<usize> = (0..d - 1)
        .map(|j| lcm_usize(mu.resolution()[j], nu.resolution()[j]))
        .collect();
    let y_mu = mu.resolution()[d - 1];
    let y_nu = nu.resolution()[d - 1];
    let l_y = lcm_usize(y_mu, y_nu);

    let table_mu = kernel_cdf_table(mu);
    let table_nu = kernel_cdf_table(nu);

    let h = rat_usize(1, l_y);
    let mut total = Rational::zero();
    for refined in crate::matrix::lex_grid(&base_refined) {
        let coarse = |res: &[usize]| -> Vec<usize> {
            refined
                .iter()
                .zip(res)
                .zip(&base_refined)
                .map(|((&rb, &r), &l)| (rb - 1) * r / l + 1)
                .collect()
        };
        let cdf_mu = &table_mu[&coarse(mu.resolution())];
        let cdf_nu = &table_nu[&coarse(nu.resolution())];
        let mut prev = Rational::zero(); // both cdfs start at 0
        for s in 1..=l_y {
            let next = cdf_at(cdf_mu, y_mu, s, l_y) - cdf_at(cdf_nu, y_nu, s, l_y);
            total += segment_abs_integral(&prev, &next, &h);
            prev = next;
        }
    }
    let base_volume: Rational = base_refined.iter().map(|&l| rat_usize(1, l)).product();
    Ok(total * base_volume)
}
