//! Two-sided Kolmogorov-Smirnov test against Uniform[0,1] with the
//! asymptotic p-value.

use crate::error::{Error, Result};

/// Minimum sample size for the asymptotic distribution to be trusted.
pub const MIN_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Supremum distance between the empirical cdf and the Uniform[0,1] cdf,
/// with `p = Q(sqrt(n) * D)` from the Kolmogorov series.
pub fn ks_uniformity(values: &[f64]) -> Result<KsResult> {
    if values.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            got: values.len(),
            need: MIN_SAMPLES,
        });
    }
    if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::InvalidParameter(
            "KS uniformity test needs values in [0,1]".to_string(),
        ));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len();
    let nf = n as f64;
    let mut statistic = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let upper = (i + 1) as f64 / nf - x;
        let lower = x - i as f64 / nf;
        statistic = statistic.max(upper).max(lower);
    }
    Ok(KsResult {
        statistic,
        p_value: kolmogorov_survival(nf.sqrt() * statistic),
        n,
    })
}

/// `Q(t) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2)`, clamped to [0,1].
fn kolmogorov_survival(t: f64) -> f64 {
    if t < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0f64;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64) * (k as f64) * t * t).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}
