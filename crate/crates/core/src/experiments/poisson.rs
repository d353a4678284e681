//! Goodness of fit of an empirical count distribution against Poisson(μ).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Poisson mass below this is dropped from the comparison.
pub const TAIL_MASS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonFit {
    pub mu: f64,
    pub tv_distance: f64,
    /// Pearson statistic over bins `0..tail_start` and `>= tail_start`.
    pub chi2: f64,
    pub dof: usize,
    pub tail_start: usize,
}

/// `P[X = j]` for `j = 0..=max`.
pub fn poisson_pmf(mu: f64, max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(max + 1);
    let mut term = (-mu).exp();
    for j in 0..=max {
        if j > 0 {
            term *= mu / j as f64;
        }
        out.push(term);
    }
    out
}

/// Smallest `j` with `P[X > j] < TAIL_MASS`.
fn truncation_point(mu: f64) -> usize {
    let mut cdf = 0.0;
    let mut term = (-mu).exp();
    let mut j = 0;
    loop {
        cdf += term;
        if 1.0 - cdf < TAIL_MASS {
            return j;
        }
        j += 1;
        term *= mu / j as f64;
    }
}

/// Compares the counts `histogram[value] = occurrences` with Poisson(μ).
pub fn fit_histogram(histogram: &BTreeMap<u64, usize>, mu: f64) -> PoissonFit {
    let total: usize = histogram.values().sum();
    let observed_max = histogram.keys().next_back().copied().unwrap_or(0) as usize;
    let top = truncation_point(mu).max(observed_max);
    let pmf = poisson_pmf(mu, top);
    let freq = |j: usize| {
        if total == 0 {
            0.0
        } else {
            histogram.get(&(j as u64)).copied().unwrap_or(0) as f64 / total as f64
        }
    };
    let tv_distance = 0.5 * (0..=top).map(|j| (freq(j) - pmf[j]).abs()).sum::<f64>();

    // bins 0..L individually and a pooled tail >= L, with L as large as
    // keeps the tail's expected count at least 5
    let t = total as f64;
    let tail_from = |l: usize| 1.0 - pmf[..l].iter().sum::<f64>();
    let mut tail_start = 1;
    while tail_start < top && t * tail_from(tail_start + 1) >= 5.0 {
        tail_start += 1;
    }
    let mut chi2 = 0.0;
    for (j, &p) in pmf.iter().enumerate().take(tail_start) {
        let expected = t * p;
        if expected > 0.0 {
            chi2 += (freq(j) * t - expected).powi(2) / expected;
        }
    }
    let tail_expected = t * tail_from(tail_start);
    let tail_observed: f64 = (tail_start..=top).map(|j| freq(j) * t).sum();
    if tail_expected > 0.0 {
        chi2 += (tail_observed - tail_expected).powi(2) / tail_expected;
    }
    PoissonFit {
        mu,
        tv_distance,
        chi2,
        dof: tail_start,
        tail_start,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_poisson_has_zero_distance() {
        // frequencies exactly proportional to the pmf, scaled up
        let mu: f64 = 0.5;
        let pmf = poisson_pmf(mu, 30);
        let scale = 1e12;
        let hist: BTreeMap<u64, usize> = pmf
            .iter()
            .enumerate()
            .map(|(j, p)| (j as u64, (p * scale).round() as usize))
            .filter(|(_, c)| *c > 0)
            .collect();
        let fit = fit_histogram(&hist, mu);
        assert!(fit.tv_distance < 1e-6, "{}", fit.tv_distance);
    }

    #[test]
    fn point_mass_against_unit_mean() {
        let hist = BTreeMap::from([(0u64, 1000usize)]);
        let fit = fit_histogram(&hist, 1.0);
        assert!((fit.tv_distance - (1.0 - (-1f64).exp())).abs() < 1e-6);
        assert!(fit.chi2 > 100.0);
    }

    #[test]
    fn observed_values_beyond_truncation_count() {
        let hist = BTreeMap::from([(40u64, 10usize)]);
        let fit = fit_histogram(&hist, 0.5);
        assert!((fit.tv_distance - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pmf_sums_to_one() {
        for mu in [0.1, 0.61237, 3.0, 12.0] {
            let s: f64 = poisson_pmf(mu, 200).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
            let j = truncation_point(mu);
            let tail = 1.0 - poisson_pmf(mu, j).iter().sum::<f64>();
            assert!(tail < TAIL_MASS);
        }
    }
}
