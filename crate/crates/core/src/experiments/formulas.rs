//! Closed-form thresholds and expectations for X(n, p).
//!
//! Logarithms are natural throughout.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormulaError {
    #[error("{what} = {value} is outside the valid range {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },
}

fn out_of_range(what: &'static str, value: f64, range: &'static str) -> FormulaError {
    FormulaError::OutOfRange { what, value, range }
}

/// Parameters shared by the threshold formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdParams {
    pub n: f64,
    pub k: usize,
    pub eps: f64,
    pub c: f64,
}

impl ThresholdParams {
    pub fn upper(&self) -> Result<f64, FormulaError> {
        upper_threshold(self.n, self.k, self.eps)
    }

    pub fn lower(&self) -> Result<f64, FormulaError> {
        lower_threshold(self.n, self.k, self.eps)
    }

    pub fn critical(&self) -> Result<f64, FormulaError> {
        critical_p(self.n, self.k, self.c)
    }
}

fn root_of_probability(base: f64, degree: f64, what: &'static str) -> Result<f64, FormulaError> {
    if !(0.0..=1.0).contains(&base) {
        return Err(out_of_range(what, base, "[0, 1]"));
    }
    Ok(base.powf(1.0 / degree))
}

/// `((k/2 + 1 + ε) ln n / n)^{1/(k+1)}`: above this, `H^k` vanishes w.h.p.
pub fn upper_threshold(n: f64, k: usize, eps: f64) -> Result<f64, FormulaError> {
    if n <= 1.0 {
        return Err(out_of_range("n", n, "(1, ∞)"));
    }
    let base = (k as f64 / 2.0 + 1.0 + eps) * n.ln() / n;
    root_of_probability(base, (k + 1) as f64, "p^(k+1)")
}

/// `((k + 1 + ε) / n)^{1/k}`: the lower end of the window where `H^k ≠ 0`.
pub fn lower_threshold(n: f64, k: usize, eps: f64) -> Result<f64, FormulaError> {
    if k == 0 {
        return Err(out_of_range("k", 0.0, "k >= 1"));
    }
    if n <= 0.0 {
        return Err(out_of_range("n", n, "(0, ∞)"));
    }
    let base = (k as f64 + 1.0 + eps) / n;
    root_of_probability(base, k as f64, "p^k")
}

/// Critical-window parameterization
/// `p = (((k/2 + 1) ln n + (k/2) ln ln n + c) / n)^{1/(k+1)}`.
pub fn critical_p(n: f64, k: usize, c: f64) -> Result<f64, FormulaError> {
    if n <= 1.0 {
        return Err(out_of_range("n", n, "(1, ∞)"));
    }
    let half = k as f64 / 2.0;
    let ln = n.ln();
    let inner = (half + 1.0) * ln + half * ln.ln() + c;
    if !(inner > 0.0 && inner <= n) {
        return Err(out_of_range("n p^(k+1)", inner, "(0, n]"));
    }
    Ok((inner / n).powf(1.0 / (k + 1) as f64))
}

/// `C(n, m)` as a float.
pub fn binomial(n: usize, m: usize) -> f64 {
    if m > n {
        return 0.0;
    }
    let m = m.min(n - m);
    (0..m).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `E[N_{k+1}] = C(n, k+1) p^{C(k+1, 2)} (1 - p^{k+1})^{n-k-1}`, the
/// expected number of maximal `(k + 1)`-cliques in G(n, p).
pub fn expected_maximal_cliques(n: usize, k: usize, p: f64) -> Result<f64, FormulaError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(out_of_range("p", p, "[0, 1]"));
    }
    if n < k + 1 {
        return Ok(0.0);
    }
    let size = k + 1;
    let edges = size * (size - 1) / 2;
    let q = p.powi(size as i32);
    let others = (n - size) as f64;
    let no_common = if others == 0.0 {
        1.0
    } else if q >= 1.0 {
        0.0
    } else {
        (others * (-q).ln_1p()).exp()
    };
    Ok(binomial(n, size) * p.powi(edges as i32) * no_common)
}

/// Limit of `E[N_{k+1}]` along `critical_p(n, k, c)`:
/// `(k/2 + 1)^{k/2} / (k + 1)! · e^{-c}`.
pub fn poisson_mean(k: usize, c: f64) -> f64 {
    let half = k as f64 / 2.0;
    let factorial: f64 = (1..=k + 1).map(|i| i as f64).product();
    (half + 1.0).powf(half) / factorial * (-c).exp()
}

/// Limiting probability that G(n, c/n) is a forest, `√(1 - c) e^{c/2 + c²/4}`.
pub fn pittel_probability(c: f64) -> Result<f64, FormulaError> {
    if !(0.0..1.0).contains(&c) {
        return Err(out_of_range("c", c, "[0, 1)"));
    }
    Ok((1.0 - c).sqrt() * (c / 2.0 + c * c / 4.0).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn upper_threshold_examples() {
        assert!((upper_threshold(100.0, 1, 0.0).unwrap() - 0.262826).abs() < 1e-5);
        assert!((upper_threshold(E, 1, 0.5).unwrap() - (2.0 / E).sqrt()).abs() < 1e-12);
        let a = upper_threshold(500.0, 2, 0.1).unwrap();
        let b = upper_threshold(500.0, 2, 0.4).unwrap();
        assert!(a < b);
        assert!(upper_threshold(E, 1, 2.0).is_err());
        assert!(upper_threshold(1.0, 1, 0.0).is_err());
    }

    #[test]
    fn lower_threshold_examples() {
        assert!((lower_threshold(100.0, 1, 0.0).unwrap() - 0.02).abs() < 1e-15);
        assert!((lower_threshold(64.0, 2, 1.0).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(lower_threshold(37.0, 1, 0.0).unwrap(), 2.0 / 37.0);
        assert!(lower_threshold(2.0, 1, 0.5).is_err());
        assert!(lower_threshold(10.0, 0, 0.0).is_err());
    }

    #[test]
    fn critical_p_examples() {
        assert!((critical_p(200.0, 1, 0.0).unwrap() - 0.20954).abs() < 1e-5);
        assert!(critical_p(200.0, 1, -1.0).unwrap() < critical_p(200.0, 1, 1.0).unwrap());
        assert!(critical_p(200.0, 1, 1e6).is_err());
        assert!(critical_p(200.0, 1, -100.0).is_err());
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(expected_maximal_cliques(5, 1, 1.0).unwrap(), 0.0);
        assert_eq!(expected_maximal_cliques(5, 0, 0.0).unwrap(), 5.0);
        assert!((expected_maximal_cliques(4, 1, 0.5).unwrap() - 1.6875).abs() < 1e-15);
        assert_eq!(expected_maximal_cliques(2, 3, 0.5).unwrap(), 0.0);
        assert_eq!(expected_maximal_cliques(3, 2, 1.0).unwrap(), 1.0);
        assert!(expected_maximal_cliques(3, 1, 1.5).is_err());
    }

    #[test]
    fn poisson_mean_examples() {
        assert!((poisson_mean(1, 0.0) - 1.5f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((poisson_mean(1, 0.0) - 0.61237).abs() < 1e-5);
        assert!((poisson_mean(2, 0.0) - 1.0 / 3.0).abs() < 1e-15);
        assert!(poisson_mean(1, 50.0) < 1e-20);
    }

    #[test]
    fn pittel_examples() {
        assert_eq!(pittel_probability(0.0).unwrap(), 1.0);
        assert!((pittel_probability(0.5).unwrap() - 0.96651).abs() < 1e-5);
        assert!(pittel_probability(1.0 - 1e-12).unwrap() < 1e-5);
        assert!(pittel_probability(1.0).is_err());
        assert!(pittel_probability(-0.1).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(30, 2), 435.0);
        assert_eq!(binomial(6, 7), 0.0);
        assert_eq!(binomial(10, 0), 1.0);
        assert!((binomial(200, 2) - 19900.0).abs() < 1e-9);
    }
}
