//! Closed forms for thresholds and clique counts, and the Monte Carlo
//! harness that checks them.

pub mod formulas;
pub mod harness;
pub mod poisson;

pub use formulas::{
    binomial, critical_p, expected_maximal_cliques, lower_threshold, pittel_probability,
    poisson_mean, upper_threshold, FormulaError, ThresholdParams,
};
pub use harness::{
    crossing, run_trials, sweep, EdgeProbability, ExperimentError, ExperimentRecord, Grid,
    Statistic, Summary, SweepResult, TrialConfig, TrialValue,
};
pub use poisson::{fit_histogram, poisson_pmf, PoissonFit};

/// Fits the value distribution of `record` against Poisson(μ).
pub fn poisson_fit(record: &ExperimentRecord, mu: f64) -> PoissonFit {
    fit_histogram(&record.summary.distribution, mu)
}
