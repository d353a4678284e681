//! Seeded Monte Carlo trials over G(n, p) and parameter sweeps.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::formulas::{self, FormulaError};
use crate::certify::{self, CertifyError};
use crate::complex::{count_maximal_cliques, FlagSkeleton};
use crate::graph::{Graph, GraphError, Seed};
use crate::homology::{self, HomologyError, RankMethod};

/// Two-sided normal quantile for 95% intervals.
const Z95: f64 = 1.96;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("trials must be positive")]
    NoTrials,
    #[error("n must be positive")]
    NoVertices,
    #[error("statistic {statistic} needs k >= {min}, got {k}")]
    DegreeTooSmall { statistic: &'static str, min: usize, k: usize },
    #[error("grid must be nonempty")]
    EmptyGrid,
    #[error("grid must be strictly monotone")]
    NonMonotoneGrid,
    #[error("audit is only defined for the certified statistic")]
    AuditWithoutCertificate,
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("trial {stream}: {source}")]
    Trial { stream: u64, source: CertifyError },
}

/// What is measured on each sampled graph. Each statistic has a numeric
/// value and a success event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistic {
    /// `N_{k+1}`; success is `N_{k+1} = 0`.
    MaximalCliques,
    /// `β_k` from the `(k + 1)`-skeleton; success is `β_k = 0`.
    Betti,
    /// Reduced Betti vector of the whole flag complex; value 1 and success
    /// when the support is exactly `{k}`.
    BettiProfile,
    Connected,
    /// Garland certificate for `H^k = 0`.
    Certified,
    /// Żuk certificate on the 2-skeleton.
    PropertyT,
    /// `β_1` of the graph itself, `m - n + components`; success is a forest.
    CycleRank,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::MaximalCliques => "maximal-cliques",
            Statistic::Betti => "betti",
            Statistic::BettiProfile => "betti-profile",
            Statistic::Connected => "connected",
            Statistic::Certified => "certified",
            Statistic::PropertyT => "property-t",
            Statistic::CycleRank => "cycle-rank",
        }
    }

    fn min_degree(self) -> usize {
        match self {
            Statistic::Betti | Statistic::BettiProfile | Statistic::Certified => 1,
            _ => 0,
        }
    }
}

/// Edge probability, either given or through the critical window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeProbability {
    P(f64),
    /// `critical_p(n, k, c)`.
    C(f64),
    /// `upper_threshold(n, k, eps)`.
    Eps(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub n: usize,
    pub k: usize,
    pub edge: EdgeProbability,
    pub trials: usize,
    pub seed: u64,
    pub statistic: Statistic,
    pub method: RankMethod,
    /// Exact `β_k` audit for the certified statistic.
    pub audit: bool,
}

impl TrialConfig {
    pub fn new(n: usize, k: usize, edge: EdgeProbability, statistic: Statistic) -> Self {
        TrialConfig {
            n,
            k,
            edge,
            trials: 300,
            seed: 0,
            statistic,
            method: RankMethod::default(),
            audit: false,
        }
    }

    pub fn p(&self) -> Result<f64, ExperimentError> {
        let n = self.n as f64;
        let p = match self.edge {
            EdgeProbability::P(p) => p,
            EdgeProbability::C(c) => formulas::critical_p(n, self.k, c)?,
            EdgeProbability::Eps(eps) => formulas::upper_threshold(n, self.k, eps)?,
        };
        if !(0.0..=1.0).contains(&p) {
            return Err(GraphError::InvalidProbability(p).into());
        }
        Ok(p)
    }

    /// Rejects configurations that could not run, before any sampling.
    pub fn validate(&self) -> Result<f64, ExperimentError> {
        if self.trials == 0 {
            return Err(ExperimentError::NoTrials);
        }
        if self.n == 0 {
            return Err(ExperimentError::NoVertices);
        }
        let min = self.statistic.min_degree();
        if self.k < min {
            return Err(ExperimentError::DegreeTooSmall {
                statistic: self.statistic.name(),
                min,
                k: self.k,
            });
        }
        if self.audit && self.statistic != Statistic::Certified {
            return Err(ExperimentError::AuditWithoutCertificate);
        }
        self.method.validate()?;
        self.p()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialValue {
    pub stream: u64,
    pub value: u64,
    pub success: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub profile: Option<Vec<usize>>,
    /// Exact `β_k` when audited.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub audit: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// Unbiased sample variance; zero for a single trial.
    pub variance: f64,
    pub ci_half_width: f64,
    pub distribution: BTreeMap<u64, usize>,
    pub success_fraction: f64,
    pub success_ci_half_width: f64,
    /// Audited trials that were certified but have `β_k ≠ 0`.
    pub audit_violations: usize,
}

impl Summary {
    fn of(trials: &[TrialValue]) -> Summary {
        let t = trials.len() as f64;
        let mean = trials.iter().map(|v| v.value as f64).sum::<f64>() / t;
        let variance = if trials.len() > 1 {
            trials.iter().map(|v| (v.value as f64 - mean).powi(2)).sum::<f64>() / (t - 1.0)
        } else {
            0.0
        };
        let mut distribution = BTreeMap::new();
        for v in trials {
            *distribution.entry(v.value).or_insert(0) += 1;
        }
        let success_fraction = trials.iter().filter(|v| v.success).count() as f64 / t;
        Summary {
            mean,
            variance,
            ci_half_width: Z95 * (variance / t).sqrt(),
            distribution,
            success_fraction,
            success_ci_half_width: Z95 * (success_fraction * (1.0 - success_fraction) / t).sqrt(),
            audit_violations: trials
                .iter()
                .filter(|v| v.success && v.audit.is_some_and(|b| b != 0))
                .count(),
        }
    }

    /// Standard error of the mean.
    pub fn standard_error(&self, trials: usize) -> f64 {
        (self.variance / trials as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub config: TrialConfig,
    /// The resolved edge probability.
    pub p: f64,
    pub trials: Vec<TrialValue>,
    pub summary: Summary,
    pub wall_time_ms: u64,
}

impl ExperimentRecord {
    /// One JSON object per trial, newline terminated.
    pub fn trials_jsonl(&self) -> String {
        let mut out = String::new();
        for t in &self.trials {
            out.push_str(&serde_json::to_string(t).expect("trial serializes"));
            out.push('\n');
        }
        out
    }

    /// Everything except the per-trial values.
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "config": self.config,
            "p": self.p,
            "summary": self.summary,
            "wall_time_ms": self.wall_time_ms,
        })
    }

    /// Equality ignoring wall time.
    pub fn same_content(&self, other: &ExperimentRecord) -> bool {
        self.config == other.config
            && self.p == other.p
            && self.trials == other.trials
            && self.summary == other.summary
    }
}

fn measure(cfg: &TrialConfig, p: f64, stream: u64) -> Result<TrialValue, ExperimentError> {
    let g = Graph::sample_gnp(cfg.n, p, Seed::new(cfg.seed, stream))?;
    let k = cfg.k;
    let zero = |value: u64| TrialValue {
        stream,
        value,
        success: value == 0,
        profile: None,
        audit: None,
    };
    let flag = |success: bool| TrialValue {
        stream,
        value: success as u64,
        success,
        profile: None,
        audit: None,
    };
    let value = match cfg.statistic {
        Statistic::MaximalCliques => {
            let count = count_maximal_cliques(&g, k + 1).expect("clique size is positive");
            zero(count as u64)
        }
        Statistic::Betti => {
            let sk = FlagSkeleton::build(&g, k + 1);
            zero(homology::betti_number(&sk, k, &cfg.method)? as u64)
        }
        Statistic::BettiProfile => {
            let sk = FlagSkeleton::full(&g);
            let reduced = homology::betti(&sk, &cfg.method)?.reduced();
            let support: Vec<usize> = (0..reduced.len()).filter(|&d| reduced[d] > 0).collect();
            TrialValue {
                profile: Some(reduced),
                ..flag(support == [k])
            }
        }
        Statistic::Connected => flag(g.is_connected()?),
        Statistic::Certified => {
            let audit = cfg.audit.then_some(RankMethod::Exact);
            let outcome = certify::vanishing_pipeline(&g, k, audit.as_ref())
                .map_err(|source| ExperimentError::Trial { stream, source })?;
            TrialValue {
                audit: outcome.betti_k,
                ..flag(outcome.certificate.is_certified())
            }
        }
        Statistic::PropertyT => {
            let sk = FlagSkeleton::build(&g, 2);
            let cert = certify::zuk_certify(&sk)
                .map_err(|source| ExperimentError::Trial { stream, source })?;
            flag(cert.has_t())
        }
        Statistic::CycleRank => {
            zero((g.edge_count() + g.component_count() - g.n()) as u64)
        }
    };
    Ok(value)
}

/// Runs `config.trials` independent trials on streams `0..trials` of the
/// master seed, in parallel.
pub fn run_trials(config: &TrialConfig) -> Result<ExperimentRecord, ExperimentError> {
    let p = config.validate()?;
    let start = Instant::now();
    let mut trials = (0..config.trials as u64)
        .into_par_iter()
        .map(|stream| measure(config, p, stream))
        .collect::<Result<Vec<_>, _>>()?;
    trials.sort_by_key(|t| t.stream);
    let summary = Summary::of(&trials);
    Ok(ExperimentRecord {
        config: config.clone(),
        p,
        trials,
        summary,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

/// Grid of parameter values for [`sweep`], interpreted as in
/// [`EdgeProbability`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Grid {
    P(Vec<f64>),
    C(Vec<f64>),
    Eps(Vec<f64>),
}

impl Grid {
    pub fn values(&self) -> &[f64] {
        match self {
            Grid::P(v) | Grid::C(v) | Grid::Eps(v) => v,
        }
    }

    fn edge(&self, x: f64) -> EdgeProbability {
        match self {
            Grid::P(_) => EdgeProbability::P(x),
            Grid::C(_) => EdgeProbability::C(x),
            Grid::Eps(_) => EdgeProbability::Eps(x),
        }
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        let v = self.values();
        if v.is_empty() {
            return Err(ExperimentError::EmptyGrid);
        }
        let up = v.windows(2).all(|w| w[0] < w[1]);
        let down = v.windows(2).all(|w| w[0] > w[1]);
        if !(up || down) {
            return Err(ExperimentError::NonMonotoneGrid);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub grid: Grid,
    pub records: Vec<ExperimentRecord>,
    /// Edge probability where the success fraction first passes 1/2.
    pub crossing: Option<f64>,
}

impl SweepResult {
    /// `grid_value,p,success_fraction,ci_half_width` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("grid_value,p,success_fraction,ci_half_width\n");
        for (x, r) in self.grid.values().iter().zip(&self.records) {
            out.push_str(&format!(
                "{},{},{},{}\n",
                x, r.p, r.summary.success_fraction, r.summary.success_ci_half_width
            ));
        }
        out
    }
}

/// Linear interpolation in `p` between the first adjacent pair of points
/// whose success fractions straddle 1/2.
pub fn crossing(points: &[(f64, f64)]) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let ((p0, f0), (p1, f1)) = (w[0], w[1]);
        let straddles = (f0 - 0.5) * (f1 - 0.5) <= 0.0 && f0 != f1;
        straddles.then(|| p0 + (0.5 - f0) * (p1 - p0) / (f1 - f0))
    })
}

/// One record per grid point, all with the template's seed and settings.
pub fn sweep(grid: &Grid, template: &TrialConfig) -> Result<SweepResult, ExperimentError> {
    grid.validate()?;
    let configs: Vec<TrialConfig> = grid
        .values()
        .iter()
        .map(|&x| TrialConfig {
            edge: grid.edge(x),
            ..template.clone()
        })
        .collect();
    for c in &configs {
        c.validate()?;
    }
    let records = configs
        .iter()
        .map(run_trials)
        .collect::<Result<Vec<_>, _>>()?;
    let points: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (r.p, r.summary.success_fraction))
        .collect();
    Ok(SweepResult {
        grid: grid.clone(),
        crossing: crossing(&points),
        records,
    })
}
