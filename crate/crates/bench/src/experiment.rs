//! Seeded cost sweeps over SBM graphs.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use pruned_pivot::analysis::dep_size_all;
use pruned_pivot::pivot::{
    limit_by_height, narrow_pivot, prune_by_dep_size, recursion_heights, sequential_pivot,
};
use pruned_pivot::{Ranking, Seed};

use crate::sbm::{sbm_generate, SbmConfig};
use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Pivot,
    RPivot,
    NarrowPivot,
    PrunedPivot,
    /// Every node alone; cost equals the edge count.
    Singleton,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Pivot,
        Algorithm::RPivot,
        Algorithm::NarrowPivot,
        Algorithm::PrunedPivot,
        Algorithm::Singleton,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Pivot => "pivot",
            Algorithm::RPivot => "r_pivot",
            Algorithm::NarrowPivot => "narrow_pivot",
            Algorithm::PrunedPivot => "pruned_pivot",
            Algorithm::Singleton => "singleton",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| BenchError::Config(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// `seed` inside is ignored; graphs are seeded per trial.
    pub sbm: SbmConfig,
    pub trials: usize,
    pub r_min: usize,
    pub r_max: usize,
    pub algorithms: Vec<Algorithm>,
    pub seed: Seed,
    /// Worker threads; `None` uses the available parallelism.
    pub jobs: Option<usize>,
}

impl ExperimentConfig {
    pub fn paper(seed: Seed) -> Self {
        ExperimentConfig {
            sbm: SbmConfig::paper(seed),
            trials: 100,
            r_min: 2,
            r_max: 30,
            algorithms: vec![
                Algorithm::Pivot,
                Algorithm::RPivot,
                Algorithm::NarrowPivot,
                Algorithm::PrunedPivot,
            ],
            seed,
            jobs: None,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        self.sbm.validate()?;
        if self.trials == 0 {
            return Err(BenchError::Config("trials must be at least 1".into()));
        }
        if self.r_min == 0 || self.r_min > self.r_max {
            return Err(BenchError::Config(format!(
                "need 1 <= r_min <= r_max, got {}..{}",
                self.r_min, self.r_max
            )));
        }
        if self.algorithms.is_empty() {
            return Err(BenchError::Config("no algorithms selected".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRow {
    pub algorithm: Algorithm,
    pub r: usize,
    pub trial: usize,
    pub cost: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggRow {
    pub algorithm: Algorithm,
    pub r: usize,
    pub sum: u64,
    pub trials: usize,
    pub std: f64,
}

impl AggRow {
    pub fn mean(&self) -> f64 {
        self.sum as f64 / self.trials as f64
    }

    pub fn mean_string(&self) -> String {
        mean_2dp(self.sum, self.trials as u64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub raw: Vec<RawRow>,
    pub agg: Vec<AggRow>,
}

impl ExperimentResult {
    pub fn aggregate(&self, algorithm: Algorithm, r: usize) -> Option<&AggRow> {
        self.agg
            .iter()
            .find(|a| a.algorithm == algorithm && a.r == r)
    }

    pub fn write_raw<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "algorithm,R,trial,cost")?;
        for row in &self.raw {
            writeln!(
                out,
                "{},{},{},{}",
                row.algorithm, row.r, row.trial, row.cost
            )?;
        }
        Ok(())
    }

    pub fn write_agg<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "algorithm,R,mean,std")?;
        for row in &self.agg {
            writeln!(
                out,
                "{},{},{},{:.2}",
                row.algorithm,
                row.r,
                row.mean_string(),
                row.std
            )?;
        }
        Ok(())
    }
}

/// `sum / count` to two decimals, rounding half to even, exactly.
pub fn mean_2dp(sum: u64, count: u64) -> String {
    assert!(count > 0);
    let x = sum as u128 * 100;
    let c = count as u128;
    let (mut q, rem) = (x / c, x % c);
    if 2 * rem > c || (2 * rem == c && q % 2 == 1) {
        q += 1;
    }
    format!("{}.{:02}", q / 100, q % 100)
}

/// Sample standard deviation; zero for fewer than two samples.
pub fn sample_std(values: &[u64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<u64>() as f64 / n as f64;
    let ss: f64 = values.iter().map(|&v| (v as f64 - mean).powi(2)).sum();
    (ss / (n - 1) as f64).sqrt()
}

/// Costs of one trial, indexed `[algorithm][r - r_min]`.
fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<Vec<Vec<u64>>, BenchError> {
    let ts = cfg.seed.derive(trial as u64);
    let sbm = SbmConfig {
        seed: ts.derive(0),
        ..cfg.sbm
    };
    let g = sbm_generate(&sbm)?;
    let r = Ranking::random_permutation(g.n(), ts.derive(1))?;
    let (pivot, trace) = sequential_pivot(&g, &r)?;
    let pivot_cost = pivot.cost(&g);
    let needs = |a| cfg.algorithms.contains(&a);
    let dep = needs(Algorithm::PrunedPivot).then(|| dep_size_all(&trace, &g));
    let heights = needs(Algorithm::RPivot).then(|| recursion_heights(&trace, &g));

    let rs = cfg.r_min..=cfg.r_max;
    cfg.algorithms
        .iter()
        .map(|&a| {
            rs.clone()
                .map(|rr| {
                    Ok(match a {
                        Algorithm::Pivot => pivot_cost,
                        Algorithm::Singleton => g.m() as u64,
                        Algorithm::PrunedPivot => {
                            prune_by_dep_size(&trace, dep.as_deref().unwrap(), rr).cost(&g)
                        }
                        Algorithm::RPivot => {
                            limit_by_height(&trace, heights.as_deref().unwrap(), rr).cost(&g)
                        }
                        Algorithm::NarrowPivot => narrow_pivot(&g, &r, rr)?.cost(&g),
                    })
                })
                .collect()
        })
        .collect()
}

/// Runs every trial (in parallel), then lays rows out in
/// `(algorithm, R, trial)` order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, BenchError> {
    cfg.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| BenchError::Config(format!("thread pool: {e}")))?;
    let per_trial: Vec<Vec<Vec<u64>>> = pool.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(cfg, t))
            .collect::<Result<_, _>>()
    })?;

    let mut raw = Vec::new();
    let mut agg = Vec::new();
    for (ai, &a) in cfg.algorithms.iter().enumerate() {
        for (ri, rr) in (cfg.r_min..=cfg.r_max).enumerate() {
            let costs: Vec<u64> = per_trial.iter().map(|t| t[ai][ri]).collect();
            for (trial, &cost) in costs.iter().enumerate() {
                raw.push(RawRow {
                    algorithm: a,
                    r: rr,
                    trial,
                    cost,
                });
            }
            agg.push(AggRow {
                algorithm: a,
                r: rr,
                sum: costs.iter().sum(),
                trials: cfg.trials,
                std: sample_std(&costs),
            });
        }
    }
    Ok(ExperimentResult { raw, agg })
}
