//! Monte Carlo batches, parameter sweeps and throughput rates.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{run, SimConfig, SimResult};
use crate::error::{RateError, SimError};
use crate::stochastic::{ActionTime, RngSeed};

pub const DEFAULT_RUNS: usize = 200;

/// What one run of a batch contributes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub seed: u64,
    pub elapsed: f64,
    pub n_pax: usize,
    pub interference_count: usize,
}

impl RunSummary {
    fn new(seed: u64, r: &SimResult) -> Self {
        RunSummary {
            seed,
            elapsed: r.elapsed,
            n_pax: r.n_pax,
            interference_count: r.interference_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFailure {
    pub seed: u64,
    pub message: String,
}

/// Aggregate of the successful runs of a batch, in seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchStats {
    pub n_runs: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Sample standard deviation (zero for a single run).
    pub std: f64,
    pub n_pax: usize,
    pub n_doors: usize,
    pub per_run: Vec<RunSummary>,
    pub failures: Vec<RunFailure>,
}

impl BatchStats {
    pub fn from_runs(per_run: Vec<RunSummary>, failures: Vec<RunFailure>, n_doors: usize) -> Option<Self> {
        let n = per_run.len();
        if n == 0 {
            return None;
        }
        let times = per_run.iter().map(|r| r.elapsed);
        let mean = times.clone().sum::<f64>() / n as f64;
        let min = times.clone().fold(f64::INFINITY, f64::min);
        let max = times.clone().fold(f64::NEG_INFINITY, f64::max);
        let std = if n > 1 {
            (times.map(|t| (t - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Some(BatchStats {
            n_runs: n,
            // Guard the ordering invariant against summation rounding.
            mean: mean.clamp(min, max),
            min,
            max,
            std,
            n_pax: per_run[0].n_pax,
            n_doors,
            per_run,
            failures,
        })
    }

    /// Passengers per minute per door at the batch mean.
    pub fn rate(&self) -> Result<f64, RateError> {
        compute_rate(self.n_pax, self.n_doors, self.mean)
    }
}

/// Runs seeds `base_seed .. base_seed + n_runs` in parallel.
///
/// A run that hits the tick ceiling is recorded in `failures`; the batch
/// fails only when the configuration is invalid or no run succeeds.
pub fn run_batch(config: &SimConfig, n_runs: usize, base_seed: u64) -> Result<BatchStats, SimError> {
    if n_runs == 0 {
        return Err(SimError::Config(crate::error::ConfigError::Invalid(
            "a batch needs at least one run".into(),
        )));
    }
    config.validate()?;
    let n_doors = config.active_door_indices()?.len();
    let outcomes: Vec<(u64, Result<SimResult, SimError>)> = (0..n_runs as u64)
        .into_par_iter()
        .map(|i| {
            let seed = base_seed.wrapping_add(i);
            let mut cfg = config.clone();
            cfg.seed = RngSeed(seed);
            cfg.record_events = false;
            (seed, run(&cfg))
        })
        .collect();
    let mut per_run = Vec::with_capacity(n_runs);
    let mut failures = Vec::new();
    let mut first_error = None;
    for (seed, outcome) in outcomes {
        match outcome {
            Ok(r) => per_run.push(RunSummary::new(seed, &r)),
            Err(e) => {
                failures.push(RunFailure { seed, message: e.to_string() });
                first_error.get_or_insert(e);
            }
        }
    }
    match BatchStats::from_runs(per_run, failures, n_doors) {
        Some(stats) => Ok(stats),
        None => Err(first_error.expect("every run failed")),
    }
}

/// `n_pax / (elapsed / 60) / n_doors`.
pub fn compute_rate(n_pax: usize, n_doors: usize, elapsed: f64) -> Result<f64, RateError> {
    if !(elapsed > 0.0 && elapsed.is_finite()) {
        return Err(RateError::Division);
    }
    if n_pax == 0 || n_doors == 0 {
        return Err(RateError::Invalid);
    }
    Ok(n_pax as f64 / (elapsed / 60.0) / n_doors as f64)
}

/// Grid of a parameter sweep. Empty optional grids keep the base config value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub interference_factors: Vec<f64>,
    pub load_factors: Vec<f64>,
    #[serde(default)]
    pub luggage: Vec<ActionTime>,
    /// Each entry is one set of active door ids.
    #[serde(default)]
    pub doors: Vec<Vec<u8>>,
    pub n_runs: usize,
    pub base_seed: u64,
}

impl SweepSpec {
    pub fn new(interference_factors: Vec<f64>, load_factors: Vec<f64>) -> Self {
        SweepSpec {
            interference_factors,
            load_factors,
            luggage: Vec::new(),
            doors: Vec::new(),
            n_runs: DEFAULT_RUNS,
            base_seed: 0,
        }
    }
}

/// One line of the long-format sweep table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "IF")]
    pub interference_factor: f64,
    #[serde(rename = "LF")]
    pub load_factor: f64,
    pub t_lug: String,
    pub n_doors: usize,
    pub n_runs: usize,
    pub mean_s: f64,
    pub min_s: f64,
    pub max_s: f64,
    pub std_s: f64,
    pub rate: f64,
}

impl SweepRow {
    pub fn new(cfg: &SimConfig, stats: &BatchStats) -> Self {
        SweepRow {
            interference_factor: cfg.interference_factor,
            load_factor: cfg.load_factor,
            t_lug: cfg.luggage.label(),
            n_doors: stats.n_doors,
            n_runs: stats.n_runs,
            mean_s: stats.mean,
            min_s: stats.min,
            max_s: stats.max,
            std_s: stats.std,
            rate: stats.rate().unwrap_or(f64::NAN),
        }
    }
}

/// Cartesian product over IF × LF × luggage × doors, one batch per point,
/// in that nesting order.
pub fn sweep(base: &SimConfig, spec: &SweepSpec) -> Result<Vec<(SweepRow, BatchStats)>, SimError> {
    if spec.interference_factors.is_empty() || spec.load_factors.is_empty() {
        return Err(SimError::Config(crate::error::ConfigError::Invalid(
            "sweep grids must not be empty".into(),
        )));
    }
    let luggage: Vec<ActionTime> = if spec.luggage.is_empty() {
        vec![base.luggage]
    } else {
        spec.luggage.clone()
    };
    let doors: Vec<Option<Vec<u8>>> = if spec.doors.is_empty() {
        vec![base.active_doors.clone()]
    } else {
        spec.doors.iter().cloned().map(Some).collect()
    };
    let mut out = Vec::new();
    for &if_ in &spec.interference_factors {
        for &lf in &spec.load_factors {
            for lug in &luggage {
                for d in &doors {
                    let mut cfg = base.clone();
                    cfg.interference_factor = if_;
                    cfg.load_factor = lf;
                    cfg.luggage = *lug;
                    cfg.active_doors = d.clone();
                    let stats = run_batch(&cfg, spec.n_runs, spec.base_seed)?;
                    out.push((SweepRow::new(&cfg, &stats), stats));
                }
            }
        }
    }
    Ok(out)
}

pub fn write_rows_csv<W: Write>(rows: &[SweepRow], writer: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
