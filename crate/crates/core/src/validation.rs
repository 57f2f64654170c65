//! Reference boarding, deboarding, rate and turnaround figures, and the
//! batches that check the model against them.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::engine::{Cabin, Direction, SimConfig};
use crate::error::{ConfigError, SimError};
use crate::experiment::{run_batch, BatchStats};
use crate::layouts;
use crate::stochastic::ActionTime;
use crate::turnaround::{build_network, cpm_schedule, preset, to_f64};

/// Relative tolerance on simulated means and rates.
pub const REL_TOLERANCE: f64 = 0.10;
/// Absolute tolerance on turnaround times, minutes.
pub const TAT_TOLERANCE: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Target {
    /// Mean time in seconds, optionally with bounds on every run.
    Seconds { mean: f64, scatter: Option<(f64, f64)> },
    /// Passengers per minute per door at the batch mean.
    Rate(f64),
}

/// One simulated reference configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimCase {
    pub label: &'static str,
    pub layout: &'static str,
    pub luggage: &'static str,
    pub load_factor: f64,
    pub doors: &'static [u8],
    pub direction: Direction,
    pub interference_factor: f64,
    pub balance_doors: bool,
    pub target: Target,
}

impl SimCase {
    pub fn config(&self) -> Result<SimConfig, ConfigError> {
        let grid = layouts::builtin(self.layout)
            .ok_or_else(|| ConfigError::Invalid(format!("unknown layout `{}`", self.layout)))?;
        let mut cfg = SimConfig::new(Arc::new(Cabin::new(grid)));
        cfg.load_factor = self.load_factor;
        cfg.luggage = ActionTime::preset(self.luggage)
            .ok_or_else(|| ConfigError::Invalid(format!("unknown luggage preset `{}`", self.luggage)))?;
        cfg.active_doors = Some(self.doors.to_vec());
        cfg.direction = self.direction;
        cfg.interference_factor = self.interference_factor;
        cfg.balance_doors = self.balance_doors;
        Ok(cfg)
    }

    pub fn check(&self, stats: &BatchStats) -> CaseResult {
        match self.target {
            Target::Seconds { mean, scatter } => {
                let within = (stats.mean - mean).abs() <= REL_TOLERANCE * mean;
                let scatter_ok = scatter.is_none_or(|(lo, hi)| stats.min >= lo && stats.max <= hi);
                let note = match scatter {
                    Some((lo, hi)) => format!(
                        "runs {} to {} (bounds {} to {})",
                        mmss(stats.min),
                        mmss(stats.max),
                        mmss(lo),
                        mmss(hi)
                    ),
                    None => String::new(),
                };
                CaseResult {
                    label: self.label.into(),
                    expected: mean,
                    actual: stats.mean,
                    unit: "s".into(),
                    pass: within && scatter_ok && stats.failures.is_empty(),
                    note: with_failures(note, stats),
                }
            }
            Target::Rate(rate) => {
                let actual = stats.rate().unwrap_or(f64::NAN);
                CaseResult {
                    label: self.label.into(),
                    expected: rate,
                    actual,
                    unit: "pax/min/door".into(),
                    pass: (actual - rate).abs() <= REL_TOLERANCE * rate && stats.failures.is_empty(),
                    note: with_failures(format!("mean {}", mmss(stats.mean)), stats),
                }
            }
        }
    }
}

fn with_failures(note: String, stats: &BatchStats) -> String {
    if stats.failures.is_empty() {
        note
    } else {
        format!("{note}; {} runs hit the tick ceiling", stats.failures.len())
    }
}

/// `m:ss` rendering of seconds.
pub fn mmss(seconds: f64) -> String {
    let s = seconds.round() as i64;
    format!("{}:{:02}", s / 60, s % 60)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub label: String,
    pub expected: f64,
    pub actual: f64,
    pub unit: String,
    pub pass: bool,
    pub note: String,
}

const fn secs(m: u32, s: u32) -> f64 {
    (m * 60 + s) as f64
}

const fn time(mean: f64) -> Target {
    Target::Seconds { mean, scatter: None }
}

const fn case(
    label: &'static str,
    layout: &'static str,
    luggage: &'static str,
    load_factor: f64,
    doors: &'static [u8],
    direction: Direction,
    target: Target,
) -> SimCase {
    SimCase {
        label,
        layout,
        luggage,
        load_factor,
        doors,
        direction,
        interference_factor: 0.0,
        balance_doors: false,
        target,
    }
}

const fn prp(label: &'static str, doors: &'static [u8], direction: Direction, rate: f64) -> SimCase {
    SimCase {
        label,
        layout: "prp-wide",
        luggage: "A",
        load_factor: 1.0,
        doors,
        direction,
        interference_factor: 0.5,
        balance_doors: true,
        target: Target::Rate(rate),
    }
}

use Direction::{Boarding as B, Deboarding as D};

/// Conventional aircraft, simulated boarding times.
pub const TABLE3: &[SimCase] = &[
    case("B737 LF 0.85 1 door", "b737", "B", 0.85, &[1], B, time(secs(13, 55))),
    case("B737 LF 0.94 1 door", "b737", "B", 0.94, &[1], B, time(secs(15, 11))),
    case("A320 LF 0.94 2 doors", "a320", "B", 0.94, &[1, 2], B, time(secs(7, 55))),
    case(
        "B767 LF 0.87 1 door",
        "b767",
        "A",
        0.87,
        &[1],
        B,
        Target::Seconds { mean: secs(12, 57), scatter: Some((secs(12, 5), secs(14, 45))) },
    ),
    case(
        "A330 LF 1 2 doors",
        "a330",
        "A",
        1.0,
        &[1, 2],
        B,
        Target::Seconds { mean: secs(9, 50), scatter: Some((secs(8, 20), secs(11, 15))) },
    ),
];

/// Conventional aircraft, simulated deboarding times.
pub const TABLE4: &[SimCase] = &[
    case("B737 LF 0.85 1 door", "b737", "B", 0.85, &[1], D, time(secs(9, 0))),
    case("B737 LF 0.94 1 door", "b737", "B", 0.94, &[1], D, time(secs(9, 50))),
    case("A320 LF 0.94 2 doors", "a320", "B", 0.94, &[1, 2], D, time(secs(5, 0))),
    case("B767 LF 0.87 1 door", "b767", "A", 0.87, &[1], D, time(secs(10, 40))),
    case("A330 LF 1 2 doors", "a330", "A", 1.0, &[1, 2], D, time(secs(6, 0))),
];

/// PrandtlPlane boarding and deboarding rates at LF 1, IF 0.5.
pub const TABLE6: &[SimCase] = &[
    prp("PrP boarding 1 door", &[1], B, 18.7),
    prp("PrP boarding 2 doors", &[1, 3], B, 17.7),
    prp("PrP boarding 3 doors", &[1, 2, 3], B, 17.1),
    prp("PrP deboarding 1 door", &[1], D, 26.8),
    prp("PrP deboarding 2 doors", &[1, 3], D, 26.5),
    prp("PrP deboarding 3 doors", &[1, 2, 3], D, 25.7),
];

/// Turnaround presets and their reference TAT in minutes.
pub const TABLE7: &[(&str, f64)] = &[
    ("prp_full", 55.0),
    ("a320_full", 44.0),
    ("prp_outstation", 24.5),
    ("a320_outstation", 22.0),
];

pub const SUITES: &[&str] = &["table3", "table4", "table6", "table7"];

pub fn sim_cases(suite: &str) -> Option<&'static [SimCase]> {
    match suite {
        "table3" => Some(TABLE3),
        "table4" => Some(TABLE4),
        "table6" => Some(TABLE6),
        _ => None,
    }
}

pub fn run_sim_case(case: &SimCase, n_runs: usize, base_seed: u64) -> Result<(CaseResult, BatchStats), SimError> {
    let stats = run_batch(&case.config()?, n_runs, base_seed)?;
    Ok((case.check(&stats), stats))
}

pub fn tat_cases() -> Vec<CaseResult> {
    TABLE7
        .iter()
        .map(|&(name, expected)| {
            let scenario = preset(name).expect("shipped scenario");
            let schedule = cpm_schedule(&build_network(&scenario).expect("valid scenario")).expect("acyclic");
            let actual = to_f64(schedule.tat);
            CaseResult {
                label: name.into(),
                expected,
                actual,
                unit: "min".into(),
                pass: (actual - expected).abs() <= TAT_TOLERANCE,
                note: String::new(),
            }
        })
        .collect()
}

/// Runs a whole suite by name.
pub fn run_suite(suite: &str, n_runs: usize, base_seed: u64) -> Result<Vec<CaseResult>, SimError> {
    if suite == "table7" {
        return Ok(tat_cases());
    }
    let cases = sim_cases(suite)
        .ok_or_else(|| ConfigError::Invalid(format!("unknown suite `{suite}`; expected one of {SUITES:?}")))?;
    cases
        .iter()
        .map(|c| run_sim_case(c, n_runs, base_seed).map(|(r, _)| r))
        .collect()
}
