//! Tick-based boarding and deboarding simulation.
//!
//! Every passenger is a small state machine updated once per tick in
//! ascending index order. A passenger that enters a cell occupies it for a
//! dwell time (its walking time, the seat-cell holding time, luggage handling,
//! or the door check) quantized up to whole ticks.

mod interference;
mod passenger;
mod sim;
mod step;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cabin::{gamma, CabinGrid, Coord, DistanceField};
use crate::error::{ConfigError, SimError};
use crate::stochastic::{ActionTime, RngSeed, WeibullParams};
use crate::strategies::{passenger_count, BoardingStrategy};

pub use interference::{blockers_for, resolve_seat_interference, InterferencePlan};
pub use passenger::{PaxState, Passenger};
pub use sim::Simulation;
pub use step::{attempt_overtake, next_step, Move};

/// Multiplier applied to every sampled walking time.
///
/// With 0.1 the walking-time parameters read as simulation ticks rather
/// than seconds: a median passenger crosses a 0.76 m cell in about 0.4 s.
/// This is the value that reproduces the single-aisle boarding and
/// deboarding times; at 1.0 slow walkers lead convoys that make every
/// single-aisle cabin three to four times slower than observed.
pub const DEFAULT_WALK_SCALE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Boarding,
    Deboarding,
}

impl FromStr for Direction {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "board" | "boarding" => Ok(Direction::Boarding),
            "deboard" | "deboarding" => Ok(Direction::Deboarding),
            _ => Err(ConfigError::Invalid(format!("unknown direction `{s}`"))),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Boarding => "boarding",
            Direction::Deboarding => "deboarding",
        })
    }
}

/// A parsed cabin plus the distance fields every run needs. Build it once and
/// share it between runs.
#[derive(Debug)]
pub struct Cabin {
    grid: CabinGrid,
    gamma: f64,
    entry_fields: HashMap<Coord, DistanceField>,
    door_fields: Vec<DistanceField>,
}

impl Cabin {
    pub fn new(grid: CabinGrid) -> Self {
        let mut entry_fields = HashMap::new();
        for seat in grid.seats() {
            entry_fields
                .entry(seat.row_entry_cell)
                .or_insert_with(|| DistanceField::towards(&grid, seat.row_entry_cell));
        }
        let door_fields = grid
            .doors()
            .iter()
            .map(|d| DistanceField::towards(&grid, d.cell))
            .collect();
        Cabin {
            gamma: gamma(&grid),
            grid,
            entry_fields,
            door_fields,
        }
    }

    pub fn grid(&self) -> &CabinGrid {
        &self.grid
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub(crate) fn entry_field(&self, entry: Coord) -> &DistanceField {
        &self.entry_fields[&entry]
    }

    pub(crate) fn door_field(&self, door: usize) -> &DistanceField {
        &self.door_fields[door]
    }
}

/// Inputs of one run.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub cabin: Arc<Cabin>,
    pub load_factor: f64,
    pub interference_factor: f64,
    /// Door ids in use; `None` opens every door of the layout.
    pub active_doors: Option<Vec<u8>>,
    pub luggage: ActionTime,
    pub walk: ActionTime,
    pub walk_scale: f64,
    pub direction: Direction,
    pub strategy: BoardingStrategy,
    pub seed: RngSeed,
    /// Seconds per tick.
    pub tick: f64,
    /// Deboarding: doors open after this many seconds.
    pub equipment_delay: f64,
    pub door_time: f64,
    /// Holding time per seat cell walked inside a row.
    pub seat_time: f64,
    /// Split passengers evenly over the doors instead of nearest-door.
    pub balance_doors: bool,
    pub max_ticks: u64,
    pub record_events: bool,
    /// Explicit occupied seats (indices into the grid's seat list) replacing
    /// the random draw.
    pub seating: Option<Vec<usize>>,
}

impl SimConfig {
    pub fn new(cabin: Arc<Cabin>) -> Self {
        SimConfig {
            cabin,
            load_factor: 1.0,
            interference_factor: 0.0,
            active_doors: None,
            luggage: ActionTime::Weibull(WeibullParams::LUGGAGE_A),
            walk: ActionTime::Weibull(WeibullParams::WALK),
            walk_scale: DEFAULT_WALK_SCALE,
            direction: Direction::Boarding,
            strategy: BoardingStrategy::Random,
            seed: RngSeed(0),
            tick: 0.1,
            equipment_delay: 120.0,
            door_time: 2.0,
            seat_time: 1.8,
            balance_doors: false,
            max_ticks: 1_000_000,
            record_events: false,
            seating: None,
        }
    }

    pub fn grid(&self) -> &CabinGrid {
        self.cabin.grid()
    }

    /// Indices (into the grid's door list) of the doors used by this run.
    pub fn active_door_indices(&self) -> Result<Vec<usize>, ConfigError> {
        let grid = self.grid();
        match &self.active_doors {
            None => Ok((0..grid.doors().len()).collect()),
            Some(ids) => {
                let mut out = Vec::with_capacity(ids.len());
                for &id in ids {
                    let (idx, _) = grid
                        .door_by_id(id)
                        .ok_or_else(|| ConfigError::Invalid(format!("layout has no door {id}")))?;
                    if !out.contains(&idx) {
                        out.push(idx);
                    }
                }
                if out.is_empty() {
                    return Err(ConfigError::Invalid("no active doors".into()));
                }
                out.sort_unstable();
                Ok(out)
            }
        }
    }

    pub fn n_pax(&self) -> usize {
        match &self.seating {
            Some(s) => s.len(),
            None => passenger_count(self.grid(), self.load_factor),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(ConfigError::Invalid(format!("{name} must lie in [0, 1], got {v}")))
            }
        };
        unit("load factor", self.load_factor)?;
        unit("interference factor", self.interference_factor)?;
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::Invalid(format!("{name} must be positive, got {v}")))
            }
        };
        positive("tick", self.tick)?;
        positive("walk scale", self.walk_scale)?;
        positive("seat time", self.seat_time)?;
        for (name, v) in [("door time", self.door_time), ("equipment delay", self.equipment_delay)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(ConfigError::Invalid(format!("{name} must be non-negative, got {v}")));
            }
        }
        if let ActionTime::Constant(v) = self.luggage {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(ConfigError::Invalid(format!("luggage time must be non-negative, got {v}")));
            }
        }
        if let ActionTime::Constant(v) = self.walk {
            positive("walking time", v)?;
        }
        self.active_door_indices()?;
        if let Some(seats) = &self.seating {
            let n = self.grid().seats().len();
            let mut seen = vec![false; n];
            for &s in seats {
                if s >= n || std::mem::replace(&mut seen[s], true) {
                    return Err(ConfigError::Invalid(format!("bad seat index {s} in seating")));
                }
            }
        }
        if self.n_pax() == 0 {
            return Err(ConfigError::Invalid("no passengers to simulate".into()));
        }
        Ok(())
    }
}

/// One recorded state change or move.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub tick: u64,
    pub passenger: usize,
    pub state: PaxState,
    pub x: Option<usize>,
    pub y: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassengerSummary {
    pub id: usize,
    pub seat: String,
    pub door: u8,
    pub t_lug: f64,
    pub t_h: f64,
    /// Seated (boarding) or exit (deboarding) time, seconds.
    pub finished_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeatOccupant {
    pub seat: String,
    pub passenger: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimResult {
    pub direction: Direction,
    /// Boarding or deboarding time, seconds.
    pub elapsed: f64,
    pub ticks: u64,
    pub n_pax: usize,
    pub n_doors: usize,
    pub interference_count: usize,
    pub passengers: Vec<PassengerSummary>,
    pub final_occupancy: Vec<SeatOccupant>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub events: Vec<Event>,
}

/// State of a run that hit the tick ceiling.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Snapshot {
    pub tick: u64,
    pub unfinished: usize,
    pub passengers: Vec<(usize, PaxState, Option<Coord>)>,
}

/// Runs one simulation to completion.
pub fn run(config: &SimConfig) -> Result<SimResult, SimError> {
    let mut sim = Simulation::new(config)?;
    while !sim.is_done() {
        if sim.tick() >= config.max_ticks {
            return Err(SimError::Deadlock(Box::new(sim.snapshot())));
        }
        sim.step();
    }
    Ok(sim.into_result())
}
