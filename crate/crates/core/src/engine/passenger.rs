use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cabin::Coord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PaxState {
    Queued,
    AtDoor,
    Walking,
    /// Stowing luggage at the row entry cell, then settling into the row.
    Storing,
    InterferenceActor,
    InterferenceDisplaced,
    Seated,
    /// Leaving the seat row towards the aisle.
    Standing,
    Retrieving,
    Exited,
}

impl PaxState {
    pub fn as_str(self) -> &'static str {
        match self {
            PaxState::Queued => "queued",
            PaxState::AtDoor => "at_door",
            PaxState::Walking => "walking",
            PaxState::Storing => "storing",
            PaxState::InterferenceActor => "interference_actor",
            PaxState::InterferenceDisplaced => "interference_displaced",
            PaxState::Seated => "seated",
            PaxState::Standing => "standing",
            PaxState::Retrieving => "retrieving",
            PaxState::Exited => "exited",
        }
    }

    /// Transitions allowed by the passenger state machine.
    pub fn can_become(self, next: PaxState) -> bool {
        use PaxState::*;
        matches!(
            (self, next),
            (Queued, AtDoor)
                | (AtDoor, Walking)
                | (Walking, Storing)
                | (Storing, InterferenceActor)
                | (Storing, Seated)
                | (InterferenceActor, Seated)
                | (Seated, InterferenceDisplaced)
                | (InterferenceDisplaced, Seated)
                | (Seated, Standing)
                | (Standing, Retrieving)
                | (Retrieving, Walking)
                | (Walking, Exited)
        )
    }
}

impl fmt::Display for PaxState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One simulated passenger.
#[derive(Debug, Clone)]
pub struct Passenger {
    pub id: usize,
    /// Index into the cabin's seat list.
    pub seat: usize,
    /// Index into the cabin's door list.
    pub door: usize,
    /// Luggage stow/retrieve time, seconds.
    pub t_lug: f64,
    /// Occupancy time of one horizontal cell, seconds.
    pub t_h: f64,
    pub t_door: f64,
    pub state: PaxState,
    pub position: Option<Coord>,
    pub(crate) ready_at: u64,
    pub(crate) came_from: Option<Coord>,
    pub(crate) moves: u64,
    pub(crate) route: VecDeque<Coord>,
    pub(crate) settle: bool,
    pub(crate) maneuver: Option<usize>,
    pub(crate) finished_at: Option<u64>,
}

impl Passenger {
    pub(crate) fn new(id: usize, seat: usize, door: usize, t_lug: f64, t_h: f64, t_door: f64) -> Self {
        Passenger {
            id,
            seat,
            door,
            t_lug,
            t_h,
            t_door,
            state: PaxState::Queued,
            position: None,
            ready_at: 0,
            came_from: None,
            moves: 0,
            route: VecDeque::new(),
            settle: false,
            maneuver: None,
            finished_at: None,
        }
    }

    /// Ticks left before the passenger may act again.
    pub fn dwell_remaining(&self, tick: u64) -> u64 {
        self.ready_at.saturating_sub(tick)
    }
}
