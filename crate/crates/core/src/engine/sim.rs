use std::collections::VecDeque;

use rand_chacha::ChaCha8Rng;

use super::interference::resolve_seat_interference;
use super::passenger::{PaxState, Passenger};
use super::step::{attempt_overtake, next_step, Move};
use super::{
    Cabin, Direction, Event, PassengerSummary, SeatOccupant, SimConfig, SimResult, Snapshot,
};
use crate::cabin::{manhattan_distance, CellKind, Coord, DistanceField};
use crate::error::ConfigError;
use crate::stochastic::{ORDER_STREAM, SEAT_STREAM};
use crate::strategies::{assign_doors, assign_seats, entry_order};

const EMPTY: u32 = u32::MAX;

/// How long a maneuver waits for its hold cells before falling back to a
/// timed wait.
const HOLD_TIMEOUT_S: f64 = 30.0;

/// Deboarding luggage factor for single-lane aisles.
const NARROW_AISLE_RETRIEVAL: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    /// Actor is stowing luggage on the entry cell.
    Storing,
    /// Locking the hold cells one by one.
    Acquire { since: u64 },
    /// Actor steps aside while the blockers leave the row.
    Clear,
    /// Actor walks to its seat.
    Seat,
    /// Blockers walk back, innermost first.
    Return,
    /// No room in the aisle: the actor waits out the maneuver on the entry
    /// cell and is then seated directly.
    Virtual { until: u64 },
}

#[derive(Debug, Clone)]
struct Maneuver {
    actor: usize,
    entry: Coord,
    aside: Option<Coord>,
    dir: isize,
    holds: Vec<Coord>,
    blockers: Vec<usize>,
    phase: Phase,
    locked: Vec<Coord>,
}

/// A single run, advanced one tick at a time.
pub struct Simulation<'a> {
    cfg: &'a SimConfig,
    cabin: &'a Cabin,
    tick: u64,
    pax: Vec<Passenger>,
    rngs: Vec<ChaCha8Rng>,
    /// Cached overtake decision: (blocker, blocker move count, allowed).
    memo: Vec<Option<(u32, u64, bool)>>,
    occ: Vec<u32>,
    lock: Vec<u32>,
    queues: Vec<VecDeque<usize>>,
    open_tick: u64,
    maneuvers: Vec<Option<Maneuver>>,
    n_doors: usize,
    finished: usize,
    interference_count: usize,
    first_exit: Option<u64>,
    last_finish: u64,
    events: Vec<Event>,
}

impl<'a> Simulation<'a> {
    pub fn new(cfg: &'a SimConfig) -> Result<Self, ConfigError> {
        cfg.validate()?;
        let cabin: &Cabin = &cfg.cabin;
        let grid = cabin.grid();
        let doors = cfg.active_door_indices()?;
        let seats = match &cfg.seating {
            Some(s) => {
                let mut s = s.clone();
                s.sort_unstable();
                s
            }
            None => assign_seats(grid, cfg.load_factor, &mut cfg.seed.stream(SEAT_STREAM)),
        };
        let order = match cfg.direction {
            Direction::Boarding => {
                entry_order(&cfg.strategy, grid, &seats, &mut cfg.seed.stream(ORDER_STREAM))?
            }
            Direction::Deboarding => seats.clone(),
        };
        let door_of = assign_doors(grid, &order, &doors, cfg.balance_doors);
        let mut plan: Vec<(usize, usize)> = order.into_iter().zip(door_of).collect();
        if cfg.direction == Direction::Deboarding {
            // Update passengers nearest their exit first.
            plan.sort_by_key(|&(s, d)| {
                let seat = &grid.seats()[s];
                (
                    manhattan_distance(seat.row_entry_cell, grid.doors()[d].cell),
                    seat.depth(),
                    s,
                )
            });
        }

        let lug_factor = match cfg.direction {
            Direction::Deboarding if grid.is_narrow_aisle() => NARROW_AISLE_RETRIEVAL,
            _ => 1.0,
        };
        let mut pax = Vec::with_capacity(plan.len());
        let mut rngs = Vec::with_capacity(plan.len());
        for (id, &(seat, door)) in plan.iter().enumerate() {
            let mut rng = cfg.seed.stream(id as u64);
            let t_lug = cfg.luggage.sample(&mut rng) * lug_factor;
            let t_h = cfg.walk.sample(&mut rng) * cfg.walk_scale;
            pax.push(Passenger::new(id, seat, door, t_lug, t_h, cfg.door_time));
            rngs.push(rng);
        }

        let n = grid.n_cells();
        let mut sim = Simulation {
            cfg,
            cabin,
            tick: 0,
            memo: vec![None; pax.len()],
            occ: vec![EMPTY; n],
            lock: vec![EMPTY; n],
            queues: vec![VecDeque::new(); grid.doors().len()],
            open_tick: match cfg.direction {
                Direction::Boarding => 0,
                Direction::Deboarding => ticks(cfg.equipment_delay, cfg.tick, 0),
            },
            maneuvers: Vec::new(),
            n_doors: doors.len(),
            finished: 0,
            interference_count: 0,
            first_exit: None,
            last_finish: 0,
            events: Vec::new(),
            pax,
            rngs,
        };
        match cfg.direction {
            Direction::Boarding => {
                for p in &sim.pax {
                    sim.queues[p.door].push_back(p.id);
                }
                sim.feed_doors();
            }
            Direction::Deboarding => {
                for i in 0..sim.pax.len() {
                    let cell = grid.seats()[sim.pax[i].seat].cell;
                    sim.occ[grid.index(cell)] = i as u32;
                    sim.pax[i].position = Some(cell);
                    sim.pax[i].state = PaxState::Seated;
                    sim.record(i);
                }
            }
        }
        Ok(sim)
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn passengers(&self) -> &[Passenger] {
        &self.pax
    }

    /// Passenger standing or sitting on `c`.
    pub fn occupant(&self, c: Coord) -> Option<usize> {
        let v = self.occ[self.cabin.grid().index(c)];
        (v != EMPTY).then_some(v as usize)
    }

    /// True when `c` is reserved by a seat-interference maneuver.
    pub fn is_locked(&self, c: Coord) -> bool {
        self.lock[self.cabin.grid().index(c)] != EMPTY
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn is_done(&self) -> bool {
        self.finished == self.pax.len()
    }

    pub fn interference_count(&self) -> usize {
        self.interference_count
    }

    /// Advances the simulation by one tick.
    pub fn step(&mut self) {
        self.tick += 1;
        self.run_maneuvers();
        for i in 0..self.pax.len() {
            self.update(i);
        }
        if self.cfg.direction == Direction::Boarding {
            self.feed_doors();
        }
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            tick: self.tick,
            unfinished: self.pax.len() - self.finished,
            passengers: self.pax.iter().map(|p| (p.id, p.state, p.position)).collect(),
        }
    }

    pub fn into_result(self) -> SimResult {
        let cabin = self.cabin;
        let grid = cabin.grid();
        let dt = self.cfg.tick;
        let elapsed_ticks = match self.cfg.direction {
            Direction::Boarding => self.last_finish,
            Direction::Deboarding => self.last_finish - self.first_exit.unwrap_or(self.last_finish),
        };
        let passengers = self
            .pax
            .iter()
            .map(|p| PassengerSummary {
                id: p.id,
                seat: grid.seats()[p.seat].id.clone(),
                door: grid.doors()[p.door].id,
                t_lug: p.t_lug,
                t_h: p.t_h,
                finished_s: p.finished_at.unwrap_or(0) as f64 * dt,
            })
            .collect();
        let final_occupancy = grid
            .seats()
            .iter()
            .filter_map(|s| {
                let v = self.occ[grid.index(s.cell)];
                (v != EMPTY).then(|| SeatOccupant {
                    seat: s.id.clone(),
                    passenger: v as usize,
                })
            })
            .collect();
        SimResult {
            direction: self.cfg.direction,
            elapsed: elapsed_ticks as f64 * dt,
            ticks: self.tick,
            n_pax: self.pax.len(),
            n_doors: self.n_doors,
            interference_count: self.interference_count,
            passengers,
            final_occupancy,
            events: self.events,
        }
    }

    fn record(&mut self, i: usize) {
        if self.cfg.record_events {
            let p = &self.pax[i];
            self.events.push(Event {
                tick: self.tick,
                passenger: i,
                state: p.state,
                x: p.position.map(|c| c.x),
                y: p.position.map(|c| c.y),
            });
        }
    }

    fn set_state(&mut self, i: usize, next: PaxState) {
        let p = &mut self.pax[i];
        assert!(p.state.can_become(next), "illegal transition {} -> {next}", p.state);
        p.state = next;
        self.record(i);
    }

    fn idx(&self, c: Coord) -> usize {
        self.cabin.grid().index(c)
    }

    /// Free for a passenger taking part in maneuver `own` (if any).
    fn free_for(&self, c: Coord, own: Option<usize>) -> bool {
        let i = self.idx(c);
        self.occ[i] == EMPTY && (self.lock[i] == EMPTY || own.is_some_and(|m| self.lock[i] == m as u32))
    }

    fn move_to(&mut self, i: usize, to: Coord, dwell: f64, min_ticks: u64) {
        let to_idx = self.idx(to);
        assert_eq!(self.occ[to_idx], EMPTY, "cell {to} entered while occupied");
        if let Some(from) = self.pax[i].position {
            let from_idx = self.idx(from);
            debug_assert_eq!(self.occ[from_idx], i as u32);
            self.occ[from_idx] = EMPTY;
        }
        self.occ[to_idx] = i as u32;
        let tick = self.tick;
        let p = &mut self.pax[i];
        p.came_from = p.position;
        p.position = Some(to);
        p.moves += 1;
        p.ready_at = tick + ticks(dwell, self.cfg.tick, min_ticks);
        self.record(i);
    }

    fn vacate(&mut self, i: usize) {
        if let Some(c) = self.pax[i].position.take() {
            let ci = self.idx(c);
            self.occ[ci] = EMPTY;
        }
    }

    /// Dwell for stepping from `from` into `to`.
    fn move_cost(&self, i: usize, from: Coord, to: Coord) -> f64 {
        let cabin = self.cabin;
        let grid = cabin.grid();
        if grid.kind(to) == CellKind::Seat {
            return self.cfg.seat_time;
        }
        let t_h = self.pax[i].t_h;
        if from.y != to.y {
            t_h / self.cabin.gamma()
        } else {
            t_h
        }
    }

    fn finish(&mut self, i: usize) {
        self.pax[i].finished_at = Some(self.tick);
        self.finished += 1;
        self.last_finish = self.last_finish.max(self.tick);
    }

    fn feed_doors(&mut self) {
        let cabin = self.cabin;
        let grid = cabin.grid();
        for d in 0..self.queues.len() {
            let cell = grid.doors()[d].cell;
            if self.queues[d].is_empty() || !self.free_for(cell, None) {
                continue;
            }
            let i = self.queues[d].pop_front().unwrap();
            let dwell = self.cfg.door_time;
            self.pax[i].state = PaxState::AtDoor;
            self.move_to(i, cell, dwell, 0);
        }
    }

    fn update(&mut self, i: usize) {
        // Zero-length actions (e.g. no luggage) chain within the tick.
        for _ in 0..8 {
            if self.pax[i].ready_at > self.tick || !self.act(i) {
                return;
            }
        }
    }

    /// Performs the next action of passenger `i`; false when it has to wait.
    fn act(&mut self, i: usize) -> bool {
        use PaxState::*;
        match (self.cfg.direction, self.pax[i].state) {
            (_, Queued | Exited) => false,
            (Direction::Boarding, AtDoor | Walking) => self.board_walk(i),
            (_, Storing | InterferenceActor | InterferenceDisplaced) => self.in_row(i),
            (Direction::Boarding, Seated) => false,
            (Direction::Deboarding, Seated) => self.stand_up(i),
            (Direction::Deboarding, Standing) => self.leave_row(i),
            (Direction::Deboarding, Retrieving) => {
                self.set_state(i, Walking);
                true
            }
            (Direction::Deboarding, Walking) => self.deboard_walk(i),
            (Direction::Deboarding, AtDoor) | (Direction::Boarding, Standing | Retrieving) => {
                unreachable!("state not used in this direction")
            }
        }
    }

    fn board_walk(&mut self, i: usize) -> bool {
        let cabin = self.cabin;
        let grid = cabin.grid();
        let seat = &grid.seats()[self.pax[i].seat];
        let entry = seat.row_entry_cell;
        let pos = self.pax[i].position.expect("walking passenger on grid");
        if pos == entry {
            let t_lug = self.pax[i].t_lug;
            self.set_state(i, PaxState::Storing);
            self.pax[i].ready_at = self.tick + ticks(t_lug, self.cfg.tick, 0);
            return true;
        }
        let field = cabin.entry_field(entry);
        let Some(to) = self.choose_step(i, pos, field) else {
            return self.try_swap(i, pos, field);
        };
        let cost = self.move_cost(i, pos, to);
        if self.pax[i].state == PaxState::AtDoor {
            self.set_state(i, PaxState::Walking);
        }
        self.move_to(i, to, cost, 1);
        if to == entry {
            self.on_entry_arrival(i, pos);
        }
        true
    }

    fn choose_step(&mut self, i: usize, pos: Coord, field: &DistanceField) -> Option<Coord> {
        let cabin = self.cabin;
        let grid = cabin.grid();
        let interference_factor = self.cfg.interference_factor;
        let door_open = self.tick >= self.open_tick;
        let own = self.pax[i].maneuver;
        let came_from = self.pax[i].came_from;
        let (occ, lock, pax) = (&self.occ, &self.lock, &self.pax);
        let rng = &mut self.rngs[i];
        let memo = &mut self.memo[i];
        let free = |c: Coord| {
            let k = grid.index(c);
            let walkable = match grid.kind(c) {
                CellKind::Aisle => true,
                CellKind::Door => door_open,
                _ => false,
            };
            walkable && occ[k] == EMPTY && (lock[k] == EMPTY || own.is_some_and(|m| lock[k] == m as u32))
        };
        let may_overtake = |blocked: Coord| {
            let j = occ[grid.index(blocked)];
            if j == EMPTY {
                return true;
            }
            let b = &pax[j as usize];
            if !matches!(b.state, PaxState::Storing | PaxState::Retrieving) {
                return true;
            }
            if let Some((id, moves, allowed)) = *memo {
                if id == j && moves == b.moves {
                    return allowed;
                }
            }
            let allowed = attempt_overtake(interference_factor, rng);
            *memo = Some((j, b.moves, allowed));
            allowed
        };
        let mv = next_step(grid, pos, came_from, |c| field.get(grid, c), free, may_overtake);
        match mv {
            Move::Stay => None,
            mv => mv.apply(pos),
        }
    }

    /// Two walkers that each want the other's cell trade places. Without this
    /// a pair heading for facing rows across a two-lane aisle can block each
    /// other for good.
    fn try_swap(&mut self, i: usize, pos: Coord, field: &DistanceField) -> bool {
        let cabin = self.cabin;
        let grid = cabin.grid();
        let here = field.get(grid, pos);
        let tick = self.tick;
        let partner = crate::cabin::DIRECTIONS.iter().find_map(|&(dx, dy)| {
            let n = grid.neighbor(pos, dx, dy)?;
            if grid.kind(n) != CellKind::Aisle || field.get(grid, n) >= here {
                return None;
            }
            let j = self.occ[grid.index(n)];
            if j == EMPTY || self.lock[grid.index(n)] != EMPTY || self.lock[grid.index(pos)] != EMPTY {
                return None;
            }
            let q = &self.pax[j as usize];
            if q.state != PaxState::Walking || q.ready_at > tick || q.maneuver.is_some() {
                return None;
            }
            let target = grid.seats()[q.seat].row_entry_cell;
            let theirs = cabin.entry_field(target);
            (theirs.get(grid, pos) < theirs.get(grid, n)).then_some((j as usize, n))
        });
        let Some((j, n)) = partner else {
            return false;
        };
        let (ci, cj) = (self.move_cost(i, pos, n), self.move_cost(j, n, pos));
        self.vacate(j);
        self.move_to(i, n, ci, 1);
        self.move_to(j, pos, cj, 1);
        for (p, from, at) in [(i, pos, n), (j, n, pos)] {
            self.pax[p].came_from = Some(from);
            if at == grid.seats()[self.pax[p].seat].row_entry_cell {
                self.on_entry_arrival(p, from);
            }
        }
        true
    }

    /// Reserves the entry cell, and the cell just left if it is now empty,
    /// when the row may need a seat-interference maneuver.
    fn on_entry_arrival(&mut self, i: usize, from: Coord) {
        let cabin = self.cabin;
        let grid = cabin.grid();
        let seat = &grid.seats()[self.pax[i].seat];
        let entry = seat.row_entry_cell;
        let inner = &seat.approach[..seat.approach.len() - 1];
        if inner.iter().all(|&c| self.occ[grid.index(c)] == EMPTY) {
            return;
        }
        let door = grid.doors()[self.pax[i].door].cell;
        let dir = if entry.x < door.x { -1 } else { 1 };
        let m = self.maneuvers.len();
        let mut locked = vec![entry];
        let k = grid.index(from);
        let aside = (grid.kind(from) == CellKind::Aisle && self.lock[k] == EMPTY && self.occ[k] == EMPTY)
            .then_some(from);
        locked.extend(aside);
        for &c in &locked {
            let k = grid.index(c);
            debug_assert_eq!(self.lock[k], EMPTY);
            self.lock[k] = m as u32;
        }
        self.maneuvers.push(Some(Maneuver {
            actor: i,
            entry,
            aside,
            dir,
            holds: Vec::new(),
            blockers: Vec::new(),
            phase: Phase::Storing,
            locked,
        }));
        self.pax[i].maneuver = Some(m);
    }

    /// Walking inside a row or along a maneuver route.
    fn in_row(&mut self, i: usize) -> bool {
        if let Some(&next) = self.pax[i].route.front() {
            if !self.free_for(next, self.pax[i].maneuver) {
                return false;
            }
            let from = self.pax[i].position.expect("route walker on grid");
            let cost = self.move_cost(i, from, next);
            self.move_to(i, next, cost, 1);
            self.pax[i].route.pop_front();
            return true;
        }
        if self.pax[i].settle {
            self.pax[i].settle = false;
            self.set_state(i, PaxState::Seated);
            self.finish(i);
            return false;
        }
        if self.pax[i].state == PaxState::Storing && self.pax[i].maneuver.is_none() {
            let cabin = self.cabin;
            let grid = cabin.grid();
            let seat = &grid.seats()[self.pax[i].seat];
            let inner = &seat.approach[..seat.approach.len() - 1];
            if inner.iter().any(|&c| self.occ[grid.index(c)] != EMPTY) {
                return false;
            }
            self.pax[i].route = seat.approach.iter().copied().collect();
            self.pax[i].settle = true;
            return true;
        }
        false
    }

    fn stand_up(&mut self, i: usize) -> bool {
        let cabin = self.cabin;
        let grid = cabin.grid();
        let seat = &grid.seats()[self.pax[i].seat];
        let next = if seat.depth() == 0 {
            seat.row_entry_cell
        } else {
            seat.approach[seat.depth() - 1]
        };
        if !self.free_for(next, None) {
            return false;
        }
        self.pax[i].route = seat.approach[..seat.depth()]
            .iter()
            .rev()
            .copied()
            .chain(std::iter::once(seat.row_entry_cell))
            .collect();
        self.set_state(i, PaxState::Standing);
        true
    }

    fn leave_row(&mut self, i: usize) -> bool {
        let Some(&next) = self.pax[i].route.front() else {
            return false;
        };
        if !self.free_for(next, None) {
            return false;
        }
        let from = self.pax[i].position.expect("standing passenger on grid");
        let mut cost = self.move_cost(i, from, next);
        self.pax[i].route.pop_front();
        let arrived = self.pax[i].route.is_empty();
        if arrived {
            cost += self.pax[i].t_lug;
        }
        self.move_to(i, next, cost, 1);
        if arrived {
            self.set_state(i, PaxState::Retrieving);
        }
        true
    }

    fn deboard_walk(&mut self, i: usize) -> bool {
        let cabin = self.cabin;
        let grid = cabin.grid();
        let door = grid.doors()[self.pax[i].door].cell;
        let pos = self.pax[i].position.expect("walking passenger on grid");
        if pos == door {
            self.vacate(i);
            self.set_state(i, PaxState::Exited);
            self.first_exit.get_or_insert(self.tick);
            self.finish(i);
            return false;
        }
        let field = cabin.door_field(self.pax[i].door);
        let Some(to) = self.choose_step(i, pos, field) else {
            return false;
        };
        let cost = self.move_cost(i, pos, to);
        self.move_to(i, to, cost, 1);
        true
    }

    fn run_maneuvers(&mut self) {
        for m in 0..self.maneuvers.len() {
            if self.maneuvers[m].is_some() {
                self.advance_maneuver(m);
            }
        }
    }

    fn advance_maneuver(&mut self, m: usize) {
        let cabin = self.cabin;
        let grid = cabin.grid();
        let man = self.maneuvers[m].as_ref().unwrap();
        let actor = man.actor;
        let tick = self.tick;
        match man.phase {
            Phase::Storing => {
                let a = &self.pax[actor];
                if a.state != PaxState::Storing || a.ready_at > tick {
                    return;
                }
                let seat = &grid.seats()[a.seat];
                let inner = &seat.approach[..seat.approach.len() - 1];
                let in_transit = inner.iter().any(|&c| {
                    let v = self.occ[grid.index(c)];
                    v != EMPTY && self.pax[v as usize].state != PaxState::Seated
                });
                if in_transit {
                    return;
                }
                let man = self.maneuvers[m].as_ref().unwrap();
                let came_from = man.aside.unwrap_or(man.entry);
                let plan = resolve_seat_interference(grid, seat, came_from, man.dir, |c| {
                    let v = self.occ[grid.index(c)];
                    (v != EMPTY).then_some(v as usize)
                });
                let Some(plan) = plan else {
                    // Everyone in the way has moved on: enter the row normally.
                    self.release(m);
                    return;
                };
                self.interference_count += 1;
                let man = self.maneuvers[m].as_mut().unwrap();
                man.blockers = plan.blockers;
                match plan.holds {
                    Some(holds) if man.aside.is_some() => {
                        man.holds = holds;
                        man.phase = Phase::Acquire { since: tick };
                    }
                    _ => self.start_virtual(m),
                }
            }
            Phase::Acquire { since } => {
                let holds = man.holds.clone();
                let mut all = true;
                for h in holds {
                    let k = grid.index(h);
                    if self.lock[k] == m as u32 {
                        continue;
                    }
                    if self.lock[k] == EMPTY && self.occ[k] == EMPTY {
                        self.lock[k] = m as u32;
                        self.maneuvers[m].as_mut().unwrap().locked.push(h);
                    } else {
                        all = false;
                        break;
                    }
                }
                if all {
                    self.start_clearing(m);
                } else if (tick - since) as f64 * self.cfg.tick > HOLD_TIMEOUT_S {
                    let man = self.maneuvers[m].as_mut().unwrap();
                    let holds = std::mem::take(&mut man.holds);
                    man.locked.retain(|c| !holds.contains(c));
                    for h in holds {
                        let k = grid.index(h);
                        if self.lock[k] == m as u32 {
                            self.lock[k] = EMPTY;
                        }
                    }
                    self.start_virtual(m);
                }
            }
            Phase::Clear => {
                let aside = man.aside.expect("clearing needs an aside cell");
                let k = man.blockers.len();
                let settled = |p: &Passenger, at: Coord| {
                    p.route.is_empty() && p.ready_at <= tick && p.position == Some(at)
                };
                let ready = settled(&self.pax[actor], aside)
                    && man
                        .blockers
                        .iter()
                        .enumerate()
                        .all(|(j, &b)| settled(&self.pax[b], man.holds[k - j - 1]));
                if !ready {
                    return;
                }
                let seat = &grid.seats()[self.pax[actor].seat];
                let route = std::iter::once(man.entry).chain(seat.approach.iter().copied()).collect();
                let a = &mut self.pax[actor];
                a.route = route;
                a.settle = true;
                self.maneuvers[m].as_mut().unwrap().phase = Phase::Seat;
            }
            Phase::Seat => {
                if self.pax[actor].state != PaxState::Seated {
                    return;
                }
                let man = self.maneuvers[m].as_ref().unwrap();
                let k = man.blockers.len();
                let routes: Vec<(usize, VecDeque<Coord>)> = man
                    .blockers
                    .iter()
                    .enumerate()
                    .map(|(j, &b)| {
                        let seat = &grid.seats()[self.pax[b].seat];
                        let route = man.holds[..k - j - 1]
                            .iter()
                            .rev()
                            .copied()
                            .chain(std::iter::once(man.entry))
                            .chain(seat.approach.iter().copied())
                            .collect();
                        (b, route)
                    })
                    .collect();
                for (b, route) in routes {
                    self.pax[b].route = route;
                    self.pax[b].settle = true;
                }
                self.maneuvers[m].as_mut().unwrap().phase = Phase::Return;
            }
            Phase::Return => {
                if man.blockers.iter().all(|&b| self.pax[b].state == PaxState::Seated) {
                    self.release(m);
                }
            }
            Phase::Virtual { until } => {
                if tick < until {
                    return;
                }
                let seat_cell = grid.seats()[self.pax[actor].seat].cell;
                self.move_to(actor, seat_cell, 0.0, 0);
                self.pax[actor].ready_at = tick;
                self.set_state(actor, PaxState::Seated);
                self.finish(actor);
                self.release(m);
            }
        }
    }

    fn start_clearing(&mut self, m: usize) {
        let cabin = self.cabin;
        let grid = cabin.grid();
        let man = self.maneuvers[m].as_mut().unwrap();
        man.phase = Phase::Clear;
        let man = man.clone();
        let k = man.blockers.len();
        self.set_state(man.actor, PaxState::InterferenceActor);
        self.pax[man.actor].route = VecDeque::from([man.aside.expect("aside cell")]);
        self.pax[man.actor].settle = false;
        for (j, &b) in man.blockers.iter().enumerate() {
            let seat = &grid.seats()[self.pax[b].seat];
            let route: VecDeque<Coord> = seat.approach[..seat.depth()]
                .iter()
                .rev()
                .copied()
                .chain(std::iter::once(man.entry))
                .chain(man.holds[..k - j].iter().copied())
                .collect();
            let p = &mut self.pax[b];
            p.route = route;
            p.settle = false;
            p.maneuver = Some(m);
            self.finished -= 1;
            self.set_state(b, PaxState::InterferenceDisplaced);
        }
    }

    fn start_virtual(&mut self, m: usize) {
        let man = self.maneuvers[m].as_mut().unwrap();
        let actor = man.actor;
        let k = man.blockers.len() as f64;
        let wait = 2.0 * k * self.cfg.seat_time + 2.0 * self.pax[actor].t_h;
        man.phase = Phase::Virtual {
            until: self.tick + ticks(wait, self.cfg.tick, 1),
        };
        self.set_state(actor, PaxState::InterferenceActor);
    }

    /// Unlocks every cell of maneuver `m` and detaches its participants.
    fn release(&mut self, m: usize) {
        let cabin = self.cabin;
        let grid = cabin.grid();
        let man = self.maneuvers[m].take().unwrap();
        for c in man.locked {
            let k = grid.index(c);
            if self.lock[k] == m as u32 {
                self.lock[k] = EMPTY;
            }
        }
        self.pax[man.actor].maneuver = None;
        for b in man.blockers {
            self.pax[b].maneuver = None;
        }
    }
}

/// Seconds to whole ticks, rounded up, at least `min`.
fn ticks(seconds: f64, tick: f64, min: u64) -> u64 {
    let t = (seconds / tick - 1e-9).ceil();
    (t.max(0.0) as u64).max(min)
}
