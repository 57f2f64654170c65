//! Greedy next-cell choice and the overtaking gate.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cabin::{CabinGrid, CellKind, Coord, DistanceField};
use crate::stochastic::bernoulli;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    N,
    E,
    S,
    W,
    Stay,
}

impl Move {
    /// Candidate order used for tie-breaking.
    pub const CANDIDATES: [Move; 4] = [Move::N, Move::E, Move::S, Move::W];

    pub fn delta(self) -> (isize, isize) {
        match self {
            Move::N => (0, -1),
            Move::E => (1, 0),
            Move::S => (0, 1),
            Move::W => (-1, 0),
            Move::Stay => (0, 0),
        }
    }

    pub fn is_lateral(self) -> bool {
        matches!(self, Move::N | Move::S)
    }

    pub fn apply(self, c: Coord) -> Option<Coord> {
        let (dx, dy) = self.delta();
        c.offset(dx, dy)
    }
}

/// Picks the next cell for a walking passenger at `pos`.
///
/// Forward candidates are the free neighbours strictly closer to the target
/// under `dist`; the closest wins, ties resolved in N, E, S, W order. The cell
/// vacated by the previous move (`came_from`) is never re-entered directly.
///
/// When every forward cell is taken and the blocked move runs along the
/// fuselage, a free lateral aisle cell whose own forward neighbour is free may
/// be used to start an overtake; `may_overtake` is consulted once with the
/// blocked forward cell and can veto it.
pub fn next_step(
    grid: &CabinGrid,
    pos: Coord,
    came_from: Option<Coord>,
    dist: impl Fn(Coord) -> u32,
    free: impl Fn(Coord) -> bool,
    may_overtake: impl FnOnce(Coord) -> bool,
) -> Move {
    let here = dist(pos);
    let mut best: Option<(u32, Move)> = None;
    let mut blocked: Option<(Move, Coord)> = None;
    for mv in Move::CANDIDATES {
        let (dx, dy) = mv.delta();
        let Some(n) = grid.neighbor(pos, dx, dy) else { continue };
        let d = dist(n);
        if d == DistanceField::UNREACHABLE || d >= here || Some(n) == came_from {
            continue;
        }
        if free(n) {
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, mv));
            }
        } else if blocked.is_none() {
            blocked = Some((mv, n));
        }
    }
    if let Some((_, mv)) = best {
        return mv;
    }
    let Some((forward, blocker_cell)) = blocked else {
        return Move::Stay;
    };
    if forward.is_lateral() {
        return Move::Stay;
    }
    let (fdx, _) = forward.delta();
    let sidestep = [Move::N, Move::S].into_iter().find(|mv| {
        let (dx, dy) = mv.delta();
        let Some(n) = grid.neighbor(pos, dx, dy) else { return false };
        if grid.kind(n) != CellKind::Aisle || !free(n) || Some(n) == came_from {
            return false;
        }
        let d = dist(n);
        if d == DistanceField::UNREACHABLE || d < here {
            return false;
        }
        grid.neighbor(n, fdx, 0)
            .is_some_and(|ahead| grid.kind(ahead) == CellKind::Aisle && free(ahead))
    });
    match sidestep {
        Some(mv) if may_overtake(blocker_cell) => mv,
        _ => Move::Stay,
    }
}

/// Overtake permission for one obstruction event: granted with probability
/// `1 - IF`.
pub fn attempt_overtake<R: Rng + ?Sized>(interference_factor: f64, rng: &mut R) -> bool {
    bernoulli(1.0 - interference_factor, rng)
}
