//! Seat interference: planning the aisle choreography when seated passengers
//! block the way to an inner seat.

use serde::{Deserialize, Serialize};

use crate::cabin::{CabinGrid, CellKind, Coord, SeatRef};

/// Cells and participants of one seat-interference maneuver.
///
/// The entering passenger steps from the row entry cell into `aside`; the
/// blockers leave the row, aisle-most first, and wait on `holds` (the first
/// blocker out walks to the farthest hold). The entering passenger then sits
/// down and the blockers return innermost first. `entry`, `aside` and `holds`
/// are locked for the whole maneuver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterferencePlan {
    pub entry: Coord,
    pub aside: Coord,
    /// Hold cells ordered away from the entry cell; `None` when the aisle has
    /// no room beyond the row and the maneuver is resolved as a timed wait.
    pub holds: Option<Vec<Coord>>,
    /// Blocking passengers ordered from the aisle inwards.
    pub blockers: Vec<usize>,
}

impl InterferencePlan {
    pub fn locked_cells(&self) -> impl Iterator<Item = Coord> + '_ {
        [self.entry, self.aside]
            .into_iter()
            .chain(self.holds.iter().flatten().copied())
    }
}

/// Seated passengers between the aisle and `seat`, aisle-most first.
pub fn blockers_for(seat: &SeatRef, occupant: impl Fn(Coord) -> Option<usize>) -> Vec<usize> {
    seat.approach[..seat.approach.len() - 1]
        .iter()
        .filter_map(|&c| occupant(c))
        .collect()
}

/// Plans the maneuver for a passenger standing on `seat.row_entry_cell`
/// after arriving from `came_from`, walking in direction `dir` (+1 or -1 along
/// the fuselage). Returns `None` when nobody blocks the row.
pub fn resolve_seat_interference(
    grid: &CabinGrid,
    seat: &SeatRef,
    came_from: Coord,
    dir: isize,
    occupant: impl Fn(Coord) -> Option<usize>,
) -> Option<InterferencePlan> {
    let blockers = blockers_for(seat, occupant);
    if blockers.is_empty() {
        return None;
    }
    let entry = seat.row_entry_cell;
    let holds: Option<Vec<Coord>> = (1..=blockers.len() as isize)
        .map(|i| {
            grid.neighbor(entry, dir * i, 0)
                .filter(|&c| grid.kind(c) == CellKind::Aisle && c != came_from)
        })
        .collect();
    Some(InterferencePlan {
        entry,
        aside: came_from,
        holds,
        blockers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cabin::parse_layout;
    use std::collections::HashMap;

    const ROW: &str = "\
L_H=5 L_V=3.5
#1#####
#.#SSS#
#.#SSS#
#.#SSS#
#......
#.#SSS#
#######
";

    fn setup(seated: &[&str]) -> (CabinGrid, HashMap<Coord, usize>) {
        let g = parse_layout(ROW).unwrap();
        let occ = seated
            .iter()
            .enumerate()
            .map(|(i, l)| (g.seats()[g.seat_by_label(l).unwrap()].cell, i))
            .collect();
        (g, occ)
    }

    #[test]
    fn type_one_single_blocker() {
        // 1A is the window seat of the upper block; 1C is on the aisle.
        let (g, occ) = setup(&["1C"]);
        let seat = &g.seats()[g.seat_by_label("1A").unwrap()];
        let came = Coord::new(2, 4);
        let plan = resolve_seat_interference(&g, seat, came, 1, |c| occ.get(&c).copied()).unwrap();
        assert_eq!(plan.blockers, vec![0]);
        assert_eq!(plan.entry, Coord::new(3, 4));
        assert_eq!(plan.aside, came);
        assert_eq!(plan.holds, Some(vec![Coord::new(4, 4)]));
        assert_eq!(plan.locked_cells().count(), 3);
    }

    #[test]
    fn type_three_two_blockers_aisle_first() {
        let (g, occ) = setup(&["1B", "1C"]);
        let seat = &g.seats()[g.seat_by_label("1A").unwrap()];
        let plan =
            resolve_seat_interference(&g, seat, Coord::new(2, 4), 1, |c| occ.get(&c).copied()).unwrap();
        // 1C (index 1) sits next to the aisle and leaves first.
        assert_eq!(plan.blockers, vec![1, 0]);
        assert_eq!(plan.holds, Some(vec![Coord::new(4, 4), Coord::new(5, 4)]));
    }

    #[test]
    fn no_blockers_no_plan() {
        let (g, occ) = setup(&["1D"]);
        let seat = &g.seats()[g.seat_by_label("1A").unwrap()];
        assert!(resolve_seat_interference(&g, seat, Coord::new(2, 4), 1, |c| occ.get(&c).copied())
            .is_none());
    }

    #[test]
    fn no_room_for_holds() {
        // Row 3 sits against the end of the aisle: only one cell lies beyond it.
        let (g, occ) = setup(&["3B", "3C"]);
        let seat = &g.seats()[g.seat_by_label("3A").unwrap()];
        let plan =
            resolve_seat_interference(&g, seat, Coord::new(4, 4), 1, |c| occ.get(&c).copied()).unwrap();
        assert_eq!(plan.holds, None);
    }
}
