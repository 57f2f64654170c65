//! Seat selection and boarding order.

use std::collections::HashSet;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cabin::{manhattan_distance, CabinGrid};
use crate::error::ConfigError;

pub const DEFAULT_ZONES: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoardingStrategy {
    Random,
    OutsideIn,
    BackToFront { zones: usize },
    RotatingZone { zones: usize },
    /// Seat labels in boarding order.
    UserDefined(Vec<String>),
}

impl BoardingStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            BoardingStrategy::Random => "random",
            BoardingStrategy::OutsideIn => "outside-in",
            BoardingStrategy::BackToFront { .. } => "back-to-front",
            BoardingStrategy::RotatingZone { .. } => "rotating-zone",
            BoardingStrategy::UserDefined(_) => "user-defined",
        }
    }

    /// Reads a user-defined order: one seat label per line, blank lines and
    /// `#` comments ignored.
    pub fn user_defined_from_text(text: &str) -> Self {
        BoardingStrategy::UserDefined(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_owned)
                .collect(),
        )
    }
}

impl FromStr for BoardingStrategy {
    type Err = ConfigError;

    /// Accepts `random`, `outside-in`, `back-to-front[:N]`, `rotating-zone[:N]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, zones) = match s.split_once(':') {
            Some((n, z)) => {
                let z: usize = z
                    .parse()
                    .ok()
                    .filter(|&z| z > 0)
                    .ok_or_else(|| ConfigError::Invalid(format!("bad zone count in `{s}`")))?;
                (n, z)
            }
            None => (s, DEFAULT_ZONES),
        };
        match name.to_ascii_lowercase().replace('_', "-").as_str() {
            "random" => Ok(BoardingStrategy::Random),
            "outside-in" | "outsidein" => Ok(BoardingStrategy::OutsideIn),
            "back-to-front" | "backtofront" => Ok(BoardingStrategy::BackToFront { zones }),
            "rotating-zone" | "rotatingzone" => Ok(BoardingStrategy::RotatingZone { zones }),
            _ => Err(ConfigError::Invalid(format!("unknown boarding strategy `{s}`"))),
        }
    }
}

/// `round(LF * n_seats)`.
pub fn passenger_count(grid: &CabinGrid, load_factor: f64) -> usize {
    (load_factor * grid.seats().len() as f64).round() as usize
}

/// Uniformly random subset of seat indices of size `round(LF * n_max)`,
/// returned in ascending seat order.
pub fn assign_seats<R: Rng + ?Sized>(grid: &CabinGrid, load_factor: f64, rng: &mut R) -> Vec<usize> {
    let n_max = grid.seats().len();
    let n = passenger_count(grid, load_factor).min(n_max);
    let mut chosen = rand::seq::index::sample(rng, n_max, n).into_vec();
    chosen.sort_unstable();
    chosen
}

/// Orders the selected seats for boarding.
pub fn entry_order<R: Rng + ?Sized>(
    strategy: &BoardingStrategy,
    grid: &CabinGrid,
    seats: &[usize],
    rng: &mut R,
) -> Result<Vec<usize>, ConfigError> {
    let all = grid.seats();
    let mut order = seats.to_vec();
    match strategy {
        BoardingStrategy::Random => order.shuffle(rng),
        BoardingStrategy::OutsideIn => {
            // Deepest seats (window) first.
            order.shuffle(rng);
            order.sort_by_key(|&s| std::cmp::Reverse(all[s].depth()));
        }
        BoardingStrategy::BackToFront { zones } => {
            let zone = zone_of(grid, *zones);
            order.shuffle(rng);
            order.sort_by_key(|&s| std::cmp::Reverse(zone(all[s].row)));
        }
        BoardingStrategy::RotatingZone { zones } => {
            let zones = (*zones).max(1);
            let zone = zone_of(grid, zones);
            // Rear, front, second rear, second front, ...
            let mut rank = vec![0usize; zones];
            let (mut lo, mut hi) = (0usize, zones - 1);
            for (r, slot) in (0..zones).enumerate() {
                let z = if slot % 2 == 0 {
                    let z = hi;
                    hi = hi.saturating_sub(1);
                    z
                } else {
                    let z = lo;
                    lo += 1;
                    z
                };
                rank[z] = r;
            }
            order.shuffle(rng);
            order.sort_by_key(|&s| rank[zone(all[s].row)]);
        }
        BoardingStrategy::UserDefined(labels) => {
            let mut listed = Vec::with_capacity(labels.len());
            let mut seen = HashSet::new();
            for label in labels {
                let idx = grid
                    .seat_by_label(label)
                    .ok_or_else(|| ConfigError::Invalid(format!("unknown seat `{label}`")))?;
                if !seen.insert(idx) {
                    return Err(ConfigError::Invalid(format!("seat `{label}` listed twice")));
                }
                listed.push(idx);
            }
            let selected: HashSet<usize> = seats.iter().copied().collect();
            if seen != selected {
                return Err(ConfigError::Invalid(
                    "user-defined order is not a permutation of the assigned seats".into(),
                ));
            }
            order = listed;
        }
    }
    Ok(order)
}

/// Door (an index into `grid.doors()`) for each seat in `seats`.
///
/// By default every passenger uses the active door nearest to its row entry
/// cell, ties going to the earlier door. With `balanced` the seats are sorted
/// along the fuselage and cut into contiguous, equally sized groups, one per
/// door in fuselage order.
pub fn assign_doors(grid: &CabinGrid, seats: &[usize], doors: &[usize], balanced: bool) -> Vec<usize> {
    let all = grid.seats();
    let door_cell = |d: usize| grid.doors()[d].cell;
    if !balanced || doors.len() < 2 {
        return seats
            .iter()
            .map(|&s| {
                let entry = all[s].row_entry_cell;
                *doors
                    .iter()
                    .min_by_key(|&&d| (manhattan_distance(entry, door_cell(d)), d))
                    .expect("at least one active door")
            })
            .collect();
    }
    let mut by_x: Vec<usize> = (0..seats.len()).collect();
    by_x.sort_by_key(|&k| (all[seats[k]].row_entry_cell.x, seats[k]));
    let mut ordered_doors = doors.to_vec();
    ordered_doors.sort_by_key(|&d| (door_cell(d).x, d));
    let n = seats.len();
    let m = ordered_doors.len();
    let mut out = vec![0; n];
    let mut start = 0;
    for (j, &d) in ordered_doors.iter().enumerate() {
        let size = n / m + usize::from(j < n % m);
        for &k in &by_x[start..start + size] {
            out[k] = d;
        }
        start += size;
    }
    out
}

/// Maps a 1-based row number onto one of `zones` equal, contiguous row blocks
/// (zone 0 at the front).
fn zone_of(grid: &CabinGrid, zones: usize) -> impl Fn(u32) -> usize {
    let rows = grid.seats().iter().map(|s| s.row).max().unwrap_or(1) as usize;
    let zones = zones.clamp(1, rows.max(1));
    move |row: u32| ((row as usize - 1) * zones / rows).min(zones - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cabin::parse_layout;
    use crate::stochastic::RngSeed;

    /// Single-aisle cabin with `rows` rows of 3+3 seats.
    fn cabin(rows: usize) -> CabinGrid {
        let mut s = String::from("L_H=30 L_V=3.5\n");
        let width = rows + 4;
        for y in 0..9 {
            let mut line = String::new();
            for x in 0..width {
                line.push(match (x, y) {
                    (_, 0) | (_, 8) => if x == 1 && y == 0 { '1' } else { '#' },
                    (0, _) => '#',
                    (1, _) => '.',
                    (2, 4) => '.',
                    (2, _) => '#',
                    (x, _) if x == width - 1 => if y == 4 { '.' } else { '#' },
                    (_, 4) => '.',
                    _ => 'S',
                });
            }
            s.push_str(&line);
            s.push('\n');
        }
        parse_layout(&s).unwrap()
    }

    #[test]
    fn load_factor_extremes() {
        let g = cabin(10);
        let mut rng = RngSeed(1).stream(0);
        assert_eq!(assign_seats(&g, 1.0, &mut rng).len(), 60);
        assert!(assign_seats(&g, 0.0, &mut rng).is_empty());
        assert_eq!(assign_seats(&g, 0.5, &mut rng).len(), 30);
    }

    #[test]
    fn outside_in_bands() {
        let g = cabin(1);
        let seats: Vec<usize> = (0..6).collect();
        let mut rng = RngSeed(2).stream(0);
        let order = entry_order(&BoardingStrategy::OutsideIn, &g, &seats, &mut rng).unwrap();
        let depth: Vec<usize> = order.iter().map(|&s| g.seats()[s].depth()).collect();
        assert_eq!(depth, vec![2, 2, 1, 1, 0, 0]);
    }

    #[test]
    fn back_to_front_two_zones() {
        let g = cabin(30);
        let seats: Vec<usize> = (0..g.seats().len()).collect();
        let mut rng = RngSeed(3).stream(0);
        let order =
            entry_order(&BoardingStrategy::BackToFront { zones: 2 }, &g, &seats, &mut rng).unwrap();
        let rows: Vec<u32> = order.iter().map(|&s| g.seats()[s].row).collect();
        let first_front = rows.iter().position(|&r| r <= 15).unwrap();
        assert!(rows[..first_front].iter().all(|&r| r >= 16));
        assert!(rows[first_front..].iter().all(|&r| r <= 15));
    }

    #[test]
    fn rotating_zone_alternates() {
        let g = cabin(8);
        let seats: Vec<usize> = (0..g.seats().len()).collect();
        let mut rng = RngSeed(4).stream(0);
        let order =
            entry_order(&BoardingStrategy::RotatingZone { zones: 4 }, &g, &seats, &mut rng).unwrap();
        let zones: Vec<u32> = order.iter().map(|&s| (g.seats()[s].row - 1) / 2).collect();
        let mut blocks = zones.clone();
        blocks.dedup();
        assert_eq!(blocks, vec![3, 0, 2, 1]);
    }

    #[test]
    fn user_defined_must_be_permutation() {
        let g = cabin(1);
        let seats = vec![0, 1];
        let mut rng = RngSeed(5).stream(0);
        let ok = BoardingStrategy::UserDefined(vec!["1B".into(), "1A".into()]);
        assert_eq!(entry_order(&ok, &g, &seats, &mut rng).unwrap(), vec![1, 0]);
        let missing = BoardingStrategy::UserDefined(vec!["1A".into()]);
        assert!(entry_order(&missing, &g, &seats, &mut rng).is_err());
        let dup = BoardingStrategy::UserDefined(vec!["1A".into(), "1A".into()]);
        assert!(entry_order(&dup, &g, &seats, &mut rng).is_err());
    }

    #[test]
    fn random_is_reproducible() {
        let g = cabin(10);
        let seats: Vec<usize> = (0..60).collect();
        let a = entry_order(&BoardingStrategy::Random, &g, &seats, &mut RngSeed(7).stream(1)).unwrap();
        let b = entry_order(&BoardingStrategy::Random, &g, &seats, &mut RngSeed(7).stream(1)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parse_names() {
        assert_eq!("random".parse::<BoardingStrategy>().unwrap(), BoardingStrategy::Random);
        assert_eq!(
            "back-to-front:3".parse::<BoardingStrategy>().unwrap(),
            BoardingStrategy::BackToFront { zones: 3 }
        );
        assert!("zigzag".parse::<BoardingStrategy>().is_err());
    }
}
