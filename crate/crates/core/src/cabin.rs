//! Discretized cabin geometry.
//!
//! A cabin is an `n_V × n_H` grid of cells read from a layout file. Columns
//! (`x`) run along the fuselage, rows (`y`) across it, and the origin is the
//! top-left character of the grid block in the file.
//!
//! Layout file grammar:
//!
//! ```text
//! # comment lines start with '#'
//! L_H=<meters>  L_V=<meters>
//! <n_V lines of exactly n_H characters>
//! ```
//!
//! Cell characters: `#` wall, `S` seat, `.` aisle, `1`..`9` door with that id.
//! Lines starting with `#` are comments until the header has been read; after
//! the header only lines starting with `"# "` are comments, since a grid row
//! may itself begin with a wall.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::LayoutError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellKind {
    Wall,
    Seat,
    Aisle,
    Door,
}

impl CellKind {
    pub fn symbol(self) -> char {
        match self {
            CellKind::Wall => '#',
            CellKind::Seat => 'S',
            CellKind::Aisle => '.',
            CellKind::Door => 'D',
        }
    }
}

/// Grid coordinate: `x` is the column (along the fuselage), `y` the row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coord {
    pub x: usize,
    pub y: usize,
}

impl Coord {
    pub const fn new(x: usize, y: usize) -> Self {
        Coord { x, y }
    }

    /// Neighbour reached by `(dx, dy)`, if it does not underflow.
    pub fn offset(self, dx: isize, dy: isize) -> Option<Coord> {
        let x = self.x.checked_add_signed(dx)?;
        let y = self.y.checked_add_signed(dy)?;
        Some(Coord { x, y })
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// L1 (taxicab) distance between two cells.
pub fn manhattan_distance(p: Coord, q: Coord) -> usize {
    p.x.abs_diff(q.x) + p.y.abs_diff(q.y)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeatRef {
    /// Row number followed by a letter, e.g. `12C`.
    pub id: String,
    pub cell: Coord,
    /// Aisle cell in front of the seat group; luggage is stowed here.
    pub row_entry_cell: Coord,
    /// Seat cells walked from the row entry cell to this seat, ending with
    /// `cell` itself.
    pub approach: Vec<Coord>,
    pub row: u32,
}

impl SeatRef {
    /// Position of the seat counted from the aisle: 0 for the seat next to
    /// the row entry cell.
    pub fn depth(&self) -> usize {
        self.approach.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoorRef {
    pub id: u8,
    pub cell: Coord,
    pub active: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CabinGrid {
    n_h: usize,
    n_v: usize,
    l_h: f64,
    l_v: f64,
    cells: Vec<CellKind>,
    door_ids: Vec<Option<u8>>,
    seats: Vec<SeatRef>,
    doors: Vec<DoorRef>,
}

impl CabinGrid {
    pub fn n_h(&self) -> usize {
        self.n_h
    }

    pub fn n_v(&self) -> usize {
        self.n_v
    }

    pub fn l_h(&self) -> f64 {
        self.l_h
    }

    pub fn l_v(&self) -> f64 {
        self.l_v
    }

    pub fn u_h(&self) -> f64 {
        self.l_h / self.n_h as f64
    }

    pub fn u_v(&self) -> f64 {
        self.l_v / self.n_v as f64
    }

    pub fn seats(&self) -> &[SeatRef] {
        &self.seats
    }

    pub fn doors(&self) -> &[DoorRef] {
        &self.doors
    }

    pub fn door_by_id(&self, id: u8) -> Option<(usize, &DoorRef)> {
        self.doors.iter().enumerate().find(|(_, d)| d.id == id)
    }

    pub fn seat_by_label(&self, label: &str) -> Option<usize> {
        self.seats.iter().position(|s| s.id == label)
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn contains(&self, c: Coord) -> bool {
        c.x < self.n_h && c.y < self.n_v
    }

    pub fn index(&self, c: Coord) -> usize {
        c.y * self.n_h + c.x
    }

    pub fn coord(&self, index: usize) -> Coord {
        Coord::new(index % self.n_h, index / self.n_h)
    }

    pub fn kind(&self, c: Coord) -> CellKind {
        self.cells[self.index(c)]
    }

    /// Kind of the cell at `(c.x + dx, c.y + dy)`, `None` outside the grid.
    pub fn neighbor(&self, c: Coord, dx: isize, dy: isize) -> Option<Coord> {
        c.offset(dx, dy).filter(|n| self.contains(*n))
    }

    /// True when no seat group opens onto an aisle more than one cell wide.
    /// Narrow cabins get the halved luggage retrieval time when deboarding.
    pub fn is_narrow_aisle(&self) -> bool {
        self.seats.iter().all(|s| {
            let e = s.row_entry_cell;
            [-1isize, 1].iter().all(|&dy| {
                self.neighbor(e, 0, dy)
                    .is_none_or(|n| self.kind(n) != CellKind::Aisle)
            })
        })
    }

    /// Serializes back to the layout file format.
    pub fn to_layout_string(&self) -> String {
        let mut out = format!("L_H={}  L_V={}\n", self.l_h, self.l_v);
        for y in 0..self.n_v {
            for x in 0..self.n_h {
                let i = self.index(Coord::new(x, y));
                let ch = match self.cells[i] {
                    CellKind::Door => char::from(b'0' + self.door_ids[i].unwrap_or(1)),
                    k => k.symbol(),
                };
                out.push(ch);
            }
            out.push('\n');
        }
        out
    }
}

/// Ratio of horizontal to vertical cell size, `u_H / u_V`.
pub fn gamma(grid: &CabinGrid) -> f64 {
    grid.u_h() / grid.u_v()
}

fn parse_err(line: usize, message: impl Into<String>) -> LayoutError {
    LayoutError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_header(line_no: usize, line: &str) -> Result<(f64, f64), LayoutError> {
    let mut l_h = None;
    let mut l_v = None;
    for token in line.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| parse_err(line_no, format!("expected KEY=VALUE, found `{token}`")))?;
        let value: f64 = value
            .parse()
            .map_err(|_| parse_err(line_no, format!("`{value}` is not a number")))?;
        if !(value.is_finite() && value > 0.0) {
            return Err(parse_err(line_no, format!("{key} must be positive")));
        }
        match key {
            "L_H" => l_h = Some(value),
            "L_V" => l_v = Some(value),
            other => return Err(parse_err(line_no, format!("unknown header key `{other}`"))),
        }
    }
    match (l_h, l_v) {
        (Some(h), Some(v)) => Ok((h, v)),
        _ => Err(parse_err(line_no, "header must define both L_H and L_V")),
    }
}

/// Parses a layout file into a validated [`CabinGrid`].
pub fn parse_layout(text: &str) -> Result<CabinGrid, LayoutError> {
    let mut header = None;
    let mut rows: Vec<(usize, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if header.is_none() {
            if line.starts_with('#') {
                continue;
            }
            header = Some(parse_header(line_no, line)?);
            continue;
        }
        if line.starts_with("# ") {
            continue;
        }
        rows.push((line_no, line));
    }
    let (l_h, l_v) = header.ok_or_else(|| parse_err(1, "missing L_H/L_V header"))?;
    let Some(&(first_line, first)) = rows.first() else {
        return Err(LayoutError::Validation("layout has no grid rows".into()));
    };
    let n_h = first.chars().count();
    if n_h == 0 {
        return Err(parse_err(first_line, "empty grid row"));
    }
    let n_v = rows.len();
    let mut cells = Vec::with_capacity(n_h * n_v);
    let mut door_ids = Vec::with_capacity(n_h * n_v);
    for &(line_no, row) in &rows {
        if row.chars().count() != n_h {
            return Err(parse_err(
                line_no,
                format!("row has {} cells, expected {n_h}", row.chars().count()),
            ));
        }
        for ch in row.chars() {
            let (kind, door) = match ch {
                '#' => (CellKind::Wall, None),
                'S' => (CellKind::Seat, None),
                '.' => (CellKind::Aisle, None),
                '1'..='9' => (CellKind::Door, Some(ch as u8 - b'0')),
                other => {
                    return Err(parse_err(line_no, format!("unknown cell character `{other}`")))
                }
            };
            cells.push(kind);
            door_ids.push(door);
        }
    }

    let mut grid = CabinGrid {
        n_h,
        n_v,
        l_h,
        l_v,
        cells,
        door_ids,
        seats: Vec::new(),
        doors: Vec::new(),
    };
    grid.doors = collect_doors(&grid)?;
    grid.seats = collect_seats(&grid)?;
    if grid.seats.is_empty() {
        return Err(LayoutError::Validation("layout has no seats".into()));
    }
    check_connectivity(&grid)?;
    Ok(grid)
}

fn collect_doors(grid: &CabinGrid) -> Result<Vec<DoorRef>, LayoutError> {
    let mut doors: Vec<DoorRef> = Vec::new();
    for (i, id) in grid.door_ids.iter().enumerate() {
        if let Some(id) = *id {
            if doors.iter().any(|d| d.id == id) {
                return Err(LayoutError::Validation(format!("door {id} appears twice")));
            }
            doors.push(DoorRef {
                id,
                cell: grid.coord(i),
                active: true,
            });
        }
    }
    if doors.is_empty() {
        return Err(LayoutError::Validation("layout has no doors".into()));
    }
    Ok(doors)
}

/// Groups seats into vertical runs (one run per seat block in a column) and
/// finds, for every seat, the aisle cell it is reached from.
fn collect_seats(grid: &CabinGrid) -> Result<Vec<SeatRef>, LayoutError> {
    let seat_columns: Vec<usize> = (0..grid.n_h)
        .filter(|&x| (0..grid.n_v).any(|y| grid.kind(Coord::new(x, y)) == CellKind::Seat))
        .collect();
    let is_aisle = |c: Option<Coord>| c.is_some_and(|c| grid.kind(c) == CellKind::Aisle);

    let mut seats = Vec::new();
    for (row_idx, &x) in seat_columns.iter().enumerate() {
        let row = row_idx as u32 + 1;
        let mut letter = b'A';
        let mut y = 0;
        while y < grid.n_v {
            if grid.kind(Coord::new(x, y)) != CellKind::Seat {
                y += 1;
                continue;
            }
            let top = y;
            while y < grid.n_v && grid.kind(Coord::new(x, y)) == CellKind::Seat {
                y += 1;
            }
            let bottom = y - 1;
            for sy in top..=bottom {
                let cell = Coord::new(x, sy);
                let id = format!("{row}{}", letter as char);
                letter = letter.saturating_add(1);
                // Candidate entries: (door-side cost, entry cell, first seat cell of the approach).
                let mut best: Option<(usize, u8, Coord, usize)> = None;
                let mut consider = |cost: usize, rank: u8, entry: Coord, from_y: usize| {
                    if best.is_none_or(|b| (cost, rank) < (b.0, b.1)) {
                        best = Some((cost, rank, entry, from_y));
                    }
                };
                if let Some(above) = top.checked_sub(1).map(|ty| Coord::new(x, ty)) {
                    if is_aisle(Some(above)) {
                        consider(sy - top, 0, above, top);
                    }
                }
                let below = grid.neighbor(Coord::new(x, bottom), 0, 1);
                if is_aisle(below) {
                    consider(bottom - sy, 1, below.unwrap(), bottom);
                }
                // A seat beside an aisle is entered sideways only when its run
                // has no aisle at either end.
                let vertical = top.checked_sub(1).is_some_and(|ty| is_aisle(Some(Coord::new(x, ty))))
                    || is_aisle(below);
                for py in (top..=bottom).filter(|_| !vertical) {
                    for dx in [-1isize, 1] {
                        let side = grid.neighbor(Coord::new(x, py), dx, 0);
                        if is_aisle(side) {
                            consider(py.abs_diff(sy), 2, side.unwrap(), py);
                        }
                    }
                }
                let Some((_, _, entry, from_y)) = best else {
                    return Err(LayoutError::Connectivity { seat: id });
                };
                let approach: Vec<Coord> = if from_y <= sy {
                    (from_y..=sy).map(|yy| Coord::new(x, yy)).collect()
                } else {
                    (sy..=from_y).rev().map(|yy| Coord::new(x, yy)).collect()
                };
                seats.push(SeatRef {
                    id,
                    cell,
                    row_entry_cell: entry,
                    approach,
                    row,
                });
            }
        }
    }
    Ok(seats)
}

/// Flood fill over aisle cells from every door; each seat's entry cell must be
/// reached from each of them.
fn check_connectivity(grid: &CabinGrid) -> Result<(), LayoutError> {
    for door in &grid.doors {
        let reach = flood_aisles(grid, door.cell);
        if let Some(seat) = grid.seats.iter().find(|s| !reach[grid.index(s.row_entry_cell)]) {
            return Err(LayoutError::Connectivity {
                seat: seat.id.clone(),
            });
        }
    }
    Ok(())
}

fn flood_aisles(grid: &CabinGrid, start: Coord) -> Vec<bool> {
    let mut seen = vec![false; grid.n_cells()];
    let mut queue = VecDeque::from([start]);
    seen[grid.index(start)] = true;
    while let Some(c) = queue.pop_front() {
        for (dx, dy) in DIRECTIONS {
            if let Some(n) = grid.neighbor(c, dx, dy) {
                let i = grid.index(n);
                if !seen[i] && grid.cells[i] == CellKind::Aisle {
                    seen[i] = true;
                    queue.push_back(n);
                }
            }
        }
    }
    seen
}

/// Cardinal steps in the fixed candidate order N, E, S, W. North is towards
/// the top of the layout file (decreasing `y`).
pub const DIRECTIONS: [(isize, isize); 4] = [(0, -1), (1, 0), (0, 1), (-1, 0)];

/// Walking distance over aisle cells towards `target`, used as the path
/// metric. On obstacle-free aisle regions it equals the Manhattan distance.
#[derive(Debug, Clone)]
pub struct DistanceField {
    dist: Vec<u32>,
}

impl DistanceField {
    pub const UNREACHABLE: u32 = u32::MAX;

    pub fn towards(grid: &CabinGrid, target: Coord) -> Self {
        let mut dist = vec![Self::UNREACHABLE; grid.n_cells()];
        let mut queue = VecDeque::from([target]);
        dist[grid.index(target)] = 0;
        while let Some(c) = queue.pop_front() {
            let d = dist[grid.index(c)];
            for (dx, dy) in DIRECTIONS {
                if let Some(n) = grid.neighbor(c, dx, dy) {
                    let i = grid.index(n);
                    if dist[i] == Self::UNREACHABLE && grid.cells[i] == CellKind::Aisle {
                        dist[i] = d + 1;
                        queue.push_back(n);
                    }
                }
            }
        }
        DistanceField { dist }
    }

    pub fn get(&self, grid: &CabinGrid, c: Coord) -> u32 {
        self.dist[grid.index(c)]
    }
}
