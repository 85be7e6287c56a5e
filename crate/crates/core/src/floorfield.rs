//! Desired-velocity fields on the cell grid.
//!
//! The canonical field descends the geodesic distance to the nearest exit
//! (8-connected, no corner cutting). The naive field, which simply sums
//! unit vectors towards every exit cell, is kept to show how it traps
//! pedestrians behind concave obstacles.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::geom::Vec2;
use crate::num::Real;
use crate::scenario::{CellGrid, CellKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("grid has no exit cell")]
    NoExit,
    #[error("distance field is {found:?} but grid is {expected:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("desired speed must be positive")]
    NonPositiveSpeed,
    #[error("position ({x}, {y}) lies outside the grid")]
    OutOfBounds { x: f64, y: f64 },
}

/// Neighbor offsets `(d_row, d_col)` in scan order E, N, W, S, NE, NW, SW, SE.
/// North is towards row 0.
pub const NEIGHBORS: [(isize, isize); 8] = [(0, 1), (-1, 0), (0, -1), (1, 0), (-1, 1), (-1, -1), (1, -1), (1, 1)];

/// Whether a step from `(row, col)` by `(dr, dc)` lands on a walkable cell
/// without squeezing diagonally between two obstacles.
pub fn step_allowed<T: Real>(grid: &CellGrid<T>, row: usize, col: usize, dr: isize, dc: isize) -> bool {
    let (r, c) = (row as isize, col as isize);
    let walkable = |rr, cc| grid.get_signed(rr, cc).is_some_and(CellKind::is_walkable);
    if !walkable(r + dr, c + dc) {
        return false;
    }
    if dr != 0 && dc != 0 {
        return walkable(r + dr, c) || walkable(r, c + dc);
    }
    true
}

/// Path length counted as `orthogonal + diagonal·√2` cell steps. Keeping
/// the counts instead of a float makes comparisons exact, so the result
/// does not depend on the order in which equal-length paths are found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PathLength {
    pub orthogonal: u32,
    pub diagonal: u32,
}

impl PathLength {
    pub const ZERO: PathLength = PathLength {
        orthogonal: 0,
        diagonal: 0,
    };

    pub fn step(self, diagonal: bool) -> Self {
        if diagonal {
            Self {
                diagonal: self.diagonal + 1,
                ..self
            }
        } else {
            Self {
                orthogonal: self.orthogonal + 1,
                ..self
            }
        }
    }

    /// Length in meters.
    pub fn meters<T: Real>(self, cell_size: T) -> T {
        cell_size * (T::lit(self.orthogonal as f64) + T::lit(self.diagonal as f64) * T::SQRT_2())
    }
}

impl Ord for PathLength {
    fn cmp(&self, other: &Self) -> Ordering {
        // a1 + b1·√2 vs a2 + b2·√2  <=>  da vs db·√2
        let da = i128::from(self.orthogonal) - i128::from(other.orthogonal);
        let db = i128::from(other.diagonal) - i128::from(self.diagonal);
        match (da.signum(), db.signum()) {
            (0, 0) => Ordering::Equal,
            (x, y) if x >= 0 && y <= 0 => Ordering::Greater,
            (x, y) if x <= 0 && y >= 0 => Ordering::Less,
            (1, 1) => (da * da).cmp(&(2 * db * db)),
            _ => (2 * db * db).cmp(&(da * da)),
        }
    }
}

impl PartialOrd for PathLength {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Geodesic distance to the nearest exit for every cell; `None` for
/// obstacles and cells cut off from every exit.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField<T> {
    width: usize,
    height: usize,
    cell_size: T,
    paths: Vec<Option<PathLength>>,
}

impl<T: Real> DistanceField<T> {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn path(&self, index: usize) -> Option<PathLength> {
        self.paths[index]
    }

    /// Distance in meters, `+inf` when unreachable or blocked.
    pub fn value(&self, index: usize) -> T {
        self.paths[index].map_or(T::infinity(), |p| p.meters(self.cell_size))
    }

    pub fn at(&self, row: usize, col: usize) -> T {
        self.value(row * self.width + col)
    }

    pub fn values(&self) -> Vec<T> {
        (0..self.paths.len()).map(|i| self.value(i)).collect()
    }

    /// Largest finite distance among cells of `kind`.
    pub fn max_over(&self, grid: &CellGrid<T>, kind: CellKind) -> Option<T> {
        grid.indices_of(kind)
            .into_iter()
            .filter_map(|i| self.paths[i])
            .max()
            .map(|p| p.meters(self.cell_size))
    }
}

#[derive(PartialEq, Eq)]
struct Frontier {
    length: PathLength,
    index: usize,
}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .length
            .cmp(&self.length)
            .then_with(|| other.index.cmp(&self.index))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multi-source Dijkstra from every exit cell.
pub fn compute_distance_field<T: Real>(grid: &CellGrid<T>) -> Result<DistanceField<T>, FieldError> {
    let exits = grid.indices_of(CellKind::Exit);
    if exits.is_empty() {
        return Err(FieldError::NoExit);
    }
    let mut paths = vec![None; grid.len()];
    let mut heap = BinaryHeap::new();
    for &i in &exits {
        paths[i] = Some(PathLength::ZERO);
        heap.push(Frontier {
            length: PathLength::ZERO,
            index: i,
        });
    }
    while let Some(Frontier { length, index }) = heap.pop() {
        if paths[index].is_some_and(|best| length > best) {
            continue;
        }
        let (row, col) = grid.coords(index);
        for (dr, dc) in NEIGHBORS {
            if !step_allowed(grid, row, col, dr, dc) {
                continue;
            }
            let next = grid.index((row as isize + dr) as usize, (col as isize + dc) as usize);
            let candidate = length.step(dr != 0 && dc != 0);
            if paths[next].is_none_or(|best| candidate < best) {
                paths[next] = Some(candidate);
                heap.push(Frontier {
                    length: candidate,
                    index: next,
                });
            }
        }
    }
    Ok(DistanceField {
        width: grid.width(),
        height: grid.height(),
        cell_size: grid.cell_size(),
        paths,
    })
}

/// Per-cell status attached to a velocity field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellFlag {
    Guided,
    Exit,
    Obstacle,
    /// Walkable but no exit can be reached.
    Unreachable,
    /// Naive field only: the exit attractions cancel.
    ZeroResultant,
}

/// Desired velocity per cell: a unit direction times one common speed.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityField<T> {
    width: usize,
    height: usize,
    cell_size: T,
    speed: T,
    directions: Vec<Vec2<T>>,
    flags: Vec<CellFlag>,
}

impl<T: Real> VelocityField<T> {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cell_size(&self) -> T {
        self.cell_size
    }

    pub fn speed(&self) -> T {
        self.speed
    }

    pub fn direction(&self, index: usize) -> Vec2<T> {
        self.directions[index]
    }

    pub fn vector(&self, index: usize) -> Vec2<T> {
        self.directions[index] * self.speed
    }

    pub fn flag(&self, index: usize) -> CellFlag {
        self.flags[index]
    }

    pub fn flags(&self) -> &[CellFlag] {
        &self.flags
    }

    pub fn count_flag(&self, flag: CellFlag) -> usize {
        self.flags.iter().filter(|&&f| f == flag).count()
    }

    fn cell_of(&self, pos: Vec2<T>) -> Result<usize, FieldError> {
        let c = (pos.x / self.cell_size).floor();
        let r = (pos.y / self.cell_size).floor();
        let out = || FieldError::OutOfBounds {
            x: pos.x.to_f64_lossy(),
            y: pos.y.to_f64_lossy(),
        };
        if !(c >= T::zero() && r >= T::zero()) {
            return Err(out());
        }
        let (c, r) = (c.to_usize().ok_or_else(out)?, r.to_usize().ok_or_else(out)?);
        if c >= self.width || r >= self.height {
            return Err(out());
        }
        Ok(r * self.width + c)
    }

    /// Unit direction of the cell containing `pos`.
    pub fn direction_at(&self, pos: Vec2<T>) -> Result<Vec2<T>, FieldError> {
        self.cell_of(pos).map(|i| self.directions[i])
    }
}

/// Vector of the cell that contains `position`; no interpolation.
pub fn lookup_desired_velocity<T: Real>(field: &VelocityField<T>, position: Vec2<T>) -> Result<Vec2<T>, FieldError> {
    field.cell_of(position).map(|i| field.vector(i))
}

fn unit_offset<T: Real>(dr: isize, dc: isize) -> Vec2<T> {
    let v = Vec2::new(T::lit(dc as f64), T::lit(dr as f64));
    if dr != 0 && dc != 0 {
        v * T::FRAC_1_SQRT_2()
    } else {
        v
    }
}

/// Each cell points at its admissible neighbor with the smallest distance;
/// the first neighbor in [`NEIGHBORS`] order wins ties.
pub fn compute_velocity_field<T: Real>(
    grid: &CellGrid<T>,
    dist: &DistanceField<T>,
    desired_speed: T,
) -> Result<VelocityField<T>, FieldError> {
    if (dist.width, dist.height) != (grid.width(), grid.height()) {
        return Err(FieldError::DimensionMismatch {
            expected: (grid.width(), grid.height()),
            found: (dist.width, dist.height),
        });
    }
    if !(desired_speed > T::zero()) {
        return Err(FieldError::NonPositiveSpeed);
    }
    let mut directions = vec![Vec2::zero(); grid.len()];
    let mut flags = vec![CellFlag::Obstacle; grid.len()];
    for i in 0..grid.len() {
        let (row, col) = grid.coords(i);
        flags[i] = match grid.cells()[i] {
            CellKind::Obstacle => CellFlag::Obstacle,
            CellKind::Exit => CellFlag::Exit,
            _ if dist.path(i).is_none() => CellFlag::Unreachable,
            _ => {
                let mut best: Option<(PathLength, isize, isize)> = None;
                for (dr, dc) in NEIGHBORS {
                    if !step_allowed(grid, row, col, dr, dc) {
                        continue;
                    }
                    let j = grid.index((row as isize + dr) as usize, (col as isize + dc) as usize);
                    if let Some(p) = dist.path(j) {
                        if best.is_none_or(|(b, _, _)| p < b) {
                            best = Some((p, dr, dc));
                        }
                    }
                }
                let (_, dr, dc) = best.expect("a reachable cell has a reachable neighbor");
                directions[i] = unit_offset(dr, dc);
                CellFlag::Guided
            }
        };
    }
    Ok(VelocityField {
        width: grid.width(),
        height: grid.height(),
        cell_size: grid.cell_size(),
        speed: desired_speed,
        directions,
        flags,
    })
}

/// Straight-line attraction towards every exit cell, ignoring obstacles.
pub fn compute_naive_field<T: Real>(grid: &CellGrid<T>, desired_speed: T) -> Result<VelocityField<T>, FieldError> {
    let exits = grid.indices_of(CellKind::Exit);
    if exits.is_empty() {
        return Err(FieldError::NoExit);
    }
    if !(desired_speed > T::zero()) {
        return Err(FieldError::NonPositiveSpeed);
    }
    let centers: Vec<Vec2<T>> = exits
        .iter()
        .map(|&e| {
            let (r, c) = grid.coords(e);
            grid.cell_center(r, c)
        })
        .collect();
    let cancel_tol = T::lit(1e-9) * T::lit(exits.len() as f64);
    let mut directions = vec![Vec2::zero(); grid.len()];
    let mut flags = vec![CellFlag::Obstacle; grid.len()];
    for i in 0..grid.len() {
        let (row, col) = grid.coords(i);
        flags[i] = match grid.cells()[i] {
            CellKind::Obstacle => CellFlag::Obstacle,
            CellKind::Exit => CellFlag::Exit,
            _ => {
                let here = grid.cell_center(row, col);
                let sum = centers
                    .iter()
                    .filter_map(|&c| (c - here).normalized())
                    .fold(Vec2::zero(), |acc, u| acc + u);
                if sum.norm() <= cancel_tol {
                    CellFlag::ZeroResultant
                } else {
                    directions[i] = sum / sum.norm();
                    CellFlag::Guided
                }
            }
        };
    }
    Ok(VelocityField {
        width: grid.width(),
        height: grid.height(),
        cell_size: grid.cell_size(),
        speed: desired_speed,
        directions,
        flags,
    })
}

/// Outcome of following a field greedily from one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Walk {
    Reached { hops: usize },
    Stranded,
}

/// Greedy cell hopping: move to the neighbor whose offset best matches the
/// cell's direction. Blocked moves, zero vectors, cycles and running past
/// `walkable cell count` hops all strand the walker.
pub fn follow_field<T: Real>(grid: &CellGrid<T>, field: &VelocityField<T>, start: usize) -> Walk {
    let budget = grid.walkable_count();
    let mut visited = vec![false; grid.len()];
    let mut here = start;
    for hops in 0..=budget {
        if grid.cells()[here] == CellKind::Exit {
            return Walk::Reached { hops };
        }
        if visited[here] || !grid.cells()[here].is_walkable() {
            return Walk::Stranded;
        }
        visited[here] = true;
        let dir = field.direction(here);
        if dir == Vec2::zero() {
            return Walk::Stranded;
        }
        let (row, col) = grid.coords(here);
        let mut best = NEIGHBORS[0];
        let mut best_dot = T::neg_infinity();
        for (dr, dc) in NEIGHBORS {
            let d = unit_offset::<T>(dr, dc).dot(dir);
            if d > best_dot {
                best_dot = d;
                best = (dr, dc);
            }
        }
        if !step_allowed(grid, row, col, best.0, best.1) {
            return Walk::Stranded;
        }
        here = grid.index((row as isize + best.0) as usize, (col as isize + best.1) as usize);
    }
    Walk::Stranded
}

/// Walkable cells from which greedy following never reaches an exit.
pub fn stranded_cells<T: Real>(grid: &CellGrid<T>, field: &VelocityField<T>) -> Vec<usize> {
    (0..grid.len())
        .filter(|&i| grid.cells()[i].is_walkable())
        .filter(|&i| follow_field(grid, field, i) == Walk::Stranded)
        .collect()
}

/// Arrow glyph for a direction (screen frame, y down).
pub fn arrow_glyph<T: Real>(dir: Vec2<T>) -> char {
    if dir == Vec2::zero() {
        return '0';
    }
    const GLYPHS: [char; 8] = ['→', '↗', '↑', '↖', '←', '↙', '↓', '↘'];
    let angle = (-dir.y).atan2(dir.x).to_f64_lossy();
    let sector = (angle / std::f64::consts::FRAC_PI_4).round().rem_euclid(8.0) as usize;
    GLYPHS[sector]
}

/// Arrow rendering of a field: obstacles `#`, exits `E`, unguided cells `?`.
pub fn render_ascii<T: Real>(field: &VelocityField<T>) -> String {
    let mut out = String::new();
    for r in 0..field.height {
        for c in 0..field.width {
            let i = r * field.width + c;
            out.push(match field.flags[i] {
                CellFlag::Obstacle => '#',
                CellFlag::Exit => 'E',
                CellFlag::Guided => arrow_glyph(field.directions[i]),
                CellFlag::Unreachable | CellFlag::ZeroResultant => '?',
            });
        }
        out.push('\n');
    }
    out
}
