//! Cell-grid world model, the scenario text format and the sector
//! generators.

use std::fmt;

use thiserror::Error;

use crate::floorfield;
use crate::geom::Vec2;
use crate::num::{Exact, Real};
use crate::symmetry::sam_displacement_field;

mod sam;

pub use sam::{generate_sam_sector, generate_sam_sector_with, SamLayout};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("line {line}, column {column}: unknown map character {ch:?}")]
    UnknownChar { ch: char, line: usize, column: usize },
    #[error("line {line}: map row has {found} cells, expected {expected}")]
    RaggedRow { line: usize, expected: usize, found: usize },
    #[error("missing required header key @{0}")]
    MissingKey(&'static str),
    #[error("line {line}: unknown header key @{key}")]
    UnknownKey { key: String, line: usize },
    #[error("line {line}: invalid value {value:?} for @{key}")]
    BadValue {
        key: &'static str,
        value: String,
        line: usize,
    },
    #[error("line {line}: unexpected content before @map")]
    UnexpectedLine { line: usize },
    #[error("empty map")]
    EmptyMap,
    #[error("agent_count {requested} exceeds the {seats} seat cells")]
    TooManyAgents { requested: usize, seats: usize },
    #[error("boundary cell (row {row}, col {col}) is walkable; the world must be closed")]
    OpenBoundary { row: usize, col: usize },
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("unusable layout field: {0}")]
    InvalidField(String),
    #[error("cell (row {row}, col {col}) has no walkable path to an exit")]
    Unreachable { row: usize, col: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellKind {
    Obstacle,
    Free,
    Seat,
    Exit,
}

impl CellKind {
    pub fn from_char(ch: char) -> Option<CellKind> {
        match ch {
            '#' => Some(Self::Obstacle),
            '.' => Some(Self::Free),
            'S' => Some(Self::Seat),
            'E' => Some(Self::Exit),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Self::Obstacle => '#',
            Self::Free => '.',
            Self::Seat => 'S',
            Self::Exit => 'E',
        }
    }

    pub fn is_walkable(self) -> bool {
        !matches!(self, Self::Obstacle)
    }
}

/// Rectangular lattice of cells, row-major with row 0 at the top. Cell
/// `(row, col)` covers `[col·s, (col+1)·s) × [row·s, (row+1)·s)` in meters,
/// so `y` grows downwards and "up" means towards row 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CellGrid<T> {
    width: usize,
    height: usize,
    cell_size: T,
    cells: Vec<CellKind>,
}

impl<T: Real> CellGrid<T> {
    pub fn new(width: usize, height: usize, cell_size: T, fill: CellKind) -> Result<Self, ScenarioError> {
        if width == 0 || height == 0 {
            return Err(ScenarioError::InvalidGeometry(format!(
                "grid {width}x{height} is empty"
            )));
        }
        if !(cell_size > T::zero() && cell_size.is_finite()) {
            return Err(ScenarioError::InvalidGeometry(format!(
                "cell size {cell_size} must be positive"
            )));
        }
        Ok(Self {
            width,
            height,
            cell_size,
            cells: vec![fill; width * height],
        })
    }

    pub fn from_rows(rows: &[Vec<CellKind>], cell_size: T) -> Result<Self, ScenarioError> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        let mut grid = Self::new(width, height, cell_size, CellKind::Obstacle)?;
        for (r, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(ScenarioError::InvalidGeometry(format!(
                    "row {r} has {} cells, expected {width}",
                    row.len()
                )));
            }
            grid.cells[r * width..(r + 1) * width].copy_from_slice(row);
        }
        Ok(grid)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cell_size(&self) -> T {
        self.cell_size
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[CellKind] {
        &self.cells
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.width + col
    }

    pub fn coords(&self, index: usize) -> (usize, usize) {
        (index / self.width, index % self.width)
    }

    pub fn get(&self, row: usize, col: usize) -> CellKind {
        self.cells[self.index(row, col)]
    }

    /// Signed lookup; anything outside the grid reads as `None`.
    pub fn get_signed(&self, row: isize, col: isize) -> Option<CellKind> {
        (row >= 0 && col >= 0 && (row as usize) < self.height && (col as usize) < self.width)
            .then(|| self.get(row as usize, col as usize))
    }

    pub fn set(&mut self, row: usize, col: usize, kind: CellKind) {
        let i = self.index(row, col);
        self.cells[i] = kind;
    }

    pub fn count(&self, kind: CellKind) -> usize {
        self.cells.iter().filter(|&&k| k == kind).count()
    }

    pub fn walkable_count(&self) -> usize {
        self.cells.iter().filter(|k| k.is_walkable()).count()
    }

    /// Indices of cells of `kind` in row-major order.
    pub fn indices_of(&self, kind: CellKind) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i] == kind).collect()
    }

    /// Physical extent `(width, height)` in meters.
    pub fn extent(&self) -> Vec2<T> {
        Vec2::new(
            T::lit(self.width as f64) * self.cell_size,
            T::lit(self.height as f64) * self.cell_size,
        )
    }

    pub fn cell_center(&self, row: usize, col: usize) -> Vec2<T> {
        let half = T::lit(0.5);
        Vec2::new(
            (T::lit(col as f64) + half) * self.cell_size,
            (T::lit(row as f64) + half) * self.cell_size,
        )
    }

    /// Cell owning `pos` under the half-open rule, or `None` outside the grid.
    pub fn cell_of(&self, pos: Vec2<T>) -> Option<(usize, usize)> {
        let c = (pos.x / self.cell_size).floor();
        let r = (pos.y / self.cell_size).floor();
        if !(c >= T::zero() && r >= T::zero()) {
            return None;
        }
        let (c, r) = (c.to_usize()?, r.to_usize()?);
        (c < self.width && r < self.height).then_some((r, c))
    }

    pub fn kind_at(&self, pos: Vec2<T>) -> Option<CellKind> {
        self.cell_of(pos).map(|(r, c)| self.get(r, c))
    }

    /// First walkable boundary cell that is not an exit, if any.
    pub fn open_boundary_cell(&self) -> Option<(usize, usize)> {
        (0..self.height)
            .flat_map(|r| (0..self.width).map(move |c| (r, c)))
            .filter(|&(r, c)| r == 0 || c == 0 || r + 1 == self.height || c + 1 == self.width)
            .find(|&(r, c)| matches!(self.get(r, c), CellKind::Free | CellKind::Seat))
    }

    pub fn check_closed(&self) -> Result<(), ScenarioError> {
        match self.open_boundary_cell() {
            Some((row, col)) => Err(ScenarioError::OpenBoundary { row, col }),
            None => Ok(()),
        }
    }

    /// Grid mirrored about its central vertical axis.
    pub fn mirrored(&self) -> Self {
        let mut out = self.clone();
        for r in 0..self.height {
            for c in 0..self.width {
                out.set(r, c, self.get(r, self.width - 1 - c));
            }
        }
        out
    }

    pub fn is_mirror_symmetric(&self) -> bool {
        self.mirrored().cells == self.cells
    }

    /// Map block, one line per row.
    pub fn to_map_string(&self) -> String {
        let mut s = String::with_capacity((self.width + 1) * self.height);
        for row in self.cells.chunks(self.width) {
            s.extend(row.iter().map(|k| k.to_char()));
            s.push('\n');
        }
        s
    }
}

impl<T: Real> fmt::Display for CellGrid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_map_string())
    }
}

/// A grid plus the run-level header values.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec<T> {
    pub grid: CellGrid<T>,
    pub agent_count: usize,
    pub desired_speed: T,
    pub label: Option<String>,
}

impl<T: Real> ScenarioSpec<T> {
    /// Scenario with one agent per seat.
    pub fn full(grid: CellGrid<T>, desired_speed: T, label: impl Into<String>) -> Self {
        Self {
            agent_count: grid.count(CellKind::Seat),
            grid,
            desired_speed,
            label: Some(label.into()),
        }
    }

    pub fn seat_count(&self) -> usize {
        self.grid.count(CellKind::Seat)
    }
}

/// Parses the `@key value` header followed by the `@map` block.
pub fn parse_scenario<T: Real>(text: &str) -> Result<ScenarioSpec<T>, ScenarioError> {
    let mut label = None;
    let mut cell_size: Option<T> = None;
    let mut agent_count: Option<usize> = None;
    let mut desired_speed: Option<T> = None;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut map_start = None;

    for (line, raw) in lines.by_ref() {
        let content = raw.trim();
        if content.is_empty() {
            continue;
        }
        let Some(directive) = content.strip_prefix('@') else {
            return Err(ScenarioError::UnexpectedLine { line });
        };
        let (key, value) = match directive.split_once(char::is_whitespace) {
            Some((k, v)) => (k, v.trim()),
            None => (directive, ""),
        };
        match key {
            "map" => {
                map_start = Some(line);
                break;
            }
            "label" => label = Some(value.to_owned()),
            "cell_size" => cell_size = Some(parse_positive("cell_size", value, line)?),
            "desired_speed" => desired_speed = Some(parse_positive("desired_speed", value, line)?),
            "agent_count" => {
                agent_count = Some(value.parse().map_err(|_| ScenarioError::BadValue {
                    key: "agent_count",
                    value: value.to_owned(),
                    line,
                })?)
            }
            other => {
                return Err(ScenarioError::UnknownKey {
                    key: other.to_owned(),
                    line,
                })
            }
        }
    }

    let cell_size = cell_size.ok_or(ScenarioError::MissingKey("cell_size"))?;
    let agent_count = agent_count.ok_or(ScenarioError::MissingKey("agent_count"))?;
    let desired_speed = desired_speed.ok_or(ScenarioError::MissingKey("desired_speed"))?;
    if map_start.is_none() {
        return Err(ScenarioError::MissingKey("map"));
    }

    let mut rows: Vec<Vec<CellKind>> = Vec::new();
    let mut pending_blank = false;
    for (line, raw) in lines {
        let content = raw.trim_end();
        if content.is_empty() {
            pending_blank = true;
            continue;
        }
        if pending_blank && !rows.is_empty() {
            // a blank line inside the map block splits it: treat as ragged
            return Err(ScenarioError::RaggedRow {
                line: line - 1,
                expected: rows[0].len(),
                found: 0,
            });
        }
        pending_blank = false;
        let mut row = Vec::with_capacity(content.len());
        for (col, ch) in content.chars().enumerate() {
            let kind = CellKind::from_char(ch).ok_or(ScenarioError::UnknownChar {
                ch,
                line,
                column: col + 1,
            })?;
            row.push(kind);
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(ScenarioError::RaggedRow {
                    line,
                    expected: first.len(),
                    found: row.len(),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ScenarioError::EmptyMap);
    }

    let grid = CellGrid::from_rows(&rows, cell_size)?;
    grid.check_closed()?;
    let seats = grid.count(CellKind::Seat);
    if agent_count > seats {
        return Err(ScenarioError::TooManyAgents {
            requested: agent_count,
            seats,
        });
    }
    Ok(ScenarioSpec {
        grid,
        agent_count,
        desired_speed,
        label,
    })
}

fn parse_positive<T: Real>(key: &'static str, value: &str, line: usize) -> Result<T, ScenarioError> {
    let bad = || ScenarioError::BadValue {
        key,
        value: value.to_owned(),
        line,
    };
    let v: f64 = value.parse().map_err(|_| bad())?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(bad());
    }
    T::from_f64(v).ok_or_else(bad)
}

/// Writes the scenario file format.
pub fn serialize_scenario<T: Real>(spec: &ScenarioSpec<T>) -> String {
    let mut out = String::new();
    if let Some(label) = &spec.label {
        out.push_str(&format!("@label {label}\n"));
    }
    out.push_str(&format!("@cell_size {}\n", spec.grid.cell_size()));
    out.push_str(&format!("@agent_count {}\n", spec.agent_count));
    out.push_str(&format!("@desired_speed {}\n", spec.desired_speed));
    out.push_str("@map\n");
    out.push_str(&spec.grid.to_map_string());
    out
}

/// Defaults shared by both sector generators: 17 rows of 24 seats.
pub const DEFAULT_ROWS: usize = 17;
pub const DEFAULT_SEATS_PER_ROW: usize = 24;
/// Cells across one aisle. Two bodies abreast in a 1 m passage clog under
/// the default contact forces, so aisles are 1.5 m wide.
pub const DEFAULT_AISLE_WIDTH: usize = 3;
/// Interior columns of the two traditional aisles: seat blocks of 6, 12
/// and 6.
pub const DEFAULT_AISLES: [usize; 6] = [6, 7, 8, 21, 22, 23];
pub const DEFAULT_CELL_SIZE: f64 = 0.5;
pub const DEFAULT_DESIRED_SPEED: f64 = 1.5;
/// Layout field coefficients (A4, B4, C1).
pub const DEFAULT_SAM_COEFFICIENTS: (f64, f64, f64) = (1.0, 1.0, 1.0);

/// Traditional sector with default geometry, one agent per seat.
pub fn default_traditional_spec<T: Real>() -> ScenarioSpec<T> {
    let cell = T::lit(DEFAULT_CELL_SIZE);
    let grid = generate_traditional_sector(DEFAULT_ROWS, DEFAULT_SEATS_PER_ROW, &DEFAULT_AISLES, cell)
        .expect("default traditional sector is valid");
    ScenarioSpec::full(grid, T::lit(DEFAULT_DESIRED_SPEED), "traditional")
}

/// SAM sector for the default field, one agent per seat.
pub fn default_sam_spec<T: Real + Exact>() -> ScenarioSpec<T> {
    let (a4, b4, c1) = DEFAULT_SAM_COEFFICIENTS;
    let field = sam_displacement_field(T::lit(a4), T::lit(b4), T::lit(c1)).expect("c1 is non-negative");
    let grid = generate_sam_sector(DEFAULT_ROWS, DEFAULT_SEATS_PER_ROW, &field, T::lit(DEFAULT_CELL_SIZE))
        .expect("default SAM sector is valid");
    ScenarioSpec::full(grid, T::lit(DEFAULT_DESIRED_SPEED), "sam")
}

/// Fails with the first walkable cell that cannot reach an exit.
pub fn check_reachable<T: Real>(grid: &CellGrid<T>) -> Result<(), ScenarioError> {
    let dist = floorfield::compute_distance_field(grid).ok();
    for i in 0..grid.len() {
        if grid.cells()[i].is_walkable() && dist.as_ref().and_then(|d| d.path(i)).is_none() {
            let (row, col) = grid.coords(i);
            return Err(ScenarioError::Unreachable { row, col });
        }
    }
    Ok(())
}

/// Horizontal seat rows separated by railing rows, straight vertical aisles
/// at the given interior columns and one exit cell above each aisle.
///
/// The interior is `seats_per_row + aisles` cells wide; the top row of the
/// grid carries the exits and the seat row nearest to it is row 1.
pub fn generate_traditional_sector<T: Real>(
    rows: usize,
    seats_per_row: usize,
    aisle_positions: &[usize],
    cell_size: T,
) -> Result<CellGrid<T>, ScenarioError> {
    if rows == 0 || seats_per_row == 0 {
        return Err(ScenarioError::InvalidGeometry(
            "need at least one row and one seat".into(),
        ));
    }
    let inner_width = seats_per_row + aisle_positions.len();
    let mut aisles = aisle_positions.to_vec();
    aisles.sort_unstable();
    aisles.dedup();
    if aisles.len() != aisle_positions.len() {
        return Err(ScenarioError::InvalidGeometry("duplicate aisle column".into()));
    }
    if let Some(&bad) = aisles.iter().find(|&&a| a >= inner_width) {
        return Err(ScenarioError::InvalidGeometry(format!(
            "aisle column {bad} outside interior width {inner_width}"
        )));
    }

    let width = inner_width + 2;
    let height = 2 * rows + 1;
    let mut grid = CellGrid::new(width, height, cell_size, CellKind::Obstacle)?;
    for &a in &aisles {
        grid.set(0, a + 1, CellKind::Exit);
    }
    for i in 0..(2 * rows - 1) {
        let r = i + 1;
        for c in 0..inner_width {
            let kind = match (aisles.binary_search(&c).is_ok(), i % 2 == 0) {
                (true, _) => CellKind::Free,
                (false, true) => CellKind::Seat,
                (false, false) => CellKind::Obstacle,
            };
            grid.set(r, c + 1, kind);
        }
    }
    check_reachable(&grid)?;
    Ok(grid)
}

/// Room with one exit and an obstacle cup opening away from it. Cells
/// inside the cup see the exit straight ahead through the cup's wall.
pub fn generate_dead_end_room<T: Real>() -> CellGrid<T> {
    const MAP: [&str; 10] = [
        "######E######",
        "#...........#",
        "#...........#",
        "#...#####...#",
        "#...#...#...#",
        "#...#...#...#",
        "#...#...#...#",
        "#...........#",
        "#...........#",
        "#############",
    ];
    let rows: Vec<Vec<CellKind>> = MAP
        .iter()
        .map(|l| l.chars().map(|c| CellKind::from_char(c).expect("valid map")).collect())
        .collect();
    CellGrid::from_rows(&rows, T::lit(DEFAULT_CELL_SIZE)).expect("static map is well formed")
}
