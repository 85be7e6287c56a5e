//! Reference implementations and fixtures shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use symevac::floorfield::PathLength;
use symevac::scenario::{parse_scenario, CellGrid, CellKind, ScenarioSpec};

/// Floyd–Warshall over the 8-neighbour lattice. A diagonal move needs a
/// walkable target and at least one walkable orthogonal corner cell.
pub fn oracle_distances(grid: &CellGrid<f64>) -> Vec<Option<PathLength>> {
    let (w, h) = (grid.width() as isize, grid.height() as isize);
    let n = grid.len();
    let walk = |r: isize, c: isize| {
        r >= 0 && c >= 0 && r < h && c < w && grid.get(r as usize, c as usize) != CellKind::Obstacle
    };
    let mut d: Vec<Vec<Option<PathLength>>> = vec![vec![None; n]; n];
    for r in 0..h {
        for c in 0..w {
            if !walk(r, c) {
                continue;
            }
            let i = (r * w + c) as usize;
            d[i][i] = Some(PathLength::ZERO);
            for dr in -1..=1isize {
                for dc in -1..=1isize {
                    if (dr, dc) == (0, 0) || !walk(r + dr, c + dc) {
                        continue;
                    }
                    let diagonal = dr != 0 && dc != 0;
                    if diagonal && !walk(r + dr, c) && !walk(r, c + dc) {
                        continue;
                    }
                    let j = ((r + dr) * w + c + dc) as usize;
                    d[i][j] = Some(PathLength::ZERO.step(diagonal));
                }
            }
        }
    }
    for k in 0..n {
        let through = d[k].clone();
        for row in d.iter_mut() {
            let Some(ik) = row[k] else { continue };
            for (ij, kj) in row.iter_mut().zip(&through) {
                if let Some(kj) = kj {
                    let via = PathLength {
                        orthogonal: ik.orthogonal + kj.orthogonal,
                        diagonal: ik.diagonal + kj.diagonal,
                    };
                    if ij.is_none_or(|best| via < best) {
                        *ij = Some(via);
                    }
                }
            }
        }
    }
    let exits = grid.indices_of(CellKind::Exit);
    (0..n).map(|i| exits.iter().filter_map(|&e| d[i][e]).min()).collect()
}

/// Random grid with roughly 25 % obstacles and at least one exit.
pub fn random_grid(rng: &mut impl Rng, width: usize, height: usize) -> CellGrid<f64> {
    let mut grid = CellGrid::new(width, height, 0.5, CellKind::Free).unwrap();
    for r in 0..height {
        for c in 0..width {
            let kind = match rng.gen_range(0..20) {
                0..=4 => CellKind::Obstacle,
                5 => CellKind::Exit,
                6..=8 => CellKind::Seat,
                _ => CellKind::Free,
            };
            grid.set(r, c, kind);
        }
    }
    if grid.count(CellKind::Exit) == 0 {
        grid.set(rng.gen_range(0..height), rng.gen_range(0..width), CellKind::Exit);
    }
    grid
}

/// One-row corridor `len` cells long, open at the left end, with seats at
/// the given columns.
pub fn corridor(len: usize, seats: &[usize]) -> ScenarioSpec<f64> {
    let wall = "#".repeat(len + 2);
    let side = format!("E{}#", ".".repeat(len));
    let mut mid = String::from("E");
    for c in 0..len {
        mid.push(if seats.contains(&c) { 'S' } else { '.' });
    }
    mid.push('#');
    let rows = [wall.clone(), side.clone(), mid, side, wall];
    let text = format!(
        "@cell_size 0.5\n@agent_count {}\n@desired_speed 1.5\n@map\n{}\n",
        seats.len(),
        rows.join("\n")
    );
    parse_scenario(&text).unwrap()
}

/// Walled `w × h` room with a two-cell door in the middle of the top wall.
pub fn open_room(w: usize, h: usize) -> CellGrid<f64> {
    let mut grid = CellGrid::new(w, h, 0.5, CellKind::Free).unwrap();
    for c in 0..w {
        grid.set(0, c, CellKind::Obstacle);
        grid.set(h - 1, c, CellKind::Obstacle);
    }
    for r in 0..h {
        grid.set(r, 0, CellKind::Obstacle);
        grid.set(r, w - 1, CellKind::Obstacle);
    }
    grid.set(0, w / 2 - 1, CellKind::Exit);
    grid.set(0, w / 2, CellKind::Exit);
    grid
}
