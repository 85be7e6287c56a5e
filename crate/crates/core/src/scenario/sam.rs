use super::{check_reachable, CellGrid, CellKind, ScenarioError, DEFAULT_AISLE_WIDTH};
use crate::num::{Exact, Real};
use crate::symmetry::{apply_group_element, orbit_index_of, FieldOn4i, GroupElement};

/// Free parameters of the SAM sector beyond the field itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamLayout {
    /// Cells across one aisle branch, measured along a row.
    pub aisle_width: usize,
    /// Copies of the field cell tiled across the sector.
    pub cells_across: usize,
    /// Copies of the field cell stacked from front to back.
    pub cells_up: usize,
}

impl Default for SamLayout {
    fn default() -> Self {
        Self {
            aisle_width: DEFAULT_AISLE_WIDTH,
            cells_across: 2,
            cells_up: 1,
        }
    }
}

pub fn generate_sam_sector<T: Real + Exact>(
    rows: usize,
    seats_per_row: usize,
    sam_field: &FieldOn4i<T>,
    cell_size: T,
) -> Result<CellGrid<T>, ScenarioError> {
    generate_sam_sector_with(rows, seats_per_row, sam_field, cell_size, SamLayout::default())
}

/// Sector whose aisles are the streamlines of a P1m1 field.
///
/// Each field cell is read as one cell of the 4i orbit: fractional `u`
/// runs up from the front edge and `v` across the columns, so the mirror
/// `My` reflects about the cell's central column. In every cell two aisle
/// branches start at the top corners and are traced downward along the
/// sampled in-plane direction, where the `(u, v)` components map to (rows
/// up, columns). A branch never crosses its cell's axis, so mirrored
/// branches meet side by side and every seat row keeps `seats_per_row`
/// seats. Exits sit above the branches in the top row.
pub fn generate_sam_sector_with<T: Real + Exact>(
    rows: usize,
    seats_per_row: usize,
    sam_field: &FieldOn4i<T>,
    cell_size: T,
    layout: SamLayout,
) -> Result<CellGrid<T>, ScenarioError> {
    if rows == 0 || seats_per_row == 0 {
        return Err(ScenarioError::InvalidGeometry(
            "need at least one row and one seat".into(),
        ));
    }
    let SamLayout {
        aisle_width: aw,
        cells_across: nx,
        cells_up: ny,
    } = layout;
    if aw == 0 || nx == 0 || ny == 0 {
        return Err(ScenarioError::InvalidGeometry(
            "aisle width and cell counts must be positive".into(),
        ));
    }
    if !seats_per_row.is_multiple_of(nx) {
        return Err(ScenarioError::InvalidGeometry(format!(
            "{seats_per_row} seats per row do not split over {nx} cells"
        )));
    }
    let vectors = sam_field
        .vectors()
        .ok_or_else(|| ScenarioError::InvalidField("expected a vector field".into()))?;
    if apply_group_element(GroupElement::My, sam_field) != *sam_field {
        return Err(ScenarioError::InvalidField("not invariant under the mirror My".into()));
    }
    if vectors.iter().all(|v| v[0] == T::zero() && v[1] == T::zero()) {
        return Err(ScenarioError::InvalidField("in-plane part is zero".into()));
    }
    if vectors.iter().any(|v| v[0] == T::zero()) {
        return Err(ScenarioError::InvalidField("no component toward the exit edge".into()));
    }

    let cell_w = seats_per_row / nx + 2 * aw;
    let w = nx * cell_w;
    let h = 2 * rows - 1;
    let band = h as f64 / ny as f64;
    let lo = aw as f64 / 2.0;
    let hi = (cell_w / 2) as f64 - lo;

    // Left branch centre line in cell coordinates, top row first.
    let mut centre = Vec::with_capacity(h);
    let mut x = lo;
    for i in 0..h {
        centre.push(x);
        let up = (h - 1 - i) as f64 / band;
        // The left branch lies in the half v < 1/2.
        let vec = vectors[orbit_index_of(up.fract(), 0.25)];
        let slope = vec[1].to_f64_lossy() / vec[0].to_f64_lossy() * (cell_w as f64 / band);
        x = (x - slope).clamp(lo, hi.max(lo));
    }

    let mut grid = CellGrid::new(w + 2, h + 2, cell_size, CellKind::Obstacle)?;
    for (i, &x) in centre.iter().enumerate() {
        let seat_row = i % 2 == 0;
        let start = (x - lo).round() as usize;
        let mut aisle = vec![false; cell_w];
        for c in start..start + aw {
            aisle[c] = true;
            aisle[cell_w - 1 - c] = true;
        }
        for k in 0..nx {
            for (c, &open) in aisle.iter().enumerate() {
                let col = k * cell_w + c + 1;
                let kind = match (open, seat_row) {
                    (true, _) => CellKind::Free,
                    (false, true) => CellKind::Seat,
                    (false, false) => CellKind::Obstacle,
                };
                grid.set(i + 1, col, kind);
                if i == 0 && open {
                    grid.set(0, col, CellKind::Exit);
                }
            }
        }
    }
    check_reachable(&grid)?;
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::sam_displacement_field;

    fn field(a4: f64, b4: f64, c1: f64) -> FieldOn4i<f64> {
        sam_displacement_field(a4, b4, c1).unwrap()
    }

    fn single(aisle_width: usize) -> SamLayout {
        SamLayout {
            aisle_width,
            cells_across: 1,
            cells_up: 1,
        }
    }

    fn seats_in_row(g: &CellGrid<f64>, r: usize) -> usize {
        (0..g.width()).filter(|&c| g.get(r, c) == CellKind::Seat).count()
    }

    #[test]
    fn default_sector_matches_traditional_seats() {
        let g: CellGrid<f64> = generate_sam_sector(17, 24, &field(1.0, 1.0, 1.0), 0.5).unwrap();
        assert_eq!(g.count(CellKind::Seat), 408);
        assert!(g.is_mirror_symmetric());
        assert_eq!((g.width(), g.height()), (38, 35));
        // corner exits plus the merged pair at the centre
        assert_eq!(g.count(CellKind::Exit), 4 * DEFAULT_AISLE_WIDTH);
        for r in (1..g.height() - 1).step_by(2) {
            assert_eq!(seats_in_row(&g, r), 24, "row {r}");
        }
    }

    #[test]
    fn branches_lean_with_the_field() {
        let g: CellGrid<f64> = generate_sam_sector_with(17, 24, &field(1.0, 1.0, 0.0), 0.5, single(3)).unwrap();
        let axis = g.width() / 2;
        assert_eq!(g.get(0, 1), CellKind::Exit);
        assert_eq!(g.get(1, 1), CellKind::Free);
        // the two branches meet at the axis halfway up and part again
        let mid = g.height() / 2;
        assert_eq!(g.get(mid, axis - 1), CellKind::Free);
        assert_eq!(g.get(mid, axis), CellKind::Free);
        assert_eq!(g.get(g.height() - 2, 1), CellKind::Free);
        // near the top the left branch moves right going down
        let first_free = |r: usize| (1..g.width()).find(|&c| g.get(r, c) == CellKind::Free).unwrap();
        assert!(first_free(9) > first_free(1));
        assert!(first_free(g.height() - 10) > first_free(g.height() - 2));
    }

    #[test]
    fn shallow_field_keeps_branches_apart() {
        let g: CellGrid<f64> = generate_sam_sector_with(17, 24, &field(4.0, 1.0, 1.0), 0.5, single(3)).unwrap();
        assert!(g.is_mirror_symmetric());
        assert_eq!(g.count(CellKind::Seat), 408);
        let mid = g.height() / 2;
        assert_eq!(g.get(mid, g.width() / 2), CellKind::Seat);
    }

    #[test]
    fn sign_of_b4_flips_the_chevrons() {
        let up: CellGrid<f64> = generate_sam_sector_with(17, 24, &field(1.0, 1.0, 1.0), 0.5, single(3)).unwrap();
        let down: CellGrid<f64> = generate_sam_sector_with(17, 24, &field(1.0, -1.0, 1.0), 0.5, single(3)).unwrap();
        assert_ne!(up, down);
        assert!(down.is_mirror_symmetric());
        assert_eq!(down.count(CellKind::Seat), 408);
    }

    #[test]
    fn degenerate_fields_are_rejected() {
        for f in [
            field(0.0, 0.0, 1.0),
            field(0.0, 1.0, 1.0),
            FieldOn4i::Vector([[1.0, 1.0, 0.0]; 4]),
        ] {
            assert!(matches!(
                generate_sam_sector(17, 24, &f, 0.5),
                Err(ScenarioError::InvalidField(_))
            ));
        }
        assert!(matches!(
            generate_sam_sector(17, 24, &FieldOn4i::Scalar([1.0; 4]), 0.5),
            Err(ScenarioError::InvalidField(_))
        ));
    }

    #[test]
    fn seats_must_split_over_cells() {
        assert!(matches!(
            generate_sam_sector(17, 23, &field(1.0, 1.0, 1.0), 0.5),
            Err(ScenarioError::InvalidGeometry(_))
        ));
    }

    #[test]
    fn single_row() {
        let g: CellGrid<f64> = generate_sam_sector_with(1, 2, &field(1.0, 1.0, 1.0), 0.5, single(1)).unwrap();
        assert_eq!(g.count(CellKind::Seat), 2);
        assert!(g.is_mirror_symmetric());
    }
}
