mod common;

use std::path::PathBuf;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symevac::scenario::{
    default_sam_spec, default_traditional_spec, generate_dead_end_room, generate_sam_sector_with,
    generate_traditional_sector, parse_scenario, serialize_scenario, CellKind, SamLayout, ScenarioSpec,
};
use symevac::symmetry::sam_displacement_field;

fn shipped(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "scenarios", name]
        .iter()
        .collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

proptest! {
    #[test]
    fn serialization_round_trips(seed in any::<u64>(), w in 1usize..=10, h in 1usize..=10) {
        let inner = common::random_grid(&mut ChaCha8Rng::seed_from_u64(seed), w, h);
        let mut grid = symevac::scenario::CellGrid::new(w + 2, h + 2, 0.5, CellKind::Obstacle).unwrap();
        for r in 0..h {
            for c in 0..w {
                grid.set(r + 1, c + 1, inner.get(r, c));
            }
        }
        let seats = grid.count(CellKind::Seat);
        let spec = ScenarioSpec { agent_count: seats / 2, desired_speed: 1.25, label: Some("p".into()), grid };
        let back: ScenarioSpec<f64> = parse_scenario(&serialize_scenario(&spec)).unwrap();
        prop_assert_eq!(back, spec);
    }

    #[test]
    fn sam_sectors_are_symmetric_and_seat_everyone(
        rows in 1usize..=20,
        per_cell in 1usize..=8,
        aw in 1usize..=4,
        nx in 1usize..=3,
        ny in 1usize..=2,
        a4 in prop::sample::select(vec![-2.0, -1.0, 0.5, 1.0, 3.0]),
        b4 in prop::sample::select(vec![-2.0, -1.0, 0.5, 1.0, 3.0]),
    ) {
        let field = sam_displacement_field(a4, b4, 1.0).unwrap();
        let layout = SamLayout { aisle_width: aw, cells_across: nx, cells_up: ny };
        let seats = 2 * per_cell * nx;
        match generate_sam_sector_with(rows, seats, &field, 0.5, layout) {
            Ok(g) => {
                prop_assert!(g.is_mirror_symmetric());
                prop_assert_eq!(g.count(CellKind::Seat), rows * seats);
                prop_assert!(g.check_closed().is_ok());
            }
            // too few rows for the stacked cells is the only acceptable refusal
            Err(e) => prop_assert!(ny > 1 && rows < 2 * ny, "{}", e),
        }
    }
}

#[test]
fn shipped_scenarios_match_the_generators() {
    assert_eq!(
        shipped("traditional_sector.txt"),
        serialize_scenario(&default_traditional_spec::<f64>())
    );
    assert_eq!(
        shipped("sam_sector.txt"),
        serialize_scenario(&default_sam_spec::<f64>())
    );
    let narrow = ScenarioSpec::full(
        generate_traditional_sector::<f64>(17, 24, &[6, 18], 0.5).unwrap(),
        1.5,
        "traditional_narrow",
    );
    assert_eq!(shipped("traditional_narrow.txt"), serialize_scenario(&narrow));
    let deadend = ScenarioSpec {
        agent_count: 0,
        ..ScenarioSpec::full(generate_dead_end_room::<f64>(), 1.5, "deadend")
    };
    assert_eq!(shipped("deadend.txt"), serialize_scenario(&deadend));
}

#[test]
fn default_layouts_are_mirror_images_of_themselves() {
    for spec in [default_traditional_spec::<f64>(), default_sam_spec::<f64>()] {
        assert!(spec.grid.is_mirror_symmetric());
        assert_eq!(spec.seat_count(), 408);
        assert_eq!(spec.agent_count, 408);
    }
}
