mod common;

use proptest::prelude::*;
use symevac::dynamics::{agent_repulsion, integrate_agent, Agent, ForceParams};
use symevac::geom::Vec2;
use symevac::scenario::CellKind;

fn agent(id: usize, x: f64, y: f64, vx: f64, vy: f64, r: f64) -> Agent<f64> {
    let mut a = Agent::at_rest(id, Vec2::new(x, y), 80.0, r, 1.5);
    a.velocity = Vec2::new(vx, vy);
    a
}

fn arb_agent(id: usize) -> impl Strategy<Value = Agent<f64>> {
    (0.0..3.0, 0.0..3.0, -3.0..3.0, -3.0..3.0, 0.15..0.35).prop_map(move |(x, y, vx, vy, r)| agent(id, x, y, vx, vy, r))
}

proptest! {
    #[test]
    fn pair_forces_are_antisymmetric(a in arb_agent(0), b in arb_agent(1)) {
        let p = ForceParams::default();
        let sum = agent_repulsion(&a, &b, &p) + agent_repulsion(&b, &a, &p);
        prop_assert!(sum.norm() <= 1e-9, "{:?}", sum);
    }

    #[test]
    fn pair_force_pushes_apart(a in arb_agent(0), b in arb_agent(1)) {
        prop_assume!(a.position != b.position);
        let p = ForceParams::default();
        let f = agent_repulsion(&a, &b, &p);
        prop_assert!(f.dot(a.position - b.position) > 0.0);
    }

    #[test]
    fn pair_force_is_mirror_equivariant(a in arb_agent(0), b in arb_agent(1)) {
        let p = ForceParams::default();
        let flip = |ag: &Agent<f64>| {
            let mut m = *ag;
            m.position = Vec2::new(-ag.position.x, ag.position.y);
            m.velocity = Vec2::new(-ag.velocity.x, ag.velocity.y);
            m
        };
        let f = agent_repulsion(&a, &b, &p);
        let g = agent_repulsion(&flip(&a), &flip(&b), &p);
        prop_assert!((g.x + f.x).abs() <= 1e-9 && (g.y - f.y).abs() <= 1e-9);
    }

    #[test]
    fn integration_caps_speed_and_stays_walkable(
        x in 0.8..5.2f64, y in 0.8..5.2f64, fx in -1e6..1e6f64, fy in -1e6..1e6f64, dt in 0.001..0.1f64,
    ) {
        let room = common::open_room(12, 12);
        let a = agent(0, x, y, 0.0, 0.0, 0.25);
        let p = ForceParams::default();
        let next = integrate_agent(&a, Vec2::new(fx, fy), dt, p.v_max, &room).unwrap();
        prop_assert!(next.velocity.norm() <= p.v_max * (1.0 + 1e-12));
        prop_assert_ne!(room.kind_at(next.position), Some(CellKind::Obstacle));
        prop_assert!(room.kind_at(next.position).is_some());
    }
}
