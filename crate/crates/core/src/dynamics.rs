//! Social-force dynamics: relaxation towards the desired velocity plus
//! repulsion from other pedestrians and from walls.
//!
//! The agent and wall interactions use the escape-panic form
//!
//! ```text
//! f = [A·exp((r − d)/B) + k·g(r − d)]·n + κ·g(r − d)·(Δv·t)·t,   g(z) = max(z, 0)
//! ```
//!
//! where `r` is the sum of radii (or the agent radius for walls), `d` the
//! center distance, `n` the unit normal pointing at the agent and `t` its
//! perpendicular.

use thiserror::Error;

use crate::floorfield::VelocityField;
use crate::geom::Vec2;
use crate::num::Real;
use crate::scenario::{CellGrid, CellKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("non-finite force on agent {id}")]
    NonFiniteForce { id: usize },
    #[error("agent {id} left the grid at ({x}, {y})")]
    OutOfBounds { id: usize, x: f64, y: f64 },
    #[error("time step must be positive")]
    NonPositiveStep,
    #[error("parameter {0} must be strictly positive")]
    NonPositiveParameter(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Agent<T> {
    pub id: usize,
    pub position: Vec2<T>,
    pub velocity: Vec2<T>,
    pub mass: T,
    pub radius: T,
    pub desired_speed: T,
    pub evacuated: bool,
}

impl<T: Real> Agent<T> {
    pub fn at_rest(id: usize, position: Vec2<T>, mass: T, radius: T, desired_speed: T) -> Self {
        Self {
            id,
            position,
            velocity: Vec2::zero(),
            mass,
            radius,
            desired_speed,
            evacuated: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceParams<T> {
    /// Relaxation time (s).
    pub tau: T,
    /// Social repulsion strength (N).
    pub a: T,
    /// Social repulsion range (m).
    pub b: T,
    /// Body compression (kg/s²).
    pub k_body: T,
    /// Sliding friction (kg/(m·s)).
    pub kappa: T,
    /// Speed cap (m/s).
    pub v_max: T,
}

impl<T: Real> Default for ForceParams<T> {
    fn default() -> Self {
        Self {
            tau: T::lit(0.5),
            a: T::lit(2000.0),
            b: T::lit(0.08),
            k_body: T::lit(1.2e5),
            kappa: T::lit(2.4e5),
            v_max: T::lit(3.0),
        }
    }
}

impl<T: Real> ForceParams<T> {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        let fields = [
            ("tau", self.tau),
            ("a", self.a),
            ("b", self.b),
            ("k_body", self.k_body),
            ("kappa", self.kappa),
            ("v_max", self.v_max),
        ];
        match fields.into_iter().find(|&(_, v)| !(v > T::zero() && v.is_finite())) {
            Some((name, _)) => Err(DynamicsError::NonPositiveParameter(name)),
            None => Ok(()),
        }
    }

    /// Center distance beyond which a pair of radii `r` is ignored;
    /// the dropped social term is below `A·e⁻¹⁰`.
    pub fn pair_cutoff(&self, r: T) -> T {
        r + T::lit(10.0) * self.b
    }

    /// Search radius for wall contacts.
    pub fn wall_cutoff(&self, radius: T) -> T {
        T::lit(3.0) * self.b + radius
    }
}

fn positive_part<T: Real>(z: T) -> T {
    z.max(T::zero())
}

/// `m (v0·e − v) / τ`.
pub fn driving_force<T: Real>(agent: &Agent<T>, desired_dir: Vec2<T>, tau: T) -> Vec2<T> {
    (desired_dir * agent.desired_speed - agent.velocity) * (agent.mass / tau)
}

/// Distance used when two centers coincide exactly.
pub const COINCIDENT_DISTANCE: f64 = 1e-6;

pub fn coincident<T: Real>(a: &Agent<T>, b: &Agent<T>) -> bool {
    a.position == b.position
}

fn contact_force<T: Real>(n: Vec2<T>, d: T, r: T, relative_velocity: Vec2<T>, params: &ForceParams<T>) -> Vec2<T> {
    let overlap = positive_part(r - d);
    let normal = params.a * ((r - d) / params.b).exp() + params.k_body * overlap;
    let t = n.perp();
    n * normal + t * (params.kappa * overlap * relative_velocity.dot(t))
}

/// Force on `a` exerted by `b`. Coincident centers fall back to the x-axis,
/// pointing from the higher id to the lower id, evaluated at
/// [`COINCIDENT_DISTANCE`].
pub fn agent_repulsion<T: Real>(a: &Agent<T>, b: &Agent<T>, params: &ForceParams<T>) -> Vec2<T> {
    let diff = a.position - b.position;
    let (n, d) = if coincident(a, b) {
        let sign = if a.id < b.id { -T::one() } else { T::one() };
        (Vec2::new(sign, T::zero()), T::lit(COINCIDENT_DISTANCE))
    } else {
        let d = diff.norm();
        (diff / d, d)
    };
    contact_force(n, d, a.radius + b.radius, b.velocity - a.velocity, params)
}

/// Wall contact for one agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallContact<T> {
    pub force: Vec2<T>,
    /// The agent center sits inside (or on the surface of) an obstacle.
    pub embedded: bool,
}

fn cell_box<T: Real>(grid: &CellGrid<T>, row: usize, col: usize) -> (Vec2<T>, Vec2<T>) {
    let s = grid.cell_size();
    let lo = Vec2::new(T::lit(col as f64) * s, T::lit(row as f64) * s);
    (lo, lo + Vec2::new(s, s))
}

/// Repulsion from the single nearest obstacle boundary point within
/// `3·B + radius`.
pub fn wall_repulsion<T: Real>(agent: &Agent<T>, grid: &CellGrid<T>, params: &ForceParams<T>) -> WallContact<T> {
    let pos = agent.position;
    let cutoff = params.wall_cutoff(agent.radius);
    let s = grid.cell_size();
    let span = |lo: T, hi: T, n: usize| -> (usize, usize) {
        let a = (lo / s).floor().max(T::zero()).to_usize().unwrap_or(0);
        let b = (hi / s)
            .floor()
            .max(T::zero())
            .to_usize()
            .unwrap_or(0)
            .min(n.saturating_sub(1));
        (a, b)
    };
    let (c0, c1) = span(pos.x - cutoff, pos.x + cutoff, grid.width());
    let (r0, r1) = span(pos.y - cutoff, pos.y + cutoff, grid.height());

    let mut nearest: Option<(T, Vec2<T>, usize, usize)> = None;
    for row in r0..=r1 {
        for col in c0..=c1 {
            if grid.get(row, col) != CellKind::Obstacle {
                continue;
            }
            let (lo, hi) = cell_box(grid, row, col);
            let w = Vec2::new(pos.x.max(lo.x).min(hi.x), pos.y.max(lo.y).min(hi.y));
            let d = (pos - w).norm();
            if nearest.is_none_or(|(best, ..)| d < best) {
                nearest = Some((d, w, row, col));
            }
        }
    }
    let Some((d, w, row, col)) = nearest else {
        return WallContact {
            force: Vec2::zero(),
            embedded: false,
        };
    };
    if d > cutoff {
        return WallContact {
            force: Vec2::zero(),
            embedded: false,
        };
    }
    if d > T::zero() {
        let n = (pos - w) / d;
        return WallContact {
            force: contact_force(n, d, agent.radius, -agent.velocity, params),
            embedded: false,
        };
    }
    let (n, depth) = escape_face(grid, row, col, pos);
    WallContact {
        force: contact_force(n, -depth, agent.radius, -agent.velocity, params),
        embedded: true,
    }
}

/// Outward normal and depth of the nearest face of obstacle cell
/// `(row, col)` that borders walkable space.
fn escape_face<T: Real>(grid: &CellGrid<T>, row: usize, col: usize, pos: Vec2<T>) -> (Vec2<T>, T) {
    let (lo, hi) = cell_box(grid, row, col);
    let faces = [
        (0isize, 1isize, hi.x - pos.x, Vec2::new(T::one(), T::zero())),
        (-1, 0, pos.y - lo.y, Vec2::new(T::zero(), -T::one())),
        (0, -1, pos.x - lo.x, Vec2::new(-T::one(), T::zero())),
        (1, 0, hi.y - pos.y, Vec2::new(T::zero(), T::one())),
    ];
    faces
        .into_iter()
        .filter(|&(dr, dc, ..)| {
            grid.get_signed(row as isize + dr, col as isize + dc)
                .is_some_and(CellKind::is_walkable)
        })
        .min_by(|a, b| a.2.partial_cmp(&b.2).expect("finite positions"))
        .map(|(_, _, depth, n)| (n, depth.max(T::zero())))
        .unwrap_or((Vec2::new(T::zero(), -T::one()), T::zero()))
}

/// Per-agent force split into its parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceBreakdown<T> {
    pub driving: Vec2<T>,
    pub social: Vec2<T>,
    pub wall: Vec2<T>,
    /// Neighbors evaluated with the coincident-center fallback.
    pub coincident_pairs: u32,
    pub embedded: bool,
}

impl<T: Real> ForceBreakdown<T> {
    pub fn total(&self) -> Vec2<T> {
        self.driving + self.social + self.wall
    }

    /// Magnitude of the physical (non-driving) part.
    pub fn pressure(&self) -> T {
        (self.social + self.wall).norm()
    }
}

/// Driving + Σ agent repulsion + wall repulsion. Neighbors are summed in the
/// order given; pairs farther apart than [`ForceParams::pair_cutoff`] are
/// skipped.
pub fn total_force<'a, T: Real>(
    agent: &Agent<T>,
    neighbors: impl IntoIterator<Item = &'a Agent<T>>,
    grid: &CellGrid<T>,
    field: &VelocityField<T>,
    params: &ForceParams<T>,
) -> ForceBreakdown<T> {
    let dir = field.direction_at(agent.position).unwrap_or_else(|_| Vec2::zero());
    let mut social = Vec2::zero();
    let mut coincident_pairs = 0;
    for other in neighbors {
        let r = agent.radius + other.radius;
        let cutoff = params.pair_cutoff(r);
        if (agent.position - other.position).norm_squared() > cutoff * cutoff {
            continue;
        }
        if coincident(agent, other) {
            coincident_pairs += 1;
        }
        social += agent_repulsion(agent, other, params);
    }
    let wall = wall_repulsion(agent, grid, params);
    ForceBreakdown {
        driving: driving_force(agent, dir, params.tau),
        social,
        wall: wall.force,
        coincident_pairs,
        embedded: wall.embedded,
    }
}

/// Gap kept between a blocked agent and the obstacle face it hit.
const FACE_GAP: f64 = 1e-9;

/// Semi-implicit Euler step with speed cap and obstacle projection.
pub fn integrate_agent<T: Real>(
    agent: &Agent<T>,
    force: Vec2<T>,
    dt: T,
    v_max: T,
    grid: &CellGrid<T>,
) -> Result<Agent<T>, DynamicsError> {
    if !(dt > T::zero()) {
        return Err(DynamicsError::NonPositiveStep);
    }
    if !force.is_finite() {
        return Err(DynamicsError::NonFiniteForce { id: agent.id });
    }
    let mut velocity = agent.velocity + force * (dt / agent.mass);
    let speed = velocity.norm();
    if speed > v_max {
        velocity = velocity * (v_max / speed);
    }
    let start = agent.position;
    let target = start + velocity * dt;
    let (position, blocked_normal) = sweep(grid, start, target);
    if let Some(n) = blocked_normal {
        velocity -= n * velocity.dot(n);
    }
    if !position.is_finite() {
        return Err(DynamicsError::NonFiniteForce { id: agent.id });
    }
    Ok(Agent {
        position,
        velocity,
        ..*agent
    })
}

/// Moves from `start` towards `target`, stopping just before the first
/// obstacle cell (or the grid edge) on the segment. Returns the end point
/// and the axis normal of the face that stopped the motion.
fn sweep<T: Real>(grid: &CellGrid<T>, start: Vec2<T>, target: Vec2<T>) -> (Vec2<T>, Option<Vec2<T>>) {
    let blocked = |p: Vec2<T>| grid.kind_at(p).is_none_or(|k| k == CellKind::Obstacle);
    if !blocked(target) && grid.cell_of(start) == grid.cell_of(target) {
        return (target, None);
    }
    let s = grid.cell_size();
    let delta = target - start;
    // Parametric crossings of cell faces along the segment.
    let mut crossings: Vec<(T, usize)> = Vec::new();
    for axis in 0..2 {
        let (p0, dp) = if axis == 0 {
            (start.x, delta.x)
        } else {
            (start.y, delta.y)
        };
        if dp == T::zero() {
            continue;
        }
        let first = if dp > T::zero() {
            (p0 / s).floor() + T::one()
        } else {
            (p0 / s).floor()
        };
        let step = if dp > T::zero() { T::one() } else { -T::one() };
        let mut k = first;
        loop {
            let t = (k * s - p0) / dp;
            if !(t <= T::one()) {
                break;
            }
            if t >= T::zero() {
                crossings.push((t, axis));
            }
            k = k + step;
        }
    }
    crossings.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite").then(a.1.cmp(&b.1)));

    let gap = T::lit(FACE_GAP);
    for (t, axis) in crossings {
        let probe = start + delta * t;
        let mut inside = probe;
        // The point just past the face, on the far side along the motion.
        if axis == 0 {
            inside.x = inside.x + if delta.x > T::zero() { gap } else { -gap };
        } else {
            inside.y = inside.y + if delta.y > T::zero() { gap } else { -gap };
        }
        if blocked(inside) {
            let mut stop = probe;
            let normal = if axis == 0 {
                stop.x = stop.x - if delta.x > T::zero() { gap } else { -gap };
                Vec2::new(T::one(), T::zero())
            } else {
                stop.y = stop.y - if delta.y > T::zero() { gap } else { -gap };
                Vec2::new(T::zero(), T::one())
            };
            if blocked(stop) {
                return (start, Some(normal));
            }
            return (stop, Some(normal));
        }
    }
    if blocked(target) {
        (start, None)
    } else {
        (target, None)
    }
}
