//! Simulation loop: seeded spawning, synchronous force/integration steps,
//! exit absorption and per-step metrics.

mod compare;
mod report;
mod spatial;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::dynamics::{self, Agent, DynamicsError, ForceBreakdown, ForceParams};
use crate::floorfield::{self, DistanceField, FieldError, VelocityField};
use crate::geom::Vec2;
use crate::num::Real;
use crate::scenario::{CellGrid, CellKind, ScenarioSpec};

pub use compare::{aggregate, compare, Aggregate, ComparisonReport};
pub use report::{comparison_csv, gnuplot_series, metrics_csv, summary, trajectories_csv};
pub use spatial::SpatialHash;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("seat at (row {row}, col {col}) cannot reach any exit")]
    Unreachable { row: usize, col: usize },
    #[error("agent_count {requested} exceeds the {seats} seat cells")]
    TooManyAgents { requested: usize, seats: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyParams<T> {
    /// kg
    pub mass: T,
    /// m
    pub radius: T,
}

impl<T: Real> Default for BodyParams<T> {
    fn default() -> Self {
        Self {
            mass: T::lit(80.0),
            radius: T::lit(0.25),
        }
    }
}

/// Body contacts have a stiffness of order k_body, so an explicit step of
/// 0.05 s is unstable for 80 kg agents; ten sub-steps keep `ω·h` well
/// below the limit.
pub const DEFAULT_SUBSTEPS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig<T> {
    pub seed: u64,
    /// s
    pub dt: T,
    /// Step budget; `None` means twenty times the free-flow time of the
    /// farthest seat.
    pub max_steps: Option<usize>,
    /// Integration sub-steps per step; forces are re-evaluated at each one.
    pub substeps: usize,
    pub force: ForceParams<T>,
    pub body: BodyParams<T>,
    /// Spawn offset bound as a fraction of the cell size.
    pub jitter: T,
    pub record_trajectories: bool,
}

impl<T: Real> Default for SimulationConfig<T> {
    fn default() -> Self {
        Self {
            seed: 0,
            dt: T::lit(0.05),
            max_steps: None,
            substeps: DEFAULT_SUBSTEPS,
            force: ForceParams::default(),
            body: BodyParams::default(),
            jitter: T::lit(0.1),
            record_trajectories: false,
        }
    }
}

impl<T: Real> SimulationConfig<T> {
    pub fn validate(&self) -> Result<(), EngineError> {
        self.force.validate()?;
        if !(self.dt > T::zero()) {
            return Err(EngineError::InvalidConfig("dt must be positive".into()));
        }
        if self.substeps == 0 {
            return Err(EngineError::InvalidConfig("substeps must be at least 1".into()));
        }
        if self.max_steps == Some(0) {
            return Err(EngineError::InvalidConfig("max_steps must be at least 1".into()));
        }
        if !(self.body.mass > T::zero() && self.body.radius > T::zero()) {
            return Err(EngineError::InvalidConfig("mass and radius must be positive".into()));
        }
        if !(self.jitter >= T::zero() && self.jitter < T::lit(0.5)) {
            return Err(EngineError::InvalidConfig("jitter must lie in [0, 0.5)".into()));
        }
        Ok(())
    }

    /// Twenty times the free-flow time of the farthest seat, at least 100
    /// steps.
    pub fn default_max_steps(spec: &ScenarioSpec<T>, dist: &DistanceField<T>, dt: T) -> usize {
        let far = dist.max_over(&spec.grid, CellKind::Seat).unwrap_or_else(T::zero);
        let free_flow = far / spec.desired_speed / dt;
        (T::lit(20.0) * free_flow)
            .ceil()
            .to_usize()
            .unwrap_or(usize::MAX)
            .max(100)
    }
}

/// One agent per chosen seat, ids in row-major seat order. When fewer agents
/// than seats are requested the seats are picked by a seeded shuffle.
pub fn spawn_agents<T: Real>(
    spec: &ScenarioSpec<T>,
    config: &SimulationConfig<T>,
) -> Result<Vec<Agent<T>>, EngineError> {
    let mut seats = spec.grid.indices_of(CellKind::Seat);
    if spec.agent_count > seats.len() {
        return Err(EngineError::TooManyAgents {
            requested: spec.agent_count,
            seats: seats.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    if spec.agent_count < seats.len() {
        seats.shuffle(&mut rng);
        seats.truncate(spec.agent_count);
        seats.sort_unstable();
    }
    let amp = config.jitter.to_f64_lossy();
    let cell = spec.grid.cell_size();
    Ok(seats
        .into_iter()
        .enumerate()
        .map(|(id, seat)| {
            let (r, c) = spec.grid.coords(seat);
            let (jx, jy) = if amp > 0.0 {
                (rng.gen_range(-amp..=amp), rng.gen_range(-amp..=amp))
            } else {
                (0.0, 0.0)
            };
            let offset = Vec2::new(T::lit(jx), T::lit(jy)) * cell;
            Agent::at_rest(
                id,
                spec.grid.cell_center(r, c) + offset,
                config.body.mass,
                config.body.radius,
                spec.desired_speed,
            )
        })
        .collect())
}

/// Per-step record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord<T> {
    pub step: usize,
    /// Agents still inside after the step.
    pub active: usize,
    /// Agents absorbed so far.
    pub evacuated: usize,
    /// Mean non-driving force magnitude over agents active at step start.
    pub avg_force: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Diagnostics {
    pub coincident_pairs: u64,
    pub embedded_events: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRow<T> {
    pub step: usize,
    pub agent_id: usize,
    pub position: Vec2<T>,
    pub velocity: Vec2<T>,
}

/// How neighbors are gathered for the social term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeighborSearch {
    SpatialHash,
    /// All active agents; the reference for the hash.
    BruteForce,
}

pub struct SimulationState<'a, T> {
    pub step: usize,
    pub agents: Vec<Agent<T>>,
    grid: &'a CellGrid<T>,
    field: &'a VelocityField<T>,
    index: SpatialHash<T>,
    diagnostics: Diagnostics,
}

impl<'a, T: Real> SimulationState<'a, T> {
    /// Bucket edge: twice the largest radius plus the social cutoff margin.
    pub fn new(
        agents: Vec<Agent<T>>,
        grid: &'a CellGrid<T>,
        field: &'a VelocityField<T>,
        params: &ForceParams<T>,
    ) -> Self {
        let max_radius = agents.iter().map(|a| a.radius).fold(T::zero(), T::max);
        let bucket = params.pair_cutoff(max_radius + max_radius).max(grid.cell_size());
        let mut state = Self {
            step: 0,
            agents,
            grid,
            field,
            index: SpatialHash::new(grid.extent(), bucket),
            diagnostics: Diagnostics::default(),
        };
        state.reindex();
        state
    }

    fn reindex(&mut self) {
        let agents = &self.agents;
        self.index.rebuild(
            agents
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.evacuated)
                .map(|(i, a)| (i, a.position)),
        );
    }

    pub fn active_count(&self) -> usize {
        self.agents.iter().filter(|a| !a.evacuated).count()
    }

    pub fn diagnostics(&self) -> Diagnostics {
        self.diagnostics
    }

    pub fn grid(&self) -> &CellGrid<T> {
        self.grid
    }

    /// Forces on every active agent from the current snapshot, in index
    /// order.
    pub fn compute_forces(&self, params: &ForceParams<T>, search: NeighborSearch) -> Vec<(usize, ForceBreakdown<T>)> {
        let active: Vec<usize> = (0..self.agents.len()).filter(|&i| !self.agents[i].evacuated).collect();
        active
            .par_iter()
            .map_init(Vec::new, |scratch, &i| {
                let agent = &self.agents[i];
                match search {
                    NeighborSearch::SpatialHash => self.index.query(agent.position, scratch),
                    NeighborSearch::BruteForce => {
                        scratch.clear();
                        scratch.extend(active.iter().copied());
                    }
                }
                let neighbors = scratch
                    .iter()
                    .filter(|&&j| j != i && !self.agents[j].evacuated)
                    .map(|&j| &self.agents[j]);
                (
                    i,
                    dynamics::total_force(agent, neighbors, self.grid, self.field, params),
                )
            })
            .collect()
    }

    /// Advances every active agent by one synchronous step. The reported
    /// force is sampled from the snapshot at step start; the motion is
    /// integrated in `config.substeps` equal sub-steps.
    pub fn step(&mut self, config: &SimulationConfig<T>) -> Result<StepRecord<T>, EngineError> {
        let h = config.dt / T::lit(config.substeps as f64);
        let mut started = 0;
        let mut pressure_sum = T::zero();
        for sub in 0..config.substeps {
            let forces = self.compute_forces(&config.force, NeighborSearch::SpatialHash);
            if forces.is_empty() {
                break;
            }
            if sub == 0 {
                started = forces.len();
                pressure_sum = forces.iter().fold(T::zero(), |acc, (_, f)| acc + f.pressure());
            }
            for (_, f) in &forces {
                self.diagnostics.coincident_pairs += u64::from(f.coincident_pairs);
                self.diagnostics.embedded_events += u64::from(f.embedded);
            }
            let updated: Vec<Result<Agent<T>, DynamicsError>> = forces
                .par_iter()
                .map(|(i, f)| dynamics::integrate_agent(&self.agents[*i], f.total(), h, config.force.v_max, self.grid))
                .collect();
            for ((i, _), next) in forces.iter().zip(updated) {
                let mut next = next?;
                if self.grid.kind_at(next.position) == Some(CellKind::Exit) {
                    next.evacuated = true;
                }
                self.agents[*i] = next;
            }
            self.reindex();
        }
        self.step += 1;
        let active = self.active_count();
        let avg_force = if started == 0 {
            T::zero()
        } else {
            pressure_sum / T::lit(started as f64)
        };
        if !avg_force.is_finite() {
            return Err(DynamicsError::NonFiniteForce { id: usize::MAX }.into());
        }
        Ok(StepRecord {
            step: self.step,
            active,
            evacuated: self.agents.len() - active,
            avg_force,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics<T> {
    pub agent_count: usize,
    /// Steps until the last agent left (t_e); `None` if the run was cut off.
    pub evacuation_steps: Option<usize>,
    pub avg_force_series: Vec<T>,
    pub evacuated_count_series: Vec<usize>,
    pub active_series: Vec<usize>,
    pub completed: bool,
    pub diagnostics: Diagnostics,
}

impl<T: Real> RunMetrics<T> {
    pub fn steps(&self) -> usize {
        self.avg_force_series.len()
    }

    /// Time mean of the per-step force series.
    pub fn mean_force(&self) -> T {
        if self.avg_force_series.is_empty() {
            return T::zero();
        }
        let sum = self.avg_force_series.iter().fold(T::zero(), |acc, &f| acc + f);
        sum / T::lit(self.avg_force_series.len() as f64)
    }

    pub fn peak_force(&self) -> T {
        self.avg_force_series.iter().copied().fold(T::zero(), T::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput<T> {
    pub metrics: RunMetrics<T>,
    pub trajectories: Vec<TrajectoryRow<T>>,
}

/// Fields derived from a scenario grid.
pub struct PreparedScenario<T> {
    pub distance: DistanceField<T>,
    pub velocity: VelocityField<T>,
}

/// Computes the potential field and refuses grids with stranded seats.
pub fn prepare<T: Real>(spec: &ScenarioSpec<T>) -> Result<PreparedScenario<T>, EngineError> {
    let distance = floorfield::compute_distance_field(&spec.grid)?;
    if let Some(seat) = spec
        .grid
        .indices_of(CellKind::Seat)
        .into_iter()
        .find(|&i| distance.path(i).is_none())
    {
        let (row, col) = spec.grid.coords(seat);
        return Err(EngineError::Unreachable { row, col });
    }
    let velocity = floorfield::compute_velocity_field(&spec.grid, &distance, spec.desired_speed)?;
    Ok(PreparedScenario { distance, velocity })
}

/// Steps until every agent is out or `max_steps` is reached.
pub fn run<T: Real>(spec: &ScenarioSpec<T>, config: &SimulationConfig<T>) -> Result<RunOutput<T>, EngineError> {
    config.validate()?;
    let prepared = prepare(spec)?;
    let agents = spawn_agents(spec, config)?;
    let agent_count = agents.len();
    let mut state = SimulationState::new(agents, &spec.grid, &prepared.velocity, &config.force);

    let mut metrics = RunMetrics {
        agent_count,
        evacuation_steps: None,
        avg_force_series: Vec::new(),
        evacuated_count_series: Vec::new(),
        active_series: Vec::new(),
        completed: false,
        diagnostics: Diagnostics::default(),
    };
    let mut trajectories = Vec::new();
    let max_steps = config
        .max_steps
        .unwrap_or_else(|| SimulationConfig::default_max_steps(spec, &prepared.distance, config.dt));
    while state.active_count() > 0 && state.step < max_steps {
        let moving: Vec<usize> = if config.record_trajectories {
            (0..state.agents.len())
                .filter(|&i| !state.agents[i].evacuated)
                .collect()
        } else {
            Vec::new()
        };
        let record = state.step(config)?;
        metrics.avg_force_series.push(record.avg_force);
        metrics.evacuated_count_series.push(record.evacuated);
        metrics.active_series.push(record.active);
        for i in moving {
            let a = &state.agents[i];
            trajectories.push(TrajectoryRow {
                step: record.step,
                agent_id: a.id,
                position: a.position,
                velocity: a.velocity,
            });
        }
    }
    metrics.completed = state.active_count() == 0;
    metrics.evacuation_steps = metrics.completed.then_some(state.step);
    metrics.diagnostics = state.diagnostics();
    Ok(RunOutput { metrics, trajectories })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    /// Three cells wide, exit column on the left, seats on the middle row.
    fn corridor(len: usize, seats: &[usize]) -> ScenarioSpec<f64> {
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

    #[test]
    fn spawn_is_seeded() {
        let spec = corridor(10, &[2, 5, 8]);
        let cfg = SimulationConfig {
            seed: 42,
            ..Default::default()
        };
        let a = spawn_agents(&spec, &cfg).unwrap();
        let b = spawn_agents(&spec, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        for agent in &a {
            let (r, c) = spec.grid.cell_of(agent.position).unwrap();
            assert_eq!(spec.grid.get(r, c), CellKind::Seat);
            let center = spec.grid.cell_center(r, c);
            assert!((agent.position.x - center.x).abs() <= 0.05 + 1e-12);
            assert!((agent.position.y - center.y).abs() <= 0.05 + 1e-12);
            assert_eq!(agent.velocity, Vec2::zero());
        }
    }

    #[test]
    fn spawn_subset_and_empty() {
        let mut spec = corridor(10, &[1, 2, 3, 4, 5, 6]);
        spec.agent_count = 2;
        let cfg = SimulationConfig::default();
        let agents = spawn_agents(&spec, &cfg).unwrap();
        assert_eq!(agents.len(), 2);
        assert_ne!(
            spec.grid.cell_of(agents[0].position),
            spec.grid.cell_of(agents[1].position)
        );
        spec.agent_count = 0;
        assert!(spawn_agents(&spec, &cfg).unwrap().is_empty());
        spec.agent_count = 7;
        assert!(matches!(
            spawn_agents(&spec, &cfg),
            Err(EngineError::TooManyAgents { .. })
        ));
    }

    #[test]
    fn empty_step_appends_zero() {
        let spec = corridor(4, &[]);
        let prepared = prepare(&spec).unwrap();
        let cfg = SimulationConfig::default();
        let mut state = SimulationState::new(Vec::new(), &spec.grid, &prepared.velocity, &cfg.force);
        let rec = state.step(&cfg).unwrap();
        assert_eq!(
            rec,
            StepRecord {
                step: 1,
                active: 0,
                evacuated: 0,
                avg_force: 0.0
            }
        );
    }

    #[test]
    fn single_agent_corridor() {
        // seat centre 9.75 m from the exit face, one free cell behind it
        let spec = corridor(21, &[19]);
        let out = run(&spec, &SimulationConfig::default()).unwrap();
        let m = out.metrics;
        assert!(m.completed);
        let te = m.evacuation_steps.unwrap() as f64;
        // 10 m at 1.5 m/s in 0.05 s steps
        assert!((te - 133.3).abs() <= 10.0, "t_e = {te}");
    }

    #[test]
    fn max_steps_cuts_run() {
        let spec = corridor(20, &[5, 10, 15]);
        let cfg = SimulationConfig {
            max_steps: Some(1),
            ..Default::default()
        };
        let m = run(&spec, &cfg).unwrap().metrics;
        assert!(!m.completed);
        assert_eq!(m.evacuation_steps, None);
        assert_eq!(m.avg_force_series.len(), 1);
    }

    #[test]
    fn unreachable_seat_refused() {
        let text = "@cell_size 0.5\n@agent_count 1\n@desired_speed 1.5\n@map\n#E####\n#..#S#\n######\n";
        let spec: ScenarioSpec<f64> = parse_scenario(text).unwrap();
        assert_eq!(
            run(&spec, &SimulationConfig::default()).unwrap_err(),
            EngineError::Unreachable { row: 1, col: 4 }
        );
    }

    #[test]
    fn trajectories_recorded() {
        let spec = corridor(6, &[3]);
        let cfg = SimulationConfig {
            record_trajectories: true,
            ..Default::default()
        };
        let out = run(&spec, &cfg).unwrap();
        assert_eq!(out.trajectories.len(), out.metrics.steps());
        assert!(out.trajectories.iter().all(|t| t.agent_id == 0));
    }
}
