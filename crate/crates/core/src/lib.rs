//! Symmetry-adapted displacement fields for a stadium sector and a
//! social-force evacuation simulator to compare sector layouts.
//!
//! The numeric code is generic over the scalar type: [`num::Real`] floats
//! for geometry and dynamics, any exact ring ([`num::Exact`], e.g. `i64` or
//! [`num_rational::Rational64`]) for the symmetry tables. Concrete aliases
//! for the common instantiations live at the crate root.

// `!(x > 0)` is the NaN-rejecting form used throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod engine;
pub mod floorfield;
pub mod geom;
pub mod num;
pub mod scenario;
pub mod symmetry;

pub use num::{Exact, Real};

pub type Vec2f64 = geom::Vec2<f64>;
pub type Vec2f32 = geom::Vec2<f32>;

pub type CellGridF64 = scenario::CellGrid<f64>;
pub type ScenarioF64 = scenario::ScenarioSpec<f64>;
pub type DistanceFieldF64 = floorfield::DistanceField<f64>;
pub type VelocityFieldF64 = floorfield::VelocityField<f64>;

pub type AgentF64 = dynamics::Agent<f64>;
pub type AgentF32 = dynamics::Agent<f32>;
pub type ForceParamsF64 = dynamics::ForceParams<f64>;

pub type SimulationConfigF64 = engine::SimulationConfig<f64>;
pub type RunMetricsF64 = engine::RunMetrics<f64>;
pub type ComparisonF64 = engine::ComparisonReport<f64>;

/// Orbit field with float components.
pub type Field4iF64 = symmetry::FieldOn4i<f64>;
/// Orbit field with integer components; the table rows live here exactly.
pub type Field4iInt = symmetry::FieldOn4i<i64>;
/// Orbit field with rational components for exact projection.
pub type Field4iExact = symmetry::FieldOn4i<num_rational::Rational64>;
pub type CoefficientsF64 = symmetry::CoefficientSet<f64>;
pub type CoefficientsExact = symmetry::CoefficientSet<num_rational::Rational64>;
