use std::io;
use std::path::PathBuf;

use symevac::engine::EngineError;
use symevac::floorfield::FieldError;
use symevac::scenario::ScenarioError;
use symevac::symmetry::SymmetryError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Scenario {
        path: String,
        #[source]
        source: ScenarioError,
    },
    #[error(transparent)]
    Geometry(#[from] ScenarioError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Check(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable class printed as `error[<class>]`.
    pub fn class(&self) -> &'static str {
        match self {
            Self::Io { .. } => "io",
            Self::Scenario { .. } => "parse",
            Self::Geometry(ScenarioError::Unreachable { .. }) => "unreachable",
            Self::Geometry(_) => "geometry",
            Self::Field(_) => "field",
            Self::Symmetry(_) => "symmetry",
            Self::Engine(EngineError::Unreachable { .. }) => "unreachable",
            Self::Engine(_) => "engine",
            Self::Config(_) => "config",
            Self::Check(_) => "check",
        }
    }
}
