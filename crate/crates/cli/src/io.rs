use std::path::Path;

use symevac::scenario::{
    default_sam_spec, default_traditional_spec, generate_dead_end_room, parse_scenario, ScenarioSpec,
    DEFAULT_DESIRED_SPEED,
};

use crate::error::CliError;

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Writes to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// A scenario file, or one of the built-in layouts `sam`, `traditional`
/// and `deadend` when no file of that name exists.
pub fn load_scenario(arg: &str) -> Result<ScenarioSpec<f64>, CliError> {
    let path = Path::new(arg);
    if !path.exists() {
        match arg {
            "sam" => return Ok(default_sam_spec()),
            "traditional" => return Ok(default_traditional_spec()),
            "deadend" => {
                return Ok(ScenarioSpec {
                    grid: generate_dead_end_room(),
                    agent_count: 0,
                    desired_speed: DEFAULT_DESIRED_SPEED,
                    label: Some("deadend".into()),
                })
            }
            _ => {}
        }
    }
    let text = read(path)?;
    parse_scenario(&text).map_err(|source| CliError::Scenario {
        path: arg.to_owned(),
        source,
    })
}

/// Label from the scenario header, else the file stem.
pub fn label_of(spec: &ScenarioSpec<f64>, arg: &str) -> String {
    spec.label.clone().unwrap_or_else(|| {
        Path::new(arg)
            .file_stem()
            .map_or_else(|| arg.to_owned(), |s| s.to_string_lossy().into_owned())
    })
}
