use std::path::PathBuf;

use clap::Args;
use symevac::engine::{self, metrics_csv, trajectories_csv, RunMetrics};
use symevac::num::fmt_sig;

use crate::error::CliError;
use crate::io;
use crate::settings::Settings;

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Scenario file or built-in name (sam, traditional, deadend)
    scenario: String,
    /// Per-step metrics CSV (default: stdout)
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Also write `step,agent_id,x,y,vx,vy` here
    #[arg(long)]
    trajectories: Option<PathBuf>,
}

pub fn describe(m: &RunMetrics<f64>, dt: f64) -> String {
    let te = m.evacuation_steps.map_or_else(
        || "incomplete".to_owned(),
        |s| format!("{s} steps ({} s)", fmt_sig(s as f64 * dt)),
    );
    let evacuated = m.evacuated_count_series.last().copied().unwrap_or(0);
    format!(
        "t_e={te} mean_F_a={} N peak_F_a={} N evacuated={evacuated}/{}",
        fmt_sig(m.mean_force()),
        fmt_sig(m.peak_force()),
        m.agent_count
    )
}

pub fn run(args: &RunArgs, settings: &Settings) -> Result<(), CliError> {
    let spec = io::load_scenario(&args.scenario)?;
    let mut config = settings.sim.clone();
    config.record_trajectories = args.trajectories.is_some();
    let output = engine::run(&spec, &config)?;
    let m = &output.metrics;
    io::emit(args.out.as_deref(), &metrics_csv(m))?;
    if let Some(path) = &args.trajectories {
        io::write(path, &trajectories_csv(&output.trajectories))?;
    }
    let mut lines = vec![format!(
        "{}: {}",
        io::label_of(&spec, &args.scenario),
        describe(m, config.dt)
    )];
    let d = m.diagnostics;
    if d.coincident_pairs > 0 || d.embedded_events > 0 {
        lines.push(format!(
            "diagnostics: coincident_pairs={} embedded_events={}",
            d.coincident_pairs, d.embedded_events
        ));
    }
    for line in lines {
        if args.out.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
    Ok(())
}
