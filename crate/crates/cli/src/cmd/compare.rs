use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::Args;
use rayon::prelude::*;
use symevac::engine::{self, aggregate, compare, comparison_csv, gnuplot_series, summary, RunMetrics};
use symevac::num::fmt_sig;

use super::run::describe;
use crate::error::CliError;
use crate::io;
use crate::settings::Settings;

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// First scenario; ratios are A / B
    #[arg(value_name = "A")]
    scenario_a: String,
    /// Second scenario
    #[arg(value_name = "B")]
    scenario_b: String,
    /// Directory for per-seed CSV, gnuplot series and the summary
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

/// Keeps a label usable in file names and CSV headers.
fn slug(label: &str) -> String {
    let s: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect();
    if s.is_empty() {
        "scenario".into()
    } else {
        s
    }
}

fn per_seed_csv(seeds: &[u64], runs: &[(RunMetrics<f64>, RunMetrics<f64>)], la: &str, lb: &str) -> String {
    let mut out = format!(
        "seed,t_e_{la},t_e_{lb},mean_F_{la}_N,mean_F_{lb}_N,peak_F_{la}_N,peak_F_{lb}_N,completed_{la},completed_{lb}\n"
    );
    let te = |m: &RunMetrics<f64>| m.evacuation_steps.map_or_else(String::new, |s| s.to_string());
    for (seed, (a, b)) in seeds.iter().zip(runs) {
        writeln!(
            out,
            "{seed},{},{},{},{},{},{},{},{}",
            te(a),
            te(b),
            fmt_sig(a.mean_force()),
            fmt_sig(b.mean_force()),
            fmt_sig(a.peak_force()),
            fmt_sig(b.peak_force()),
            a.completed,
            b.completed
        )
        .unwrap();
    }
    out
}

pub fn run(args: &CompareArgs, settings: &Settings) -> Result<(), CliError> {
    let spec_a = io::load_scenario(&args.scenario_a)?;
    let spec_b = io::load_scenario(&args.scenario_b)?;
    if spec_a.agent_count != spec_b.agent_count {
        return Err(CliError::Config(format!(
            "agent counts differ ({} vs {}); a comparison needs equal crowds",
            spec_a.agent_count, spec_b.agent_count
        )));
    }
    let mut la = slug(&io::label_of(&spec_a, &args.scenario_a));
    let mut lb = slug(&io::label_of(&spec_b, &args.scenario_b));
    if la == lb {
        la.push_str("_a");
        lb.push_str("_b");
    }

    let seeds = &settings.seeds;
    let jobs: Vec<(u64, bool)> = seeds.iter().flat_map(|&s| [(s, true), (s, false)]).collect();
    let results: Vec<RunMetrics<f64>> = jobs
        .par_iter()
        .map(|&(seed, first)| {
            let mut config = settings.sim.clone();
            config.seed = seed;
            config.record_trajectories = false;
            let spec = if first { &spec_a } else { &spec_b };
            engine::run(spec, &config).map(|o| o.metrics)
        })
        .collect::<Result<_, _>>()?;
    let runs: Vec<(RunMetrics<f64>, RunMetrics<f64>)> =
        results.chunks(2).map(|p| (p[0].clone(), p[1].clone())).collect();

    let dt = settings.sim.dt;
    let mut text = String::new();
    for (seed, (a, b)) in seeds.iter().zip(&runs) {
        writeln!(text, "seed {seed}").unwrap();
        writeln!(text, "  {la}: {}", describe(a, dt)).unwrap();
        writeln!(text, "  {lb}: {}", describe(b, dt)).unwrap();
    }
    let (ma, mb): (Vec<_>, Vec<_>) = runs.iter().cloned().unzip();
    text.push_str(&summary(&la, &aggregate(&ma), &lb, &aggregate(&mb)));
    print!("{text}");

    if let Some(dir) = &args.out_dir {
        write_outputs(dir, seeds, &runs, &la, &lb, &text)?;
    }
    Ok(())
}

fn write_outputs(
    dir: &Path,
    seeds: &[u64],
    runs: &[(RunMetrics<f64>, RunMetrics<f64>)],
    la: &str,
    lb: &str,
    text: &str,
) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for (seed, (a, b)) in seeds.iter().zip(runs) {
        io::write(
            &dir.join(format!("comparison_seed{seed}.csv")),
            &comparison_csv(&compare(a, b), la, lb),
        )?;
        io::write(&dir.join(format!("{la}_seed{seed}.dat")), &gnuplot_series(a, la))?;
        io::write(&dir.join(format!("{lb}_seed{seed}.dat")), &gnuplot_series(b, lb))?;
    }
    io::write(&dir.join("per_seed.csv"), &per_seed_csv(seeds, runs, la, lb))?;
    io::write(&dir.join("summary.txt"), text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs_are_file_safe() {
        assert_eq!(slug("sam 2x1/v2"), "sam_2x1_v2");
        assert_eq!(slug(""), "scenario");
    }
}
