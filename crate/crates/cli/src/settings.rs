//! Simulation settings from defaults, a `key = value` file and flags, in
//! that order of precedence.

use std::fmt::Write;
use std::path::Path;

use clap::Args;
use symevac::engine::SimulationConfig;

use crate::error::CliError;

/// Flags that mirror the config-file keys one to one.
#[derive(Debug, Clone, Default, Args)]
pub struct SimFlags {
    /// Seed for spawn order and jitter
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Comma-separated seeds for `compare`
    #[arg(long, global = true, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    /// Time step in seconds
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    /// Step budget (default: 20x the free-flow time of the farthest seat)
    #[arg(long, global = true)]
    pub max_steps: Option<usize>,
    /// Integration sub-steps per step
    #[arg(long, global = true)]
    pub substeps: Option<usize>,
    /// Agent mass in kg
    #[arg(long, global = true)]
    pub mass: Option<f64>,
    /// Agent radius in m
    #[arg(long, global = true)]
    pub radius: Option<f64>,
    /// Relaxation time in s
    #[arg(long, global = true)]
    pub tau: Option<f64>,
    /// Social repulsion strength in N
    #[arg(long, global = true)]
    pub a: Option<f64>,
    /// Social repulsion range in m
    #[arg(long, global = true)]
    pub b: Option<f64>,
    /// Body compression constant in kg/s^2
    #[arg(long, global = true)]
    pub k_body: Option<f64>,
    /// Sliding friction constant in kg/(m s)
    #[arg(long, global = true)]
    pub kappa: Option<f64>,
    /// Speed cap in m/s
    #[arg(long, global = true)]
    pub v_max: Option<f64>,
    /// Spawn jitter as a fraction of the cell size
    #[arg(long, global = true)]
    pub jitter: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub sim: SimulationConfig<f64>,
    pub seeds: Vec<u64>,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            sim: SimulationConfig::default(),
            seeds: vec![0, 1, 2, 3, 4],
        }
    }
}

pub const KEYS: [&str; 14] = [
    "seed",
    "seeds",
    "dt",
    "max_steps",
    "substeps",
    "mass",
    "radius",
    "tau",
    "a",
    "b",
    "k_body",
    "kappa",
    "v_max",
    "jitter",
];

fn bad(key: &str, value: &str) -> CliError {
    CliError::Config(format!("invalid value {value:?} for {key}"))
}

fn num<V: std::str::FromStr>(key: &str, value: &str) -> Result<V, CliError> {
    value.parse().map_err(|_| bad(key, value))
}

impl Settings {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let s = &mut self.sim;
        match key {
            "seed" => s.seed = num(key, value)?,
            "seeds" => {
                self.seeds = value.split(',').map(|v| num(key, v.trim())).collect::<Result<_, _>>()?;
            }
            "dt" => s.dt = num(key, value)?,
            "max_steps" => {
                s.max_steps = if value == "auto" { None } else { Some(num(key, value)?) };
            }
            "substeps" => s.substeps = num(key, value)?,
            "mass" => s.body.mass = num(key, value)?,
            "radius" => s.body.radius = num(key, value)?,
            "tau" => s.force.tau = num(key, value)?,
            "a" => s.force.a = num(key, value)?,
            "b" => s.force.b = num(key, value)?,
            "k_body" => s.force.k_body = num(key, value)?,
            "kappa" => s.force.kappa = num(key, value)?,
            "v_max" => s.force.v_max = num(key, value)?,
            "jitter" => s.jitter = num(key, value)?,
            _ => return Err(CliError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    pub fn apply_file_text(&mut self, text: &str) -> Result<(), CliError> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", n + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| CliError::Config(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn apply_flags(&mut self, f: &SimFlags) {
        let s = &mut self.sim;
        macro_rules! take {
            ($($flag:ident => $dst:expr),* $(,)?) => {
                $(if let Some(v) = f.$flag.clone() { $dst = v; })*
            };
        }
        take! {
            seed => s.seed,
            dt => s.dt,
            substeps => s.substeps,
            mass => s.body.mass,
            radius => s.body.radius,
            tau => s.force.tau,
            a => s.force.a,
            b => s.force.b,
            k_body => s.force.k_body,
            kappa => s.force.kappa,
            v_max => s.force.v_max,
            jitter => s.jitter,
            seeds => self.seeds,
        }
        if f.max_steps.is_some() {
            s.max_steps = f.max_steps;
        }
    }

    pub fn load(config: Option<&Path>, flags: &SimFlags) -> Result<Self, CliError> {
        let mut settings = Self::default();
        if let Some(path) = config {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            settings.apply_file_text(&text)?;
        }
        settings.apply_flags(flags);
        settings.sim.validate()?;
        if settings.seeds.is_empty() {
            return Err(CliError::Config("seed list is empty".into()));
        }
        Ok(settings)
    }

    /// Every key with its effective value, readable back by `--config`.
    pub fn render(&self) -> String {
        let s = &self.sim;
        let seeds: Vec<String> = self.seeds.iter().map(u64::to_string).collect();
        let max_steps = s.max_steps.map_or_else(|| "auto".to_owned(), |m| m.to_string());
        let values = [
            s.seed.to_string(),
            seeds.join(","),
            s.dt.to_string(),
            max_steps,
            s.substeps.to_string(),
            s.body.mass.to_string(),
            s.body.radius.to_string(),
            s.force.tau.to_string(),
            s.force.a.to_string(),
            s.force.b.to_string(),
            s.force.k_body.to_string(),
            s.force.kappa.to_string(),
            s.force.v_max.to_string(),
            s.jitter.to_string(),
        ];
        let mut out = String::new();
        for (k, v) in KEYS.iter().zip(values) {
            writeln!(out, "{k} = {v}").unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_round_trips() {
        let mut s = Settings::default();
        s.set("dt", "0.01").unwrap();
        s.set("seeds", "3, 9").unwrap();
        s.set("max_steps", "500").unwrap();
        let mut back = Settings::default();
        back.apply_file_text(&s.render()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn flags_win_over_file() {
        let mut s = Settings::default();
        s.apply_file_text("seed = 4\na = 1500 # softer\n").unwrap();
        s.apply_flags(&SimFlags {
            seed: Some(9),
            ..Default::default()
        });
        assert_eq!(s.sim.seed, 9);
        assert_eq!(s.sim.force.a, 1500.0);
    }

    #[test]
    fn rejects_unknown_keys_and_values() {
        let mut s = Settings::default();
        assert!(s.apply_file_text("speed = 2").is_err());
        assert!(s.apply_file_text("dt = fast").is_err());
        assert!(s.apply_file_text("dt").is_err());
    }
}
