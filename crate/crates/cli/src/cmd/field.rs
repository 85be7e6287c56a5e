use std::fmt::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use symevac::floorfield::{
    compute_distance_field, compute_naive_field, compute_velocity_field, render_ascii, stranded_cells, CellFlag,
    VelocityField,
};
use symevac::num::fmt_sig;

use crate::error::CliError;
use crate::io;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Shortest walkable path to any exit
    Potential,
    /// Sum of unit vectors towards every exit
    Naive,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Scenario file or built-in name (sam, traditional, deadend)
    scenario: String,
    #[arg(long, value_enum, default_value_t = Method::Potential)]
    method: Method,
    /// CSV `row,col,vx,vy` output (default: stdout)
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Print an arrow map to stderr
    #[arg(long)]
    ascii: bool,
}

pub fn field_csv(field: &VelocityField<f64>) -> String {
    let mut out = String::from("row,col,vx,vy\n");
    for r in 0..field.height() {
        for c in 0..field.width() {
            let v = field.vector(r * field.width() + c);
            writeln!(out, "{r},{c},{},{}", fmt_sig(v.x), fmt_sig(v.y)).unwrap();
        }
    }
    out
}

pub fn run(args: &FieldArgs) -> Result<(), CliError> {
    let spec = io::load_scenario(&args.scenario)?;
    let field = match args.method {
        Method::Potential => {
            let dist = compute_distance_field(&spec.grid)?;
            compute_velocity_field(&spec.grid, &dist, spec.desired_speed)?
        }
        Method::Naive => compute_naive_field(&spec.grid, spec.desired_speed)?,
    };
    io::emit(args.out.as_deref(), &field_csv(&field))?;
    if args.ascii {
        eprint!("{}", render_ascii(&field));
    }
    eprintln!(
        "stranded={} zero_resultant={} unreachable={}",
        stranded_cells(&spec.grid, &field).len(),
        field.count_flag(CellFlag::ZeroResultant),
        field.count_flag(CellFlag::Unreachable),
    );
    Ok(())
}
