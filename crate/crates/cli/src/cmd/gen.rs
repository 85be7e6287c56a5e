use std::path::PathBuf;

use clap::{Args, ValueEnum};
use symevac::scenario::{
    generate_dead_end_room, generate_sam_sector_with, generate_traditional_sector, serialize_scenario, CellGrid,
    CellKind, SamLayout, ScenarioSpec, DEFAULT_AISLES, DEFAULT_AISLE_WIDTH, DEFAULT_CELL_SIZE, DEFAULT_DESIRED_SPEED,
    DEFAULT_ROWS, DEFAULT_SAM_COEFFICIENTS, DEFAULT_SEATS_PER_ROW,
};
use symevac::symmetry::sam_displacement_field;

use crate::error::CliError;
use crate::io;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Sam,
    Traditional,
    Deadend,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long, default_value_t = DEFAULT_ROWS)]
    rows: usize,
    #[arg(long, default_value_t = DEFAULT_SEATS_PER_ROW)]
    seats_per_row: usize,
    /// Cell edge in m
    #[arg(long, default_value_t = DEFAULT_CELL_SIZE)]
    cell_size: f64,
    /// Interior aisle columns of the traditional sector
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_AISLES)]
    aisles: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_SAM_COEFFICIENTS.0, allow_negative_numbers = true)]
    a4: f64,
    #[arg(long, default_value_t = DEFAULT_SAM_COEFFICIENTS.1, allow_negative_numbers = true)]
    b4: f64,
    #[arg(long, default_value_t = DEFAULT_SAM_COEFFICIENTS.2, allow_negative_numbers = true)]
    c1: f64,
    /// Cells across one SAM aisle branch
    #[arg(long, default_value_t = DEFAULT_AISLE_WIDTH)]
    aisle_width: usize,
    /// Field cells tiled across the SAM sector
    #[arg(long, default_value_t = SamLayout::default().cells_across)]
    cells_across: usize,
    /// Field cells stacked front to back in the SAM sector
    #[arg(long, default_value_t = SamLayout::default().cells_up)]
    cells_up: usize,
    /// Agents to spawn (default: one per seat)
    #[arg(long)]
    agents: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_DESIRED_SPEED)]
    desired_speed: f64,
    #[arg(long)]
    label: Option<String>,
    /// Output file (default: stdout)
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn grid(args: &GenArgs) -> Result<CellGrid<f64>, CliError> {
    Ok(match args.kind {
        Kind::Traditional => generate_traditional_sector(args.rows, args.seats_per_row, &args.aisles, args.cell_size)?,
        Kind::Sam => {
            let field = sam_displacement_field(args.a4, args.b4, args.c1)?;
            let layout = SamLayout {
                aisle_width: args.aisle_width,
                cells_across: args.cells_across,
                cells_up: args.cells_up,
            };
            generate_sam_sector_with(args.rows, args.seats_per_row, &field, args.cell_size, layout)?
        }
        Kind::Deadend => generate_dead_end_room(),
    })
}

pub fn run(args: &GenArgs) -> Result<(), CliError> {
    let grid = grid(args)?;
    let seats = grid.count(CellKind::Seat);
    let exits = grid.count(CellKind::Exit);
    let agent_count = args.agents.unwrap_or(seats);
    if agent_count > seats {
        return Err(CliError::Config(format!(
            "{agent_count} agents exceed the {seats} seats"
        )));
    }
    let label = args.label.clone().unwrap_or_else(|| {
        ValueEnum::to_possible_value(&args.kind)
            .map(|v| v.get_name().to_owned())
            .unwrap_or_default()
    });
    let spec = ScenarioSpec {
        grid,
        agent_count,
        desired_speed: args.desired_speed,
        label: Some(label),
    };
    let text = serialize_scenario(&spec);
    let counts = format!(
        "seats={seats} exits={exits} agents={agent_count} size={}x{}",
        spec.grid.width(),
        spec.grid.height()
    );
    match &args.out {
        Some(path) => {
            io::write(path, &text)?;
            println!("{counts}");
        }
        None => {
            print!("{text}");
            eprintln!("{counts}");
        }
    }
    Ok(())
}
