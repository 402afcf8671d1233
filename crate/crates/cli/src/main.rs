//! `eccpie`: eccentric pie charts and the regular 3-blade pie cut from the
//! command line.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "eccpie", version, about = "Eccentric pie charts and constrained pie cutting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lay out an eccentric pie chart.
    Chart(ChartArgs),
    /// Place a regular 3-blade cutter so the slices have given areas.
    Cut(CutArgs),
    /// Export or solve a polynomial system by total-degree homotopy.
    SolvePoly(SolvePolyArgs),
    /// Alternating sector sums for equiangular cuts through a point.
    Pizza(PizzaArgs),
    /// The 3×3 grid of charts with apexes on {-1/2, 0, 1/2}².
    Grid(GridArgs),
}

#[derive(clap::Args)]
struct Output {
    /// Write the SVG drawing here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Add per-stage timings to the JSON report (makes it non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(clap::Args)]
struct ChartArgs {
    /// Comma-separated shares summing to 1.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    shares: List,
    /// Apex `x,y`, strictly inside the unit circle.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    apex: (f64, f64),
    /// Where the first ray meets the circle.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "0,1")]
    start: (f64, f64),
    #[arg(long)]
    clockwise: bool,
    /// Leave out percentage labels.
    #[arg(long)]
    no_labels: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Oracle,
    Pipeline,
    Refine,
}

#[derive(clap::Args)]
struct CutArgs {
    /// Three comma-separated slice shares summing to 1.
    #[arg(long, value_parser = parse_list)]
    proportions: List,
    #[arg(long, value_enum, default_value = "oracle")]
    mode: Mode,
    /// Maximum number of homotopy paths (pipeline mode).
    #[arg(long, default_value_t = eccpie::solvers::DEFAULT_PATH_BUDGET)]
    path_budget: u128,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Refine-mode starting point: 11 comma-separated values or `reference`.
    #[arg(long, allow_hyphen_values = true)]
    start: Vec<String>,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Builtin {
    Piecut,
    SingleSector,
}

#[derive(clap::Args)]
struct SolvePolyArgs {
    /// System file in the plain-text format.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    system: Option<PathBuf>,
    /// Build a system instead of reading one.
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
    /// Shares for `--builtin piecut` (the third is the remainder).
    #[arg(long, value_parser = parse_list, default_value = "0.4,0.35,0.25")]
    proportions: List,
    /// Share for `--builtin single-sector`.
    #[arg(long, default_value_t = 0.25)]
    lambda: f64,
    /// Apex for `--builtin single-sector`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "0.1,-0.2")]
    apex: (f64, f64),
    /// Expansion point of the arccos polynomial.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    taylor_center: f64,
    #[arg(long, default_value_t = eccpie::taylor::DEFAULT_TERMS)]
    taylor_terms: usize,
    /// Only write the system in text form (to `--out` or stdout).
    #[arg(long)]
    export_only: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = eccpie::solvers::DEFAULT_PATH_BUDGET)]
    path_budget: u128,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    timing: bool,
}

#[derive(clap::Args)]
struct PizzaArgs {
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    apex: (f64, f64),
    /// Number of lines through the apex (even, at least 4).
    #[arg(long)]
    blades: usize,
    /// Direction of the first line.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(clap::Args)]
struct GridArgs {
    #[arg(long)]
    no_labels: bool,
    #[command(flatten)]
    out: Output,
}

/// A comma-separated list is one argument; the alias keeps clap from
/// treating the field as repeated values.
type List = Vec<f64>;

fn parse_list(s: &str) -> Result<List, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect()
}

fn parse_point(s: &str) -> Result<(f64, f64), String> {
    match parse_list(s)?.as_slice() {
        &[x, y] => Ok((x, y)),
        _ => Err(format!("expected `x,y`, got `{s}`")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Chart(a) => commands::chart(a),
        Command::Cut(a) => commands::cut(a),
        Command::SolvePoly(a) => commands::solve_poly(a),
        Command::Pizza(a) => commands::pizza(a),
        Command::Grid(a) => commands::grid(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
