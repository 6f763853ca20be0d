//! `ventgen`: generate floor plans, simulate them, sweep and report.
//!
//! Exit codes: 0 success, 1 usage, 2 validation, 3 runtime.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ventgen::control::ControlMode;

#[derive(Parser, Debug)]
#[command(name = "ventgen", version, about = "WFC floor-plan generation and natural-ventilation energy/comfort simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct ConfigArg {
    /// Run configuration (JSON).
    #[arg(short, long, default_value = "config/example.json")]
    config: PathBuf,
}

#[derive(Args, Debug, Clone)]
struct JobsArg {
    /// Worker threads (defaults to all cores).
    #[arg(short, long, env = "VENTGEN_JOBS")]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve WFC grids and build the layout catalog.
    Generate {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(short, long, default_value = "out")]
        out: PathBuf,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override wfc.solution_count.
        #[arg(long)]
        solution_count: Option<usize>,
        /// Override the grid size, e.g. 40x40.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<(usize, usize)>,
        #[command(flatten)]
        jobs: JobsArg,
    },
    /// Simulate one (layout, orientation, climate, strategy) case.
    Simulate {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value = "out/catalog.json")]
        catalog: PathBuf,
        #[arg(short, long)]
        layout: usize,
        #[arg(long, default_value_t = 0.0)]
        orientation: f64,
        /// Climate label from the config.
        #[arg(long)]
        climate: String,
        #[arg(short, long, value_parser = parse_mode)]
        strategy: ControlMode,
        #[arg(short, long, default_value = "out")]
        out: PathBuf,
        /// Also write a day x hour heat map for this month.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=12))]
        svg_month: Option<u32>,
        /// Count every zone-hour in PNT, not only occupied ones.
        #[arg(long)]
        pnt_all_hours: bool,
    },
    /// Run the Cartesian product of layouts, orientations, climates and strategies.
    Sweep {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value = "out/catalog.json")]
        catalog: PathBuf,
        /// `all` or comma-separated catalog ids.
        #[arg(long, default_value = "all")]
        layouts: String,
        /// `deg` or `start:stop:step`.
        #[arg(long, default_value = "0:330:30")]
        orientations: String,
        /// `all` or comma-separated climate labels.
        #[arg(long, default_value = "all")]
        climates: String,
        #[arg(long, value_delimiter = ',', value_parser = parse_mode, default_value = "ac,nv,mm")]
        strategies: Vec<ControlMode>,
        #[arg(short, long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        pnt_all_hours: bool,
        #[command(flatten)]
        jobs: JobsArg,
    },
    /// Summarize a results CSV written by `sweep`.
    Report {
        #[arg(short, long, default_value = "out/results.csv")]
        results: PathBuf,
        /// Also write the report to this file.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn parse_mode(s: &str) -> Result<ControlMode, String> {
    s.parse()
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or("expected WIDTHxHEIGHT")?;
    let w = w.trim().parse().map_err(|e| format!("width: {e}"))?;
    let h = h.trim().parse().map_err(|e| format!("height: {e}"))?;
    Ok((w, h))
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Generate { config, out, seed, solution_count, grid, jobs } => {
            commands::init_pool(jobs.jobs).and_then(|_| commands::generate(&config.config, &out, seed, solution_count, grid))
        }
        Command::Simulate { config, catalog, layout, orientation, climate, strategy, out, svg_month, pnt_all_hours } => {
            commands::simulate(&commands::SimulateArgs {
                config: config.config,
                catalog,
                layout,
                orientation,
                climate,
                strategy,
                out,
                svg_month,
                pnt_all_hours,
            })
        }
        Command::Sweep { config, catalog, layouts, orientations, climates, strategies, out, pnt_all_hours, jobs } => {
            commands::sweep(&commands::SweepArgs {
                config: config.config,
                catalog,
                layouts,
                orientations,
                climates,
                strategies,
                out,
                pnt_all_hours,
                jobs: jobs.jobs,
            })
        }
        Command::Report { results, out } => commands::report(&results, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
