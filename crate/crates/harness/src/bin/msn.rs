use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use msn_core::geometry::DEFAULT_SPHERE_SEED;
use msn_core::Precision;
use msn_harness::output::write_metadata;
use msn_harness::{
    run_cell, run_table, table, write_figure_data, write_table_csv, write_wide_csv, ExperimentConfig, HarnessError,
    Solver,
};

#[derive(Parser)]
#[command(name = "msn", about = "Minimum Sobolev norm Birkhoff interpolation benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every cell of a table and write the results as CSV.
    Run {
        /// Table number (1..17) or name.
        #[arg(long)]
        table: String,
        /// Override the table's working precision.
        #[arg(long)]
        precision: Option<Precision>,
        #[arg(long, default_value = "msn")]
        solver: Solver,
        /// Include the largest rows (long dense factorizations).
        #[arg(long)]
        full: bool,
        /// Seed of the sphere point sets.
        #[arg(long, default_value_t = DEFAULT_SPHERE_SEED)]
        seed: u64,
        /// Output file (stdout if omitted); a `.meta` file is written next to it.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the table layout (rows n, columns s) instead of one row per cell.
        #[arg(long)]
        wide: bool,
    },
    /// Run a single cell and print its CSV row.
    Cell {
        #[arg(long)]
        table: String,
        /// Size: n, d, or m x n for the annular grid (e.g. 5x32).
        #[arg(long)]
        n: String,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        precision: Option<Precision>,
        #[arg(long, default_value = "msn")]
        solver: Solver,
        #[arg(long, default_value_t = DEFAULT_SPHERE_SEED)]
        seed: u64,
    },
    /// Sample the test functions for plotting.
    FigureData {
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, HarnessError> {
    match cli.command {
        Command::Run {
            table: id,
            precision,
            solver,
            full,
            seed,
            out,
            wide,
        } => {
            let t = table(&id)?;
            let precision = precision.unwrap_or(t.precision);
            let result = run_table(t, precision, solver, full, seed, |cell| match cell {
                Ok(r) => eprintln!(
                    "table {} n={} s={}: error {:.3e}, degree {}, residual {:.1e}, {} ms{}",
                    r.table,
                    r.size,
                    r.s,
                    r.error,
                    r.degree,
                    r.constraint_residual,
                    r.wall_time_ms,
                    if r.residual_ok() { "" } else { " [residual gate FAILED]" }
                ),
                Err(e) => eprintln!("{e}"),
            });
            let write = |w: &mut dyn Write| {
                if wide {
                    write_wide_csv(&result, w)
                } else {
                    write_table_csv(&result, w)
                }
            };
            match out {
                Some(path) => {
                    let mut f = BufWriter::new(File::create(&path)?);
                    write(&mut f)?;
                    f.flush()?;
                    let mut meta = path.into_os_string();
                    meta.push(".meta");
                    write_metadata(&result, File::create(meta)?)?;
                }
                None => write(&mut io::stdout().lock())?,
            }
            Ok(result.all_passed())
        }
        Command::Cell {
            table: id,
            n,
            s,
            precision,
            solver,
            seed,
        } => {
            let t = table(&id)?;
            let size = t.size_for_str(&n)?;
            let mut cfg = ExperimentConfig::new(t, size, s);
            cfg.precision = precision.unwrap_or(t.precision);
            cfg.solver = solver;
            cfg.seed = seed;
            let r = run_cell(&cfg)?;
            eprintln!(
                "{} conditions, {} unknowns, numerical rank {}",
                r.conditions, r.unknowns, r.numerical_rank
            );
            println!("n,s,error,degree,residual,ms");
            println!(
                "{},{:.5e},{:.5e},{},{:.5e},{}",
                r.size, r.s, r.error, r.degree, r.constraint_residual, r.wall_time_ms
            );
            Ok(r.residual_ok())
        }
        Command::FigureData { out } => {
            write_figure_data(&out)?;
            Ok(true)
        }
    }
}
