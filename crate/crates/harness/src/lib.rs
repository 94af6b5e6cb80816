//! Experiment runner for the MSN interpolation benchmarks: builds the point
//! sets and conditions of each table cell, solves, and measures the
//! normalized maximum error on a fine evaluation grid.

use msn_core::MsnError;
use thiserror::Error;

pub mod output;
pub mod runner;
pub mod tables;

pub use output::{write_figure_data, write_table_csv, write_wide_csv};
pub use runner::{run_cell, run_cell_with, run_table, table_function, ErrorReport, ExperimentConfig, Solver, TableRun};
pub use tables::{table, Setup, Size, Table, TABLES};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown table '{0}' (expected 1..17 or a table name)")]
    UnknownTable(String),
    #[error("invalid cell: {0}")]
    InvalidCell(String),
    #[error("table {table}, size {size}, s = {s}: {source}")]
    Cell {
        table: u8,
        size: String,
        s: f64,
        #[source]
        source: MsnError,
    },
    #[error(transparent)]
    Core(#[from] MsnError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
