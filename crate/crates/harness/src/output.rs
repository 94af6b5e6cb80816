//! CSV writers: long-format table results, the wide table layout, and the
//! sampled test functions.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use msn_core::testfuncs::{eval_f_1d, eval_f_r, R_DEFAULT};

use crate::runner::TableRun;

/// `{:.5e}`: six significant digits.
fn sci(v: f64) -> String {
    format!("{v:.5e}")
}

/// Header `n,s,error,degree,residual,ms`, one row per cell; failed cells
/// carry `NaN` values.
pub fn write_table_csv<W: Write>(run: &TableRun, mut out: W) -> io::Result<()> {
    writeln!(out, "n,s,error,degree,residual,ms")?;
    for cell in &run.cells {
        match cell {
            Ok(r) => writeln!(
                out,
                "{},{},{},{},{},{}",
                r.size,
                sci(r.s),
                sci(r.error),
                r.degree,
                sci(r.constraint_residual),
                r.wall_time_ms
            )?,
            Err(crate::HarnessError::Cell { size, s, .. }) => writeln!(out, "{size},{},NaN,0,NaN,0", sci(*s))?,
            Err(_) => {}
        }
    }
    Ok(())
}

/// Rows by size, columns by `s`, errors only.
pub fn write_wide_csv<W: Write>(run: &TableRun, mut out: W) -> io::Result<()> {
    let s_values = run.table.s_values;
    let header: Vec<String> = s_values.iter().map(|s| format!("s={s}")).collect();
    writeln!(out, "n,{}", header.join(","))?;
    for chunk in run.cells.chunks(s_values.len().max(1)) {
        let size = chunk.iter().find_map(|c| c.as_ref().ok().map(|r| r.size.to_string()));
        let size = match size {
            Some(s) => s,
            None => match &chunk[0] {
                Err(crate::HarnessError::Cell { size, .. }) => size.clone(),
                _ => "?".into(),
            },
        };
        let cols: Vec<String> = chunk
            .iter()
            .map(|c| c.as_ref().map(|r| sci(r.error)).unwrap_or_else(|_| "NaN".into()))
            .collect();
        writeln!(out, "{size},{}", cols.join(","))?;
    }
    Ok(())
}

/// Key/value description of how a table was produced.
pub fn write_metadata<W: Write>(run: &TableRun, mut out: W) -> io::Result<()> {
    let t = run.table;
    writeln!(out, "table={}", t.number)?;
    writeln!(out, "name={}", t.name)?;
    writeln!(out, "precision={}", run.precision)?;
    writeln!(out, "solver={:?}", run.solver)?;
    writeln!(
        out,
        "degree_rule=ceil(2*pi/min separation of acos images); sphere: ceil(2*pi/geodesic separation)"
    )?;
    writeln!(out, "evaluation=1D: 10n equispaced; 2D: 10n x 10n grid (annulus tables: grid points in 0.5<=r<=1); sphere: 200x400 lat-long (caps: |z|>=0.5)")?;
    writeln!(out, "trend_only={}", t.trend_only())?;
    Ok(())
}

/// `line.csv` (`x,f`, 2001 samples of `f_25(x, -0.96)`) and `surface.csv`
/// (`x,y,f`, 201 x 201 samples of `f_25`).
pub fn write_figure_data(dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut line = io::BufWriter::new(fs::File::create(dir.join("line.csv"))?);
    writeln!(line, "x,f")?;
    for i in 0..2001 {
        let x = -1.0 + 2.0 * i as f64 / 2000.0;
        writeln!(line, "{x:.16e},{:.16e}", eval_f_1d(x))?;
    }
    line.flush()?;
    let mut surface = io::BufWriter::new(fs::File::create(dir.join("surface.csv"))?);
    writeln!(surface, "x,y,f")?;
    for i in 0..201 {
        let x = -1.0 + 2.0 * i as f64 / 200.0;
        for j in 0..201 {
            let y = -1.0 + 2.0 * j as f64 / 200.0;
            writeln!(surface, "{x:.16e},{y:.16e},{:.16e}", eval_f_r(R_DEFAULT, x, y))?;
        }
    }
    surface.flush()
}
