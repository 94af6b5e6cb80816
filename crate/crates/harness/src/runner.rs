use std::str::FromStr;
use std::time::Instant;

use msn_core::constraints::{assemble_matrix, birkhoff_conditions, Directions, ScalarField};
use msn_core::geometry::{self, PointSet};
use msn_core::kernel_solver::{solve_kernel_system, KernelSpec};
use msn_core::msn_solver::evaluate_interpolant;
use msn_core::testfuncs::TestFunction;
use msn_core::{
    BasisSpec, CodOptions, LinearFunctional, Matrix, MsnError, MsnFactorization, MultiIndex, Precision, Real,
};

use crate::tables::{Setup, Size, Table};
use crate::HarnessError;

const R_IN: f64 = 0.5;
const R_OUT: f64 = 1.0;
const SPHERE_LAT: usize = 200;
const SPHERE_LON: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    Msn,
    Kernel,
}

impl FromStr for Solver {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "msn" => Ok(Solver::Msn),
            "kernel" => Ok(Solver::Kernel),
            other => Err(HarnessError::InvalidCell(format!("unknown solver '{other}'"))),
        }
    }
}

/// One table cell.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub table: &'static Table,
    pub size: Size,
    pub s: f64,
    pub precision: Precision,
    pub solver: Solver,
    /// Seed of the sphere packing.
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn new(table: &'static Table, size: Size, s: f64) -> Self {
        Self {
            table,
            size,
            s,
            precision: table.precision,
            solver: Solver::Msn,
            seed: geometry::DEFAULT_SPHERE_SEED,
        }
    }

    fn cell_error(&self, source: MsnError) -> HarnessError {
        HarnessError::Cell {
            table: self.table.number,
            size: self.size.to_string(),
            s: self.s,
            source,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub table: u8,
    pub size: Size,
    pub s: f64,
    pub precision: Precision,
    /// `max |f - P| / max |f|` over the evaluation grid.
    pub error: f64,
    pub degree: usize,
    pub constraint_residual: f64,
    pub wall_time_ms: u128,
    pub numerical_rank: usize,
    pub conditions: usize,
    pub unknowns: usize,
}

impl ErrorReport {
    /// Residual gate: `1e-6` in double, `1e-3` in single precision.
    pub fn residual_ok(&self) -> bool {
        let gate = match self.precision {
            Precision::Double => 1e-6,
            Precision::Single => 1e-3,
        };
        self.constraint_residual <= gate && self.error.is_finite()
    }
}

/// Everything but the data: points, functionals, basis and evaluation grid.
struct Problem {
    values: PointSet,
    derivs: PointSet,
    directions: Directions,
    functionals: Vec<LinearFunctional>,
    spec: BasisSpec,
    grid: Grid,
}

enum Grid {
    Line(Vec<f64>),
    /// Tensor grid `xs x xs`, optionally masked to the annulus.
    Plane {
        xs: Vec<f64>,
        annulus: bool,
    },
    Sphere {
        caps: bool,
    },
}

fn linspace(count: usize) -> Vec<f64> {
    let h = (count - 1) as f64;
    (0..count).map(|i| (2.0 * i as f64 - h) / h).collect()
}

fn union(a: &PointSet, b: &PointSet) -> Result<PointSet, MsnError> {
    let mut coords: Vec<f64> = a.iter().flatten().copied().collect();
    coords.extend(b.iter().flatten().copied());
    PointSet::new(a.domain(), coords)
}

fn build_problem(table: &Table, size: Size, seed: u64) -> Result<Problem, HarnessError> {
    let mismatch = || HarnessError::InvalidCell(format!("size {size} does not fit table {}", table.number));
    let (values, derivs, directions, grid) = match (table.setup, size) {
        (Setup::Line { interlaced }, Size::N(n)) => {
            let values = geometry::gen_equispaced_1d(n)?;
            let derivs = if interlaced {
                geometry::gen_midpoints_1d(n)?
            } else {
                values.clone()
            };
            (values, derivs, Directions::axes(1), Grid::Line(linspace(10 * n)))
        }
        (
            Setup::Tensor {
                interlaced, rotated, ..
            },
            Size::N(n),
        ) => {
            let values = geometry::gen_tensor_grid(n)?;
            let derivs = if interlaced {
                geometry::gen_tensor_midgrid(n)?
            } else {
                values.clone()
            };
            let dirs = if rotated {
                Directions::rotated()
            } else {
                Directions::axes(2)
            };
            let grid = Grid::Plane {
                xs: linspace(10 * n),
                annulus: false,
            };
            (values, derivs, dirs, grid)
        }
        (Setup::TensorAnnulus, Size::N(n)) => {
            let values = geometry::gen_tensor_annulus(n, R_IN, R_OUT)?;
            let grid = Grid::Plane {
                xs: linspace(10 * n),
                annulus: true,
            };
            (values.clone(), values, Directions::axes(2), grid)
        }
        (Setup::AnnularGrid, Size::Annular(m, n)) => {
            let values = geometry::gen_annular_grid(m, n, R_IN, R_OUT)?;
            let grid = Grid::Plane {
                xs: linspace(10 * n),
                annulus: true,
            };
            (values.clone(), values, Directions::axes(2), grid)
        }
        (Setup::Sphere { caps }, Size::D(d) | Size::N(d)) => {
            let values = geometry::gen_sphere_scattered(d, caps, seed)?;
            (values.clone(), values, Directions::TangentFrame, Grid::Sphere { caps })
        }
        _ => return Err(mismatch()),
    };
    let nodes = if derivs == values {
        values.clone()
    } else {
        union(&values, &derivs)?
    };
    let degree = geometry::select_degree(&nodes)?;
    let spec = BasisSpec::new(values.domain().basis_family(), degree);
    let (functionals, _) = birkhoff_conditions(&Zero, &values, &derivs, &directions);
    Ok(Problem {
        values,
        derivs,
        directions,
        functionals,
        spec,
        grid,
    })
}

struct Zero;

impl ScalarField for Zero {
    fn value(&self, _: &[f64]) -> f64 {
        0.0
    }
    fn gradient(&self, p: &[f64]) -> Vec<f64> {
        vec![0.0; p.len()]
    }
}

/// The benchmark function of a table.
pub fn table_function(table: &Table) -> TestFunction {
    match table.setup {
        Setup::Line { .. } => TestFunction::Line,
        Setup::Tensor { r, .. } => TestFunction::Runge { r },
        Setup::TensorAnnulus | Setup::AnnularGrid => TestFunction::Runge { r: 25.0 },
        Setup::Sphere { .. } => TestFunction::Sphere,
    }
}

struct Solved {
    coefficients: Vec<f64>,
    residual: f64,
    rank: usize,
}

fn solve_all<T: Real>(problem: &Problem, s: f64, solver: Solver, data: &[Vec<f64>]) -> Result<Vec<Solved>, MsnError> {
    let matrix: Matrix<T> = assemble_matrix(&problem.spec, &problem.functionals)?;
    match solver {
        Solver::Msn => {
            let fact = MsnFactorization::new(&matrix, &problem.spec, s, &CodOptions::default())?;
            data.iter()
                .map(|f| {
                    let rhs: Vec<T> = f.iter().map(|&v| T::of(v)).collect();
                    let sol = fact.solve(&matrix, &rhs)?;
                    Ok(Solved {
                        coefficients: sol.coefficients.iter().map(|c| c.to_f64_lossless()).collect(),
                        residual: sol.constraint_residual,
                        rank: sol.numerical_rank,
                    })
                })
                .collect()
        }
        Solver::Kernel => {
            let ks = KernelSpec::new(problem.spec.family(), s, problem.spec.max_degree() + 1)?;
            data.iter()
                .map(|f| {
                    let sol = solve_kernel_system::<T>(&ks, &problem.functionals, f)?;
                    let rhs: Vec<T> = f.iter().map(|&v| T::of(v)).collect();
                    let va = matrix.mul_vec(&sol.expansion);
                    let r = va.iter().zip(&rhs).fold(T::zero(), |m, (p, q)| m.max((*p - *q).abs()));
                    let scale = rhs.iter().fold(T::one(), |m, v| m.max(v.abs()));
                    Ok(Solved {
                        coefficients: sol.expansion.iter().map(|c| c.to_f64_lossless()).collect(),
                        residual: (r / scale).to_f64_lossless(),
                        rank: f.len(),
                    })
                })
                .collect()
        }
    }
}

/// `max |f - P| / max |f|` on the evaluation grid, in double precision.
fn grid_error(problem: &Problem, field: &dyn ScalarField, a: &[f64]) -> Result<f64, MsnError> {
    let spec = &problem.spec;
    let (mut err, mut fmax) = (0.0f64, 0.0f64);
    let mut record = |f: f64, p: f64| {
        err = err.max((f - p).abs());
        fmax = fmax.max(f.abs());
    };
    match &problem.grid {
        Grid::Line(xs) => {
            for &x in xs {
                record(field.value(&[x]), evaluate_interpolant(spec, a, &[x])?);
            }
        }
        Grid::Plane { xs, annulus } => {
            // P(x_i, y_j) = (E A E^T)_ij with E_ik = phi_k(x_i)
            let m = spec.max_degree() + 1;
            let mut e = Matrix::zeros(xs.len(), m);
            let mut row = vec![0.0; m];
            let line = BasisSpec::new(msn_core::BasisFamily::Chebyshev1D, m - 1);
            for (i, &x) in xs.iter().enumerate() {
                line.eval_all(&[x], &mut row)?;
                for (k, v) in row.iter().enumerate() {
                    e[(i, k)] = *v;
                }
            }
            let mut coef = Matrix::zeros(m, m);
            for (ix, c) in spec.indices().iter().zip(a) {
                if let MultiIndex::Pair(k1, k2) = ix.multi_index {
                    coef[(k1, k2)] = *c;
                }
            }
            let p = e.matmul(&coef).matmul(&e.transpose());
            for (i, &x) in xs.iter().enumerate() {
                for (j, &y) in xs.iter().enumerate() {
                    let r = x.hypot(y);
                    if *annulus && !(R_IN..=R_OUT).contains(&r) {
                        continue;
                    }
                    record(field.value(&[x, y]), p[(i, j)]);
                }
            }
        }
        Grid::Sphere { caps } => {
            let mut phi = vec![0.0; spec.dimension()];
            for i in 0..SPHERE_LAT {
                let theta = std::f64::consts::PI * (i as f64 + 0.5) / SPHERE_LAT as f64;
                let (st, ct) = theta.sin_cos();
                if *caps && ct.abs() < 0.5 {
                    continue;
                }
                for j in 0..SPHERE_LON {
                    let lon = std::f64::consts::TAU * j as f64 / SPHERE_LON as f64;
                    let p = [st * lon.cos(), st * lon.sin(), ct];
                    spec.eval_all(&p, &mut phi)?;
                    let v: f64 = phi.iter().zip(a).map(|(x, y)| x * y).sum();
                    record(field.value(&p), v);
                }
            }
        }
    }
    Ok(err / fmax)
}

/// Runs one cell with the table's own test function.
pub fn run_cell(cfg: &ExperimentConfig) -> Result<ErrorReport, HarnessError> {
    let field = table_function(cfg.table);
    Ok(run_cell_with(cfg, &[&field])?.remove(0))
}

/// Runs one cell for several fields sampled on the same conditions layout;
/// the factorization is computed once.
pub fn run_cell_with(cfg: &ExperimentConfig, fields: &[&dyn ScalarField]) -> Result<Vec<ErrorReport>, HarnessError> {
    let start = Instant::now();
    let problem = build_problem(cfg.table, cfg.size, cfg.seed)?;
    let data: Vec<Vec<f64>> = fields
        .iter()
        .map(|field| birkhoff_conditions(*field, &problem.values, &problem.derivs, &problem.directions).1)
        .collect();
    let solved = match cfg.precision {
        Precision::Double => solve_all::<f64>(&problem, cfg.s, cfg.solver, &data),
        Precision::Single => solve_all::<f32>(&problem, cfg.s, cfg.solver, &data),
    }
    .map_err(|e| cfg.cell_error(e))?;
    let setup_ms = start.elapsed().as_millis();
    let mut reports = Vec::with_capacity(fields.len());
    for (field, sol) in fields.iter().zip(solved) {
        let t = Instant::now();
        let error = grid_error(&problem, *field, &sol.coefficients).map_err(|e| cfg.cell_error(e))?;
        reports.push(ErrorReport {
            table: cfg.table.number,
            size: cfg.size,
            s: cfg.s,
            precision: cfg.precision,
            error,
            degree: problem.spec.max_degree(),
            constraint_residual: sol.residual,
            wall_time_ms: setup_ms + t.elapsed().as_millis(),
            numerical_rank: sol.rank,
            conditions: problem.functionals.len(),
            unknowns: problem.spec.dimension(),
        });
    }
    Ok(reports)
}

/// Result of a whole table: per-cell reports or failures, in `(size, s)` order.
#[derive(Debug)]
pub struct TableRun {
    pub table: &'static Table,
    pub precision: Precision,
    pub solver: Solver,
    pub cells: Vec<Result<ErrorReport, HarnessError>>,
}

impl TableRun {
    /// All cells solved and passed the residual gate.
    pub fn all_passed(&self) -> bool {
        self.cells.iter().all(|c| matches!(c, Ok(r) if r.residual_ok()))
    }
}

/// Runs every cell of `table`; failures are recorded and the run continues.
/// `progress` is called after each cell.
pub fn run_table(
    table: &'static Table,
    precision: Precision,
    solver: Solver,
    full: bool,
    seed: u64,
    mut progress: impl FnMut(&Result<ErrorReport, HarnessError>),
) -> TableRun {
    let mut cells = Vec::new();
    for &size in table.sizes(full) {
        for &s in table.s_values {
            let cfg = ExperimentConfig {
                table,
                size,
                s,
                precision,
                solver,
                seed,
            };
            let outcome = run_cell(&cfg);
            progress(&outcome);
            cells.push(outcome);
        }
    }
    TableRun {
        table,
        precision,
        solver,
        cells,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::table;
    use msn_core::testfuncs::eval_f_r;

    #[test]
    fn small_line_cell() {
        let cfg = ExperimentConfig::new(table("2").unwrap(), Size::N(21), 4.0);
        let r = run_cell(&cfg).unwrap();
        assert_eq!(r.conditions, 42);
        assert!(r.unknowns > r.conditions);
        assert!(r.residual_ok());
        let reference = cfg.table.reference_value(Size::N(21), 4.0).unwrap();
        assert!(
            r.error < 100.0 * reference && r.error > reference / 100.0,
            "{}",
            r.error
        );
    }

    #[test]
    fn mismatched_size_is_rejected() {
        let cfg = ExperimentConfig::new(table("8").unwrap(), Size::N(21), 4.0);
        assert!(matches!(run_cell(&cfg), Err(HarnessError::InvalidCell(_))));
    }

    #[test]
    fn grid_evaluation_matches_pointwise() {
        let problem = build_problem(table("7").unwrap(), Size::N(5), 0).unwrap();
        let a: Vec<f64> = (0..problem.spec.dimension()).map(|k| 1.0 / (1.0 + k as f64)).collect();
        let Grid::Plane { xs, .. } = &problem.grid else {
            panic!()
        };
        let e = grid_error(&problem, &TestFunction::Runge { r: 25.0 }, &a).unwrap();
        let mut err: f64 = 0.0;
        let mut fmax: f64 = 0.0;
        for &x in xs {
            for &y in xs {
                let r = x.hypot(y);
                if !(0.5..=1.0).contains(&r) {
                    continue;
                }
                let f = eval_f_r(25.0, x, y);
                err = err.max((f - evaluate_interpolant(&problem.spec, &a, &[x, y]).unwrap()).abs());
                fmax = fmax.max(f.abs());
            }
        }
        assert!((e - err / fmax).abs() < 1e-12 * e);
    }
}
