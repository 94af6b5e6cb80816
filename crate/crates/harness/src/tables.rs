//! The seventeen benchmark tables, numbered in publication order, with the
//! published error values used as references.

use std::fmt;
use std::str::FromStr;

use msn_core::Precision;

use crate::HarnessError;

/// How the conditions of a table are laid out.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Setup {
    /// `f_25(x, -0.96)` on `[-1, 1]`; values and derivatives at `n`
    /// equispaced points, or derivatives at the `n - 1` midpoints.
    Line { interlaced: bool },
    /// `f_R` on an `n x n` grid; `interlaced` puts derivatives on the
    /// `(n-1) x (n-1)` midgrid, `rotated` uses `(1, +-1)/sqrt 2` directions.
    Tensor { r: f64, interlaced: bool, rotated: bool },
    /// `f_25` on the `n x n` grid points with `0.5 <= |p| <= 1`.
    TensorAnnulus,
    /// `f_25` on the `(m, n)` polar grid of the annulus `0.5 <= |p| <= 1`.
    AnnularGrid,
    /// `g` on a scattered sphere packing with separation `pi/d`.
    Sphere { caps: bool },
}

/// Row parameter of a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Size {
    N(usize),
    Annular(usize, usize),
    D(usize),
}

impl Size {
    /// Scalar used for evaluation grids and size caps.
    pub fn scale(self) -> usize {
        match self {
            Size::N(n) | Size::D(n) | Size::Annular(_, n) => n,
        }
    }
}

impl fmt::Display for Size {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Size::N(n) | Size::D(n) => write!(f, "{n}"),
            Size::Annular(m, n) => write!(f, "{m}x{n}"),
        }
    }
}

impl FromStr for Size {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HarnessError::InvalidCell(format!("cannot parse size '{s}'"));
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if let Some((m, n)) = t.split_once(['x', ',']) {
            return Ok(Size::Annular(
                m.trim().parse().map_err(|_| bad())?,
                n.trim().parse().map_err(|_| bad())?,
            ));
        }
        Ok(Size::N(t.parse().map_err(|_| bad())?))
    }
}

#[derive(Clone, Debug)]
pub struct Table {
    pub number: u8,
    pub name: &'static str,
    pub setup: Setup,
    pub precision: Precision,
    pub s_values: &'static [f64],
    pub sizes: &'static [Size],
    /// Published errors, `reference[row][col]` by `sizes` and `s_values`.
    pub reference: &'static [&'static [f64]],
    /// Number of leading rows run without `--full`.
    pub default_rows: usize,
}

impl Table {
    pub fn reference_value(&self, size: Size, s: f64) -> Option<f64> {
        let i = self.sizes.iter().position(|&z| z == size)?;
        let j = self.s_values.iter().position(|&v| v == s)?;
        Some(self.reference[i][j])
    }

    /// Sizes run by default (`full = false`) or all of them.
    pub fn sizes(&self, full: bool) -> &'static [Size] {
        if full {
            self.sizes
        } else {
            &self.sizes[..self.default_rows.min(self.sizes.len())]
        }
    }

    /// Sphere tables are compared by trend only: the point sets differ.
    pub fn trend_only(&self) -> bool {
        matches!(self.setup, Setup::Sphere { .. })
    }

    /// Parses a size, reading a bare number as `d` for sphere tables.
    pub fn size_for_str(&self, text: &str) -> Result<Size, HarnessError> {
        match text.parse()? {
            Size::N(n) => Ok(self.size_for(n)),
            other => Ok(other),
        }
    }

    pub fn size_for(&self, n: usize) -> Size {
        match self.setup {
            Setup::Sphere { .. } => Size::D(n),
            _ => Size::N(n),
        }
    }
}

const S_SINGLE: &[f64] = &[2.0, 3.0, 4.0, 5.0];
const S_DOUBLE: &[f64] = &[2.0, 4.0, 6.0, 8.0, 10.0, 12.0];

const N_SMALL: &[Size] = &[
    Size::N(11),
    Size::N(21),
    Size::N(31),
    Size::N(41),
    Size::N(51),
    Size::N(61),
];
const N_1D: &[Size] = &[
    Size::N(21),
    Size::N(41),
    Size::N(61),
    Size::N(81),
    Size::N(101),
    Size::N(121),
    Size::N(141),
    Size::N(161),
];
const ANNULAR: &[Size] = &[
    Size::Annular(5, 32),
    Size::Annular(7, 48),
    Size::Annular(9, 64),
    Size::Annular(11, 80),
    Size::Annular(13, 96),
    Size::Annular(15, 112),
];
const D_SPHERE: &[Size] = &[Size::D(11), Size::D(21), Size::D(31), Size::D(41), Size::D(51)];
const D_CAPS: &[Size] = &[Size::D(15), Size::D(39), Size::D(63), Size::D(87), Size::D(111)];

const F25: f64 = 25.0;

pub static TABLES: [Table; 17] = [
    Table {
        number: 1,
        name: "line-single",
        setup: Setup::Line { interlaced: false },
        precision: Precision::Single,
        s_values: S_SINGLE,
        sizes: N_SMALL,
        reference: &[
            &[1.40e-02, 9.98e-03, 1.93e-02, 4.28e-02],
            &[1.12e-03, 9.15e-04, 2.77e-04, 1.01e-04],
            &[1.87e-03, 1.23e-04, 3.07e-05, 6.54e-06],
            &[1.73e-03, 4.77e-05, 1.95e-06, 1.66e-06],
            &[1.47e-03, 5.14e-05, 4.29e-06, 3.34e-06],
            &[1.22e-03, 4.30e-05, 2.77e-06, 2.99e-06],
        ],
        default_rows: 6,
    },
    Table {
        number: 2,
        name: "line",
        setup: Setup::Line { interlaced: false },
        precision: Precision::Double,
        s_values: S_DOUBLE,
        sizes: N_1D,
        reference: &[
            &[1.12e-03, 2.78e-04, 1.77e-04, 2.57e-03, 1.83e-02, 7.56e-02],
            &[1.73e-03, 1.86e-06, 5.32e-07, 5.70e-08, 1.23e-07, 3.18e-07],
            &[1.22e-03, 2.73e-06, 1.65e-07, 1.49e-08, 1.95e-09, 5.15e-10],
            &[8.37e-04, 1.31e-06, 3.84e-08, 2.11e-09, 1.51e-10, 2.70e-11],
            &[6.04e-04, 6.30e-07, 1.05e-08, 3.68e-10, 1.36e-11, 3.76e-12],
            &[4.55e-04, 3.27e-07, 3.35e-09, 7.92e-11, 1.42e-12, 4.42e-12],
            &[3.54e-04, 1.83e-07, 1.21e-09, 2.00e-11, 3.71e-13, 4.32e-12],
            &[2.83e-04, 1.09e-07, 4.78e-10, 5.87e-12, 7.24e-13, 1.62e-11],
        ],
        default_rows: 8,
    },
    Table {
        number: 3,
        name: "line-interlaced-single",
        setup: Setup::Line { interlaced: true },
        precision: Precision::Single,
        s_values: S_SINGLE,
        sizes: N_SMALL,
        reference: &[
            &[1.48e-02, 1.25e-02, 1.69e-02, 2.50e-02],
            &[2.07e-03, 1.08e-03, 6.39e-04, 5.74e-04],
            &[1.68e-03, 1.59e-04, 6.03e-05, 3.92e-05],
            &[1.36e-03, 4.69e-05, 7.74e-06, 4.02e-06],
            &[1.10e-03, 3.13e-05, 2.86e-06, 3.03e-06],
            &[8.93e-04, 2.12e-05, 4.02e-06, 3.80e-06],
        ],
        default_rows: 6,
    },
    Table {
        number: 4,
        name: "line-interlaced",
        setup: Setup::Line { interlaced: true },
        precision: Precision::Double,
        s_values: S_DOUBLE,
        sizes: N_1D,
        reference: &[
            &[2.07e-03, 6.41e-04, 6.34e-04, 1.25e-03, 8.21e-03, 5.86e-02],
            &[1.36e-03, 6.89e-06, 1.94e-06, 1.33e-06, 1.06e-06, 9.37e-07],
            &[8.93e-04, 1.30e-06, 4.58e-08, 7.60e-09, 2.47e-09, 1.88e-09],
            &[6.07e-04, 3.98e-07, 1.86e-09, 4.37e-11, 8.73e-11, 4.54e-11],
            &[4.31e-04, 1.55e-07, 1.21e-09, 7.21e-11, 1.55e-11, 3.27e-12],
            &[3.22e-04, 7.13e-08, 5.72e-10, 2.89e-11, 3.25e-12, 5.29e-12],
            &[2.48e-04, 3.68e-08, 3.12e-10, 1.07e-11, 7.22e-13, 7.30e-13],
            &[1.97e-04, 2.11e-08, 1.68e-10, 4.17e-12, 1.70e-13, 1.95e-12],
        ],
        default_rows: 8,
    },
    Table {
        number: 5,
        name: "tensor-single",
        setup: Setup::Tensor {
            r: F25,
            interlaced: false,
            rotated: false,
        },
        precision: Precision::Single,
        s_values: S_SINGLE,
        sizes: N_SMALL,
        reference: &[
            &[1.42e-01, 1.03e-01, 1.04e-01, 1.02e-01],
            &[5.60e-02, 2.41e-02, 1.38e-02, 8.44e-03],
            &[2.98e-02, 9.55e-03, 4.76e-03, 2.76e-03],
            &[1.88e-02, 5.48e-03, 2.15e-03, 9.72e-04],
            &[1.30e-02, 3.52e-03, 1.16e-03, 4.36e-04],
            &[1.02e-02, 2.42e-03, 6.66e-04, 5.87e-04],
        ],
        default_rows: 4,
    },
    Table {
        number: 6,
        name: "tensor",
        setup: Setup::Tensor {
            r: F25,
            interlaced: false,
            rotated: false,
        },
        precision: Precision::Double,
        s_values: S_DOUBLE,
        sizes: N_SMALL,
        reference: &[
            &[1.42e-01, 1.04e-01, 1.02e-01, 3.53e-01, 9.02e-01, 1.88e+00],
            &[5.60e-02, 1.38e-02, 8.24e-03, 5.30e-02, 2.40e-01, 7.44e-01],
            &[2.98e-02, 4.76e-03, 1.72e-03, 1.33e-03, 7.60e-03, 3.75e-02],
            &[1.88e-02, 2.16e-03, 4.85e-04, 1.69e-04, 1.73e-03, 1.38e-02],
            &[1.30e-02, 1.15e-03, 1.84e-04, 4.61e-05, 2.23e-05, 8.23e-05],
            &[1.02e-02, 6.81e-04, 8.19e-05, 1.59e-05, 5.57e-06, 5.59e-05],
        ],
        default_rows: 4,
    },
    Table {
        number: 7,
        name: "tensor-annulus",
        setup: Setup::TensorAnnulus,
        precision: Precision::Double,
        s_values: S_DOUBLE,
        sizes: N_SMALL,
        reference: &[
            &[1.42e-01, 2.64e-01, 4.32e-01, 1.07e+00, 2.89e+00, 4.78e+00],
            &[7.57e-02, 4.13e-02, 2.03e-02, 1.67e-01, 1.13e+00, 4.41e+00],
            &[3.11e-02, 9.64e-03, 1.46e-02, 2.69e-02, 1.09e-01, 3.76e-01],
            &[3.18e-02, 4.12e-03, 2.51e-03, 6.09e-03, 9.58e-03, 5.68e-02],
            &[2.05e-02, 1.54e-03, 8.55e-04, 4.63e-04, 1.32e-03, 5.02e-03],
            &[9.86e-03, 9.09e-04, 1.19e-04, 4.48e-04, 4.94e-04, 4.11e-04],
        ],
        default_rows: 4,
    },
    Table {
        number: 8,
        name: "annular-grid",
        setup: Setup::AnnularGrid,
        precision: Precision::Double,
        s_values: S_DOUBLE,
        sizes: ANNULAR,
        reference: &[
            &[9.15e-02, 4.20e-02, 4.91e-02, 1.84e-01, 4.39e-01, 7.84e-01],
            &[1.74e-02, 8.52e-03, 7.92e-03, 1.97e-02, 6.31e-02, 4.05e-01],
            &[7.36e-03, 2.50e-03, 1.71e-03, 4.99e-03, 1.55e-02, 6.31e-02],
            &[8.56e-03, 8.26e-04, 5.07e-04, 7.21e-04, 1.94e-03, 1.36e-02],
            &[5.62e-03, 2.85e-04, 1.73e-04, 1.73e-04, 3.70e-04, 2.22e-03],
            &[2.94e-03, 1.15e-04, 6.62e-05, 3.63e-05, 5.70e-05, 3.45e-04],
        ],
        default_rows: 3,
    },
    Table {
        number: 9,
        name: "tensor-interlaced-single",
        setup: Setup::Tensor {
            r: F25,
            interlaced: true,
            rotated: false,
        },
        precision: Precision::Single,
        s_values: S_SINGLE,
        sizes: N_SMALL,
        reference: &[
            &[1.20e-01, 8.09e-02, 6.78e-02, 1.19e-01],
            &[3.70e-02, 1.10e-02, 6.36e-03, 4.88e-03],
            &[1.88e-02, 3.00e-03, 1.02e-03, 6.21e-04],
            &[1.14e-02, 1.63e-03, 4.58e-04, 1.59e-04],
            &[7.89e-03, 1.02e-03, 2.49e-04, 7.35e-05],
            &[6.04e-03, 6.87e-04, 1.48e-04, 4.12e-05],
        ],
        default_rows: 4,
    },
    Table {
        number: 10,
        name: "tensor-rotated-single",
        setup: Setup::Tensor {
            r: F25,
            interlaced: true,
            rotated: true,
        },
        precision: Precision::Single,
        s_values: S_SINGLE,
        sizes: N_SMALL,
        reference: &[
            &[1.20e-01, 8.09e-02, 6.78e-02, 1.19e-01],
            &[3.70e-02, 1.10e-02, 6.36e-03, 4.88e-03],
            &[1.88e-02, 3.00e-03, 1.03e-03, 6.24e-04],
            &[1.14e-02, 1.64e-03, 4.60e-04, 1.60e-04],
            &[7.89e-03, 1.02e-03, 2.47e-04, 6.73e-05],
            &[6.04e-03, 6.88e-04, 1.46e-04, 3.37e-05],
        ],
        default_rows: 4,
    },
    Table {
        number: 11,
        name: "tensor-interlaced",
        setup: Setup::Tensor {
            r: F25,
            interlaced: true,
            rotated: false,
        },
        precision: Precision::Double,
        s_values: S_DOUBLE,
        sizes: N_SMALL,
        reference: &[
            &[1.20e-01, 6.78e-02, 3.45e-01, 1.63e+00, 4.58e+00, 1.37e+01],
            &[3.70e-02, 6.36e-03, 1.53e-02, 7.04e-02, 2.11e-01, 1.06e+00],
            &[1.88e-02, 1.03e-03, 7.85e-04, 2.11e-03, 2.82e-02, 2.71e-01],
            &[1.14e-02, 4.60e-04, 6.05e-05, 8.40e-05, 3.29e-03, 4.06e-02],
            &[7.89e-03, 2.49e-04, 2.30e-05, 7.96e-06, 2.35e-04, 2.92e-03],
            &[6.04e-03, 1.47e-04, 1.12e-05, 1.68e-06, 1.39e-05, 6.29e-05],
        ],
        default_rows: 4,
    },
    Table {
        number: 12,
        name: "tensor-rotated",
        setup: Setup::Tensor {
            r: F25,
            interlaced: true,
            rotated: true,
        },
        precision: Precision::Double,
        s_values: S_DOUBLE,
        sizes: N_SMALL,
        reference: &[
            &[1.20e-01, 6.78e-02, 3.45e-01, 1.63e+00, 4.58e+00, 1.37e+01],
            &[3.70e-02, 6.36e-03, 1.53e-02, 7.04e-02, 2.11e-01, 1.06e+00],
            &[1.88e-02, 1.03e-03, 7.85e-04, 2.11e-03, 2.82e-02, 2.71e-01],
            &[1.14e-02, 4.60e-04, 6.05e-05, 8.40e-05, 3.29e-03, 4.06e-02],
            &[7.89e-03, 2.49e-04, 2.30e-05, 7.96e-06, 2.35e-04, 2.92e-03],
            &[6.04e-03, 1.47e-04, 1.12e-05, 1.68e-06, 1.39e-05, 6.30e-05],
        ],
        default_rows: 4,
    },
    Table {
        number: 13,
        name: "sphere-single",
        setup: Setup::Sphere { caps: false },
        precision: Precision::Single,
        s_values: S_SINGLE,
        sizes: D_SPHERE,
        reference: &[
            &[2.99e-01, 2.94e-01, 3.53e-01, 4.05e-01],
            &[1.16e-01, 7.37e-02, 6.41e-02, 6.13e-02],
            &[3.63e-02, 1.38e-02, 9.05e-03, 7.65e-03],
            &[1.62e-02, 3.83e-03, 1.79e-03, 1.27e-03],
            &[7.85e-03, 1.24e-03, 4.14e-04, 2.59e-04],
        ],
        default_rows: 5,
    },
    Table {
        number: 14,
        name: "sphere",
        setup: Setup::Sphere { caps: false },
        precision: Precision::Double,
        s_values: S_DOUBLE,
        sizes: D_SPHERE,
        reference: &[
            &[2.99e-01, 3.53e-01, 4.36e-01, 4.71e-01, 4.90e-01, 5.03e-01],
            &[1.16e-01, 6.41e-02, 6.04e-02, 6.07e-02, 6.14e-02, 6.19e-02],
            &[3.63e-02, 9.05e-03, 7.20e-03, 7.68e-03, 8.35e-03, 9.23e-03],
            &[1.62e-02, 1.79e-03, 1.06e-03, 9.16e-04, 8.90e-04, 8.68e-04],
            &[7.85e-03, 4.12e-04, 1.89e-04, 1.64e-04, 1.59e-04, 1.59e-04],
        ],
        default_rows: 5,
    },
    Table {
        number: 15,
        name: "sphere-caps",
        setup: Setup::Sphere { caps: true },
        precision: Precision::Double,
        s_values: S_DOUBLE,
        sizes: D_CAPS,
        reference: &[
            &[6.80e-01, 9.08e-01, 1.20e+00, 1.54e+00, 1.78e+00, 1.89e+00],
            &[2.35e-01, 2.52e-01, 2.18e-01, 1.60e-01, 2.04e-01, 3.65e-01],
            &[9.12e-02, 4.83e-02, 4.21e-02, 3.83e-02, 3.50e-02, 2.80e-02],
            &[1.92e-02, 7.11e-03, 6.49e-03, 5.89e-03, 4.75e-03, 3.57e-03],
            &[1.71e-02, 1.89e-03, 1.38e-03, 1.03e-03, 6.48e-04, 5.94e-04],
        ],
        default_rows: 2,
    },
    Table {
        number: 16,
        name: "tensor-f9-single",
        setup: Setup::Tensor {
            r: 9.0,
            interlaced: false,
            rotated: false,
        },
        precision: Precision::Single,
        s_values: S_SINGLE,
        sizes: N_SMALL,
        reference: &[
            &[6.23e-02, 3.15e-02, 2.55e-02, 2.03e-02],
            &[2.20e-02, 6.85e-03, 2.79e-03, 1.36e-03],
            &[1.12e-02, 2.78e-03, 8.05e-04, 2.96e-04],
            &[7.52e-03, 1.50e-03, 3.35e-04, 1.43e-04],
            &[5.52e-03, 9.08e-04, 1.70e-04, 8.42e-05],
            &[4.24e-03, 5.95e-04, 6.60e-04, 8.80e-04],
        ],
        default_rows: 4,
    },
    Table {
        number: 17,
        name: "tensor-f9",
        setup: Setup::Tensor {
            r: 9.0,
            interlaced: false,
            rotated: false,
        },
        precision: Precision::Double,
        s_values: S_DOUBLE,
        sizes: N_SMALL,
        reference: &[
            &[6.23e-02, 2.55e-02, 2.66e-02, 8.11e-02, 1.72e-01, 3.00e-01],
            &[2.20e-02, 2.79e-03, 7.54e-04, 1.48e-03, 6.72e-03, 2.05e-02],
            &[1.12e-02, 8.06e-04, 1.19e-04, 3.49e-05, 2.97e-05, 1.81e-04],
            &[7.51e-03, 3.30e-04, 2.91e-05, 5.55e-06, 1.73e-06, 5.67e-06],
            &[5.52e-03, 1.63e-04, 9.66e-06, 1.37e-06, 2.83e-07, 9.92e-08],
            &[4.24e-03, 9.00e-05, 3.89e-06, 4.34e-07, 6.54e-08, 1.75e-08],
        ],
        default_rows: 4,
    },
];

/// Looks a table up by number (`1..=17`) or name.
pub fn table(id: &str) -> Result<&'static Table, HarnessError> {
    let id = id.trim();
    TABLES
        .iter()
        .find(|t| id.parse::<u8>().map(|n| n == t.number).unwrap_or(false) || t.name == id)
        .ok_or_else(|| HarnessError::UnknownTable(id.to_string()))
}

/// The table with the same layout in the other precision, if there is one.
pub fn counterpart(t: &Table, precision: Precision) -> Option<&'static Table> {
    if t.precision == precision {
        return TABLES.iter().find(|u| u.number == t.number);
    }
    TABLES.iter().find(|u| u.setup == t.setup && u.precision == precision)
}
