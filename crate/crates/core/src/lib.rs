//! Birkhoff interpolation by minimum Sobolev norm (MSN) solutions of
//! underdetermined systems on the interval, the square and the sphere.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the
//! `*64` / `*32` aliases name the common instantiations.

// `!(x > 0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod constraints;
pub mod error;
pub mod geometry;
pub mod kernel_solver;
pub mod linalg;
pub mod localized_kernels;
pub mod msn_solver;
pub mod real;
pub mod testfuncs;

pub use basis::{BasisFamily, BasisIndex, BasisSpec, MultiIndex};
pub use constraints::{assemble, birkhoff_conditions, ConstraintSystem, Directions, LinearFunctional, ScalarField};
pub use error::{MsnError, Result};
pub use geometry::{Domain, PointSet};
pub use kernel_solver::{solve_kernel_system, KernelInterpolant, KernelSpec};
pub use linalg::{CodOptions, Matrix};
pub use msn_solver::{evaluate_interpolant, solve_msn, MsnFactorization, MsnSolution};
pub use real::{Precision, Real};
pub use testfuncs::TestFunction;

pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type System64 = ConstraintSystem<f64>;
pub type System32 = ConstraintSystem<f32>;
pub type Solution64 = MsnSolution<f64>;
pub type Solution32 = MsnSolution<f32>;
pub type Factorization64 = MsnFactorization<f64>;
pub type Factorization32 = MsnFactorization<f32>;
