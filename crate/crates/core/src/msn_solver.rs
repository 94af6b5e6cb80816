//! Minimum Sobolev norm solutions of `V a = f`.
//!
//! With `c = D_s a` the problem `min ||D_s a||_2 s.t. V a = f` becomes the
//! minimum-norm problem for `B c = f`, `B = V D_s^{-1}`. The grading of `D_s`
//! is absorbed into the columns of `B`, which is then factored by a
//! rank-revealing complete orthogonal decomposition.

use std::io::{self, Write};

use crate::basis::{chebyshev, BasisFamily, BasisSpec};
use crate::constraints::ConstraintSystem;
use crate::error::{MsnError, Result};
use crate::linalg::{axpy, dot, norm_inf, nrm2, CodOptions, CompleteOrthogonalDecomposition, Matrix};
use crate::real::{Precision, Real};

#[derive(Clone, Debug)]
pub struct MsnSolution<T> {
    pub coefficients: Vec<T>,
    /// `||V a - f||_inf / max(1, ||f||_inf)` in working precision.
    pub constraint_residual: f64,
    pub numerical_rank: usize,
    pub rank_tolerance_used: f64,
    pub condition_estimate: f64,
    pub precision: Precision,
}

/// Factorization of `V D_s^{-1}`, reusable for several right-hand sides.
#[derive(Clone, Debug)]
pub struct MsnFactorization<T> {
    cod: CompleteOrthogonalDecomposition<T>,
    weights: Vec<T>,
    s: f64,
}

impl<T: Real> MsnFactorization<T> {
    pub fn new(matrix: &Matrix<T>, spec: &BasisSpec, s: f64, opts: &CodOptions) -> Result<Self> {
        check_matrix(matrix, spec, s)?;
        let weights: Vec<T> = spec.sobolev_weights(s);
        let b = Matrix::from_fn(matrix.rows(), matrix.cols(), |i, j| matrix[(i, j)] / weights[j]);
        if !b.is_finite() {
            return Err(MsnError::NonFinite("scaled constraint matrix"));
        }
        Ok(Self {
            cod: CompleteOrthogonalDecomposition::factor(b, opts),
            weights,
            s,
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn rank(&self) -> usize {
        self.cod.rank()
    }

    pub fn nullity(&self) -> usize {
        self.cod.nullity()
    }

    /// Solves for right-hand side `rhs`; `matrix` is the unscaled `V` used
    /// for the residual.
    pub fn solve(&self, matrix: &Matrix<T>, rhs: &[T]) -> Result<MsnSolution<T>> {
        if rhs.len() != self.cod.rows() {
            return Err(MsnError::LengthMismatch {
                what: "right-hand side",
                expected: self.cod.rows(),
                got: rhs.len(),
            });
        }
        if rhs.iter().any(|v| !v.is_finite()) {
            return Err(MsnError::NonFinite("right-hand side"));
        }
        let c = self.cod.solve(rhs);
        let coefficients: Vec<T> = c.iter().zip(&self.weights).map(|(c, w)| *c / *w).collect();
        let constraint_residual = residual(matrix, &coefficients, rhs);
        if self.cod.rank() == 0 && norm_inf(rhs) > T::zero() {
            return Err(MsnError::Infeasible {
                residual: constraint_residual,
            });
        }
        if coefficients.iter().any(|v| !v.is_finite()) {
            return Err(MsnError::NonFinite("solution coefficients"));
        }
        Ok(MsnSolution {
            coefficients,
            constraint_residual,
            numerical_rank: self.cod.rank(),
            rank_tolerance_used: self.cod.rank_tolerance(),
            condition_estimate: self.cod.condition_estimate(),
            precision: T::PRECISION,
        })
    }

    /// Null-space direction `z` of the truncated system in coefficient
    /// space (`V z = 0`), normalized so that `||D_s z||_2 = 1`.
    pub fn null_vector(&self, j: usize) -> Vec<T> {
        self.cod
            .null_vector(j)
            .iter()
            .zip(&self.weights)
            .map(|(z, w)| *z / *w)
            .collect()
    }
}

fn check_matrix<T: Real>(matrix: &Matrix<T>, spec: &BasisSpec, s: f64) -> Result<()> {
    if matrix.rows() == 0 {
        return Err(MsnError::EmptySystem);
    }
    if matrix.cols() != spec.dimension() {
        return Err(MsnError::LengthMismatch {
            what: "constraint matrix columns vs basis dimension",
            expected: spec.dimension(),
            got: matrix.cols(),
        });
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(MsnError::Precondition(format!(
            "smoothness s must be a finite value >= 0, got {s}"
        )));
    }
    if !matrix.is_finite() {
        return Err(MsnError::NonFinite("constraint matrix"));
    }
    Ok(())
}

fn residual<T: Real>(matrix: &Matrix<T>, a: &[T], f: &[T]) -> f64 {
    let va = matrix.mul_vec(a);
    let r = va.iter().zip(f).fold(T::zero(), |m, (p, q)| m.max((*p - *q).abs()));
    (r / norm_inf(f).max(T::one())).to_f64_lossless()
}

/// `min ||D_s a||_2` subject to `V a = f`, with default factorization options.
pub fn solve_msn<T: Real>(sys: &ConstraintSystem<T>, s: f64) -> Result<MsnSolution<T>> {
    solve_msn_with(sys, s, &CodOptions::default())
}

pub fn solve_msn_with<T: Real>(sys: &ConstraintSystem<T>, s: f64, opts: &CodOptions) -> Result<MsnSolution<T>> {
    MsnFactorization::new(&sys.matrix, &sys.spec, s, opts)?.solve(&sys.matrix, &sys.rhs)
}

/// Reference minimum-norm solution: rows of `B = V D_s^{-1}` orthonormalized
/// by Gram-Schmidt with full reorthogonalization, `B = L Q`, then
/// `c = Q^T L^{-1} f`. Small dense systems with independent rows only.
pub fn oracle_solve_msn<T: Real>(sys: &ConstraintSystem<T>, s: f64) -> Result<MsnSolution<T>> {
    check_matrix(&sys.matrix, &sys.spec, s)?;
    let (m, n) = (sys.matrix.rows(), sys.matrix.cols());
    if m > 200 {
        return Err(MsnError::Precondition(format!("oracle limited to 200 rows, got {m}")));
    }
    let weights: Vec<T> = sys.spec.sobolev_weights(s);
    let tol = T::of(T::RANK_TOLERANCE);
    let mut q: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut l = Matrix::<T>::zeros(m, m);
    for i in 0..m {
        let row: Vec<T> = (0..n).map(|k| sys.matrix[(i, k)] / weights[k]).collect();
        let row_norm = nrm2(&row);
        let mut v = row;
        for _ in 0..2 {
            for (j, qj) in q.iter().enumerate() {
                let h = dot(qj, &v);
                axpy(-h, qj, &mut v);
                l[(i, j)] = l[(i, j)] + h;
            }
        }
        let norm = nrm2(&v);
        if !(norm > tol * row_norm) {
            return Err(MsnError::OracleInapplicable { row: i });
        }
        l[(i, i)] = norm;
        q.push(v.iter().map(|x| *x / norm).collect());
    }
    let mut y = sys.rhs.clone();
    for i in 0..m {
        let mut acc = y[i];
        for j in 0..i {
            acc = acc - l[(i, j)] * y[j];
        }
        y[i] = acc / l[(i, i)];
    }
    let mut c = vec![T::zero(); n];
    for (yi, qi) in y.iter().zip(&q) {
        axpy(*yi, qi, &mut c);
    }
    let coefficients: Vec<T> = c.iter().zip(&weights).map(|(c, w)| *c / *w).collect();
    let constraint_residual = residual(&sys.matrix, &coefficients, &sys.rhs);
    Ok(MsnSolution {
        coefficients,
        constraint_residual,
        numerical_rank: m,
        rank_tolerance_used: T::RANK_TOLERANCE,
        condition_estimate: f64::NAN,
        precision: T::PRECISION,
    })
}

fn check_coefficients<T>(spec: &BasisSpec, coefficients: &[T]) -> Result<()> {
    if coefficients.len() != spec.dimension() {
        return Err(MsnError::LengthMismatch {
            what: "coefficients vs basis dimension",
            expected: spec.dimension(),
            got: coefficients.len(),
        });
    }
    Ok(())
}

/// `sum_k a_k phi_k(point)`; Clenshaw's recurrence for the 1D family.
pub fn evaluate_interpolant<T: Real>(spec: &BasisSpec, coefficients: &[T], point: &[T]) -> Result<T> {
    check_coefficients(spec, coefficients)?;
    let p = spec.check_point(point)?;
    if spec.family() == BasisFamily::Chebyshev1D {
        return Ok(chebyshev::clenshaw(coefficients, p[0]));
    }
    let mut phi = vec![T::zero(); spec.dimension()];
    spec.eval_all(&p, &mut phi)?;
    Ok(dot(coefficients, &phi))
}

/// Directional derivative of the interpolant along unit `direction`.
pub fn evaluate_interpolant_deriv<T: Real>(
    spec: &BasisSpec,
    coefficients: &[T],
    point: &[T],
    direction: &[T],
) -> Result<T> {
    check_coefficients(spec, coefficients)?;
    if spec.family() == BasisFamily::Chebyshev1D {
        let p = spec.check_point(point)?;
        spec.check_direction(&p, direction)?;
        return Ok(chebyshev::clenshaw_derivative(coefficients, p[0]) * direction[0]);
    }
    let mut dphi = vec![T::zero(); spec.dimension()];
    spec.eval_all_deriv(point, direction, &mut dphi)?;
    Ok(dot(coefficients, &dphi))
}

/// Long-format CSV `kind,i,j,value` with kinds `V`, `D` (diagonal of `D_s`),
/// `f` and `a`.
pub fn write_system_csv<T: Real, W: Write>(
    sys: &ConstraintSystem<T>,
    s: f64,
    coefficients: &[T],
    mut out: W,
) -> io::Result<()> {
    writeln!(out, "kind,i,j,value")?;
    for j in 0..sys.matrix.cols() {
        for (i, v) in sys.matrix.col(j).iter().enumerate() {
            writeln!(out, "V,{i},{j},{:.16e}", v.to_f64_lossless())?;
        }
    }
    for (k, w) in sys.spec.sobolev_weights::<T>(s).iter().enumerate() {
        writeln!(out, "D,{k},{k},{:.16e}", w.to_f64_lossless())?;
    }
    for (i, v) in sys.rhs.iter().enumerate() {
        writeln!(out, "f,{i},0,{:.16e}", v.to_f64_lossless())?;
    }
    for (k, v) in coefficients.iter().enumerate() {
        writeln!(out, "a,{k},0,{:.16e}", v.to_f64_lossless())?;
    }
    Ok(())
}
