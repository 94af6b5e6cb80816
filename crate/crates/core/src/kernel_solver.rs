//! Interpolation by derivative-applied reproducing kernels.
//!
//! `G(x, y) = sum_{lambda_j < K} (1 + lambda_j)^{-2 beta} phi_j(x) phi_j(y)`;
//! the interpolant is `P = sum_i alpha_i L_i G(., y_i)` with `alpha` solving
//! the Gram system `[L_i L_j G] alpha = f`.

use crate::basis::{BasisFamily, BasisSpec};
use crate::constraints::{assemble_matrix, LinearFunctional};
use crate::error::{MsnError, Result};
use crate::linalg::{gemm, Matrix};
use crate::real::Real;

/// Kernel with mask `b(t) = (1 + t)^{-beta}`, truncated to `lambda < K`.
#[derive(Clone, Debug)]
pub struct KernelSpec {
    beta: f64,
    truncation: usize,
    spec: BasisSpec,
}

impl KernelSpec {
    pub fn new(family: BasisFamily, beta: f64, truncation: usize) -> Result<Self> {
        let q = match family {
            BasisFamily::Chebyshev1D => 1.0,
            _ => 2.0,
        };
        if !(beta > q / 2.0) {
            return Err(MsnError::Precondition(format!(
                "kernel order beta = {beta} must exceed {}",
                q / 2.0
            )));
        }
        if truncation < 1 {
            return Err(MsnError::Precondition("kernel truncation K must be >= 1".into()));
        }
        Ok(Self {
            beta,
            truncation,
            spec: BasisSpec::new(family, truncation - 1),
        })
    }

    /// Default truncation `max(64, 4 * degree)`.
    pub fn default_truncation(degree: usize) -> usize {
        64.max(4 * degree)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Basis carrying the series (may contain elements with `lambda >= K`,
    /// which get zero weight).
    pub fn basis(&self) -> &BasisSpec {
        &self.spec
    }

    /// `b(lambda_j)^2` per basis element, zero beyond the truncation.
    pub fn weights<T: Real>(&self) -> Vec<T> {
        let k = self.truncation as f64;
        self.spec
            .indices()
            .iter()
            .map(|ix| {
                if ix.eigenvalue < k {
                    T::of((1.0 + ix.eigenvalue).powf(-2.0 * self.beta))
                } else {
                    T::zero()
                }
            })
            .collect()
    }
}

fn weighted_sum<T: Real>(w: &[T], u: &[T], v: &[T]) -> T {
    w.iter()
        .zip(u)
        .zip(v)
        .fold(T::zero(), |acc, ((w, u), v)| acc + *w * *u * *v)
}

/// `G(x, y)`.
pub fn eval_g<T: Real>(ks: &KernelSpec, x: &[T], y: &[T]) -> Result<T> {
    let n = ks.spec.dimension();
    let (mut px, mut py) = (vec![T::zero(); n], vec![T::zero(); n]);
    ks.spec.eval_all(x, &mut px)?;
    ks.spec.eval_all(y, &mut py)?;
    Ok(weighted_sum(&ks.weights(), &px, &py))
}

/// `(L G(., x))(y)`: the functional acts on the first variable at its own point.
pub fn eval_lk_g<T: Real>(ks: &KernelSpec, functional: &LinearFunctional, x: &[T]) -> Result<T> {
    let n = ks.spec.dimension();
    let (mut lphi, mut px) = (vec![T::zero(); n], vec![T::zero(); n]);
    functional.apply_to_basis(&ks.spec, &mut lphi)?;
    ks.spec.eval_all(x, &mut px)?;
    Ok(weighted_sum(&ks.weights(), &lphi, &px))
}

/// Gram matrix `G[i][j] = L_i L_j G`, symmetrized.
pub fn gram_matrix<T: Real>(ks: &KernelSpec, functionals: &[LinearFunctional]) -> Result<Matrix<T>> {
    let phi: Matrix<T> = assemble_matrix(&ks.spec, functionals)?;
    let w = ks.weights::<T>();
    let (m, n) = (phi.rows(), phi.cols());
    let scaled = Matrix::from_fn(m, n, |i, j| phi[(i, j)] * w[j].sqrt());
    let mut g = Matrix::zeros(m, m);
    gemm(
        T::one(),
        scaled.view(0, 0, m, n),
        scaled.view(0, 0, m, n).t(),
        T::zero(),
        g.view_mut(0, 0, m, m),
    );
    let half = T::of(0.5);
    for j in 0..m {
        for i in 0..j {
            let v = half * (g[(i, j)] + g[(j, i)]);
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

/// In-place lower Cholesky factor; on failure returns the offending pivot.
fn cholesky<T: Real>(a: &mut Matrix<T>) -> std::result::Result<(), f64> {
    let n = a.rows();
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d = d - a[(j, k)] * a[(j, k)];
        }
        if !(d > T::zero()) {
            return Err(d.to_f64_lossless());
        }
        let d = d.sqrt();
        a[(j, j)] = d;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s = s - a[(i, k)] * a[(j, k)];
            }
            a[(i, j)] = s / d;
        }
    }
    Ok(())
}

fn cholesky_solve<T: Real>(l: &Matrix<T>, b: &[T]) -> Vec<T> {
    let n = l.rows();
    let mut y = b.to_vec();
    for i in 0..n {
        let mut s = y[i];
        for k in 0..i {
            s = s - l[(i, k)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s = s - l[(k, i)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    y
}

#[derive(Clone, Debug)]
pub struct KernelInterpolant<T> {
    /// Kernel coefficients `alpha_i`, one per functional.
    pub coefficients: Vec<T>,
    /// The same interpolant in the basis of [`KernelSpec::basis`].
    pub expansion: Vec<T>,
    /// Diagonal shift that was needed for the factorization (0 if none).
    pub jitter: f64,
}

/// Solves the Gram system by Cholesky, retrying once with a diagonal shift
/// of `1e-12 * trace / n`, then refines against the interpolation residual.
pub fn solve_kernel_system<T: Real>(
    ks: &KernelSpec,
    functionals: &[LinearFunctional],
    data: &[f64],
) -> Result<KernelInterpolant<T>> {
    if functionals.len() != data.len() {
        return Err(MsnError::LengthMismatch {
            what: "functionals vs data",
            expected: functionals.len(),
            got: data.len(),
        });
    }
    if functionals.is_empty() {
        return Err(MsnError::EmptySystem);
    }
    let gram: Matrix<T> = gram_matrix(ks, functionals)?;
    let m = gram.rows();
    let trace = (0..m).fold(T::zero(), |s, i| s + gram[(i, i)]);
    let mut jitter = T::zero();
    let mut l = gram.clone();
    if let Err(first) = cholesky(&mut l) {
        jitter = T::of(1e-12) * trace / T::of(m as f64);
        l = gram.clone();
        for i in 0..m {
            l[(i, i)] = l[(i, i)] + jitter;
        }
        if let Err(pivot) = cholesky(&mut l) {
            return Err(MsnError::Conditioning {
                smallest_eigenvalue_estimate: pivot.min(first),
            });
        }
    }
    let rhs: Vec<T> = data.iter().map(|&v| T::of(v)).collect();
    let phi: Matrix<T> = assemble_matrix(&ks.spec, functionals)?;
    let w = ks.weights::<T>();
    let expand = |alpha: &[T]| -> Vec<T> {
        (0..phi.cols())
            .map(|k| w[k] * (0..m).fold(T::zero(), |s, i| s + phi[(i, k)] * alpha[i]))
            .collect()
    };
    let residual = |e: &[T]| -> Vec<T> { phi.mul_vec(e).iter().zip(&rhs).map(|(&v, &f)| f - v).collect() };
    let size = |r: &[T]| r.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let mut coefficients = cholesky_solve(&l, &rhs);
    let mut expansion = expand(&coefficients);
    let mut r = residual(&expansion);
    // iterative refinement against the interpolation residual
    for _ in 0..3 {
        let delta = cholesky_solve(&l, &r);
        let next: Vec<T> = coefficients.iter().zip(&delta).map(|(&a, &d)| a + d).collect();
        let next_expansion = expand(&next);
        let next_r = residual(&next_expansion);
        if !(size(&next_r) < size(&r)) {
            break;
        }
        (coefficients, expansion, r) = (next, next_expansion, next_r);
    }
    Ok(KernelInterpolant {
        coefficients,
        expansion,
        jitter: jitter.to_f64_lossless(),
    })
}
