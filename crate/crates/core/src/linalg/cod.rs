//! Rank-revealing complete orthogonal decomposition `A P = Q [T 0; 0 0] Z`.
//!
//! Column pivoting is blocked: a small Gaussian sketch `Omega A` picks each
//! block of pivots, classic pivoted Householder QR orders them inside the
//! panel, and the trailing matrix is updated with compact WY products. The
//! upper trapezoid `[R11 R12]` is then reduced to triangular form by RZ
//! reflectors acting from the right, also in blocks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::householder::{apply, generate, triangular_factor};
use super::{axpy, dot, gemm, nrm2, Matrix};
use crate::real::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct CodOptions {
    /// Pivot `k` is kept iff `|R_kk| > tol * ||a_k||`, with `a_k` the pivot
    /// column of the input; `None` selects the precision default.
    pub rank_tolerance: Option<f64>,
    pub block_size: usize,
    pub oversampling: usize,
    pub seed: u64,
    /// Both dimensions must reach this before the blocked path is used.
    pub blocked_min_dim: usize,
}

impl Default for CodOptions {
    fn default() -> Self {
        Self {
            rank_tolerance: None,
            block_size: 64,
            oversampling: 8,
            seed: 0x5eed_0fc0d,
            blocked_min_dim: 384,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompleteOrthogonalDecomposition<T> {
    /// Householder vectors below the diagonal, `T` in the leading `r x r`
    /// upper triangle, RZ vectors in rows `0..r`, columns `r..`.
    factors: Matrix<T>,
    tau_q: Vec<T>,
    tau_z: Vec<T>,
    /// Column `j` of the factored matrix is input column `perm[j]`.
    perm: Vec<usize>,
    rank: usize,
    rank_tolerance: f64,
    pivots: Vec<T>,
}

impl<T: Real> CompleteOrthogonalDecomposition<T> {
    pub fn factor(mut a: Matrix<T>, opts: &CodOptions) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let rank_tolerance = opts.rank_tolerance.unwrap_or(T::RANK_TOLERANCE);
        let tol = T::of(rank_tolerance);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut col_norms: Vec<T> = (0..n).map(|j| nrm2(a.col(j))).collect();
        let mut tau_q = Vec::with_capacity(m.min(n));
        let rank = if m >= opts.blocked_min_dim && n >= opts.blocked_min_dim {
            qrcp_blocked(&mut a, &mut perm, &mut col_norms, tol, &mut tau_q, opts)
        } else {
            let steps = m.min(n);
            qrcp_columns(
                &mut a,
                0,
                n,
                steps,
                tol,
                &mut perm,
                &mut col_norms,
                &mut tau_q,
                |_, _| {},
            )
            .0
        };
        tau_q.truncate(rank);
        let pivots = (0..rank).map(|k| a[(k, k)]).collect();
        let tau_z = rz(&mut a, rank, 32);
        Self {
            factors: a,
            tau_q,
            tau_z,
            perm,
            rank,
            rank_tolerance,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rank_tolerance(&self) -> f64 {
        self.rank_tolerance
    }

    pub fn rows(&self) -> usize {
        self.factors.rows()
    }

    pub fn cols(&self) -> usize {
        self.factors.cols()
    }

    /// Column permutation: factored column `j` is input column `permutation()[j]`.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// `|R_11|_max / |R_rr|`, from the pivoted QR diagonal before the RZ step.
    pub fn condition_estimate(&self) -> f64 {
        let mags = self.pivots.iter().map(|v| v.abs().to_f64_lossless());
        let (lo, hi) = mags.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if self.rank == 0 {
            f64::INFINITY
        } else {
            hi / lo
        }
    }

    /// Minimum-norm solution of the rank-`r` truncated least-squares problem.
    pub fn solve(&self, rhs: &[T]) -> Vec<T> {
        let (m, n, r) = (self.rows(), self.cols(), self.rank);
        assert_eq!(rhs.len(), m, "right-hand side length");
        let a = &self.factors;
        let mut g = rhs.to_vec();
        for k in 0..r {
            let (head, tail) = g[k..].split_first_mut().expect("k < m");
            apply(&a.col(k)[k + 1..m], self.tau_q[k], head, tail);
        }
        let mut x = vec![T::zero(); n];
        x[..r].copy_from_slice(&g[..r]);
        for j in (0..r).rev() {
            x[j] = x[j] / a[(j, j)];
            let xj = x[j];
            axpy(-xj, &a.col(j)[..j], &mut x[..j]);
        }
        self.apply_z_transpose(&mut x);
        self.unpermute(&x)
    }

    /// Dimension of the numerical null space, `n - r`.
    pub fn nullity(&self) -> usize {
        self.cols() - self.rank
    }

    /// Orthonormal null-space vector `j < nullity()` of the truncated factorization.
    pub fn null_vector(&self, j: usize) -> Vec<T> {
        assert!(j < self.nullity());
        let mut x = vec![T::zero(); self.cols()];
        x[self.rank + j] = T::one();
        self.apply_z_transpose(&mut x);
        self.unpermute(&x)
    }

    /// `x <- Z^T x = H_{r-1} ... H_0 x`.
    fn apply_z_transpose(&self, x: &mut [T]) {
        let (n, r) = (self.cols(), self.rank);
        if r == n {
            return;
        }
        let a = &self.factors;
        let (head, tail) = x.split_at_mut(r);
        let mut z = vec![T::zero(); n - r];
        for k in 0..r {
            let tau = self.tau_z[k];
            if tau == T::zero() {
                continue;
            }
            for (t, zt) in z.iter_mut().enumerate() {
                *zt = a[(k, r + t)];
            }
            apply(&z, tau, &mut head[k], tail);
        }
    }

    fn unpermute(&self, x: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); x.len()];
        for (j, &p) in self.perm.iter().enumerate() {
            out[p] = x[j];
        }
        out
    }
}

/// Splits out column `src` (read) and column `dst > src` (write).
fn col_pair<T: Real>(a: &mut Matrix<T>, src: usize, dst: usize) -> (&[T], &mut [T]) {
    debug_assert!(src < dst);
    let m = a.rows();
    let (left, right) = a.as_mut_slice().split_at_mut(dst * m);
    (&left[src * m..(src + 1) * m], &mut right[..m])
}

/// Classic pivoted Householder QR on columns `k..c1`, rows `k..`, for at most
/// `steps` steps. Reflectors are applied to columns inside `k..c1` only.
///
/// Returns `(accepted, rank_deficient)`. `swap` mirrors every column swap
/// into auxiliary storage.
#[allow(clippy::too_many_arguments)]
fn qrcp_columns<T: Real>(
    a: &mut Matrix<T>,
    k: usize,
    c1: usize,
    steps: usize,
    tol: T,
    perm: &mut [usize],
    col_norms: &mut [T],
    tau: &mut Vec<T>,
    mut swap: impl FnMut(usize, usize),
) -> (usize, bool) {
    let m = a.rows();
    let steps = steps.min(m.saturating_sub(k)).min(c1 - k);
    let mut vn1: Vec<T> = (k..c1).map(|j| nrm2(&a.col(j)[k..])).collect();
    let mut vn2 = vn1.clone();
    let tol3z = T::epsilon().sqrt();
    for i in 0..steps {
        let kk = k + i;
        let p = (i..vn1.len()).fold(i, |best, j| if vn1[j] > vn1[best] { j } else { best });
        if p != i {
            a.swap_cols(kk, k + p);
            perm.swap(kk, k + p);
            col_norms.swap(kk, k + p);
            vn1.swap(i, p);
            vn2.swap(i, p);
            swap(kk, k + p);
        }
        let col = a.col_mut(kk);
        let (beta, t) = {
            let (head, tail) = col[kk..].split_first_mut().expect("kk < m");
            generate(*head, tail)
        };
        if !(beta.abs() > tol * col_norms[kk]) {
            return (i, true);
        }
        col[kk] = beta;
        tau.push(t);
        for j in kk + 1..c1 {
            let (v, target) = col_pair(a, kk, j);
            let (head, tail) = target[kk..].split_first_mut().expect("kk < m");
            apply(&v[kk + 1..], t, head, tail);
            let jl = j - k;
            if vn1[jl] != T::zero() {
                let ratio = target[kk].abs() / vn1[jl];
                let temp = (T::one() - ratio * ratio).max(T::zero());
                let q = vn1[jl] / vn2[jl];
                if temp * q * q <= tol3z {
                    vn1[jl] = nrm2(&target[kk + 1..]);
                    vn2[jl] = vn1[jl];
                } else {
                    vn1[jl] = vn1[jl] * temp.sqrt();
                }
            }
        }
    }
    (steps, false)
}

fn qrcp_blocked<T: Real>(
    a: &mut Matrix<T>,
    perm: &mut [usize],
    col_norms: &mut [T],
    tol: T,
    tau: &mut Vec<T>,
    opts: &CodOptions,
) -> usize {
    let (m, n) = (a.rows(), a.cols());
    let kmax = m.min(n);
    let nb = opts.block_size.max(1);
    let ns = nb + opts.oversampling;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let omega = Matrix::from_fn(ns, m, |_, _| {
        let g: f64 = StandardNormal.sample(&mut rng);
        T::of(g)
    });
    let mut y = omega.matmul(a);
    drop(omega);

    let mut k = 0;
    while k < kmax {
        let bj = nb.min(kmax - k);
        let width = n - k;

        // Pick the block's pivots on the sketch of the trailing columns.
        let mut ys = Matrix::from_fn(ns, width, |i, j| y[(i, k + j)]);
        let mut ids: Vec<usize> = (0..width).collect();
        let mut dummy_norms = vec![T::zero(); width];
        let mut dummy_tau = Vec::new();
        qrcp_columns(
            &mut ys,
            0,
            width,
            bj,
            T::zero(),
            &mut ids,
            &mut dummy_norms,
            &mut dummy_tau,
            |_, _| {},
        );
        drop(ys);

        let mut ident: Vec<usize> = (0..width).collect();
        let mut pos: Vec<usize> = (0..width).collect();
        for (dst, &id) in ids[..bj].iter().enumerate() {
            let src = pos[id];
            if src != dst {
                a.swap_cols(k + src, k + dst);
                y.swap_cols(k + src, k + dst);
                perm.swap(k + src, k + dst);
                col_norms.swap(k + src, k + dst);
                let other = ident[dst];
                ident.swap(src, dst);
                pos[id] = dst;
                pos[other] = src;
            }
        }

        let (accepted, deficient) = qrcp_columns(a, k, k + bj, bj, tol, perm, col_norms, tau, |p, q| y.swap_cols(p, q));
        if k + bj < n && accepted > 0 {
            apply_block_left(a, k, &tau[k..k + accepted], k + bj, n);
        }
        if deficient {
            return k + accepted;
        }
        if k + bj < n {
            downdate_sketch(&mut y, a, k, bj);
        }
        k += bj;
    }
    kmax
}

/// Applies `(H_k ... H_{k+b-1})^T` to columns `c0..c1`, rows `k..`.
fn apply_block_left<T: Real>(a: &mut Matrix<T>, k: usize, tau: &[T], c0: usize, c1: usize) {
    let m = a.rows();
    let b = tau.len();
    let mv = m - k;
    let ncols = c1 - c0;
    let v = Matrix::from_fn(mv, b, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => T::zero(),
        std::cmp::Ordering::Equal => T::one(),
        std::cmp::Ordering::Greater => a[(k + i, k + j)],
    });
    let mut gram = Matrix::zeros(b, b);
    gemm(
        T::one(),
        v.view(0, 0, mv, b).t(),
        v.view(0, 0, mv, b),
        T::zero(),
        gram.view_mut(0, 0, b, b),
    );
    let t = triangular_factor(&gram, tau);
    let mut w = Matrix::zeros(b, ncols);
    gemm(
        T::one(),
        v.view(0, 0, mv, b).t(),
        a.view(k, c0, mv, ncols),
        T::zero(),
        w.view_mut(0, 0, b, ncols),
    );
    let mut tw = Matrix::zeros(b, ncols);
    gemm(
        T::one(),
        t.view(0, 0, b, b).t(),
        w.view(0, 0, b, ncols),
        T::zero(),
        tw.view_mut(0, 0, b, ncols),
    );
    drop(w);
    gemm(
        -T::one(),
        v.view(0, 0, mv, b),
        tw.view(0, 0, b, ncols),
        T::one(),
        a.view_mut(k, c0, mv, ncols),
    );
}

/// `Y_2 <- Y_2 - Y_1 R_11^{-1} R_12`, keeping the sketch aligned with the
/// trailing matrix after the panel at `k..k+bj`.
fn downdate_sketch<T: Real>(y: &mut Matrix<T>, a: &Matrix<T>, k: usize, bj: usize) {
    let ns = y.rows();
    let n = a.cols();
    let mut x = Matrix::from_fn(ns, bj, |i, j| y[(i, k + j)]);
    for j in 0..bj {
        for i in 0..j {
            let r = a[(k + i, k + j)];
            if r == T::zero() {
                continue;
            }
            for row in 0..ns {
                x[(row, j)] = x[(row, j)] - x[(row, i)] * r;
            }
        }
        let d = a[(k + j, k + j)];
        for row in 0..ns {
            x[(row, j)] = x[(row, j)] / d;
        }
    }
    let rest = n - k - bj;
    gemm(
        -T::one(),
        x.view(0, 0, ns, bj),
        a.view(k, k + bj, bj, rest),
        T::one(),
        y.view_mut(0, k + bj, ns, rest),
    );
}

/// Reduces rows `0..r` of `[R11 R12]` to `[T 0]` from the right.
fn rz<T: Real>(a: &mut Matrix<T>, r: usize, block: usize) -> Vec<T> {
    let n = a.cols();
    let mut tau = vec![T::zero(); r];
    if r == 0 || r == n {
        return tau;
    }
    let tail = n - r;
    let mut k1 = r;
    while k1 > 0 {
        let k0 = k1.saturating_sub(block);
        let b = k1 - k0;
        let width = b + tail;
        let mut rb = vec![T::zero(); b * width];
        for i in 0..b {
            for j in 0..b {
                rb[i * width + j] = a[(k0 + i, k0 + j)];
            }
        }
        for t in 0..tail {
            let col = a.col(r + t);
            for i in 0..b {
                rb[i * width + b + t] = col[k0 + i];
            }
        }

        for li in (0..b).rev() {
            let (upper, rest) = rb.split_at_mut(li * width);
            let row = &mut rest[..width];
            let (beta, t) = generate(row[li], &mut row[b..]);
            row[li] = beta;
            tau[k0 + li] = t;
            if t == T::zero() {
                continue;
            }
            let z = &row[b..];
            for urow in upper.chunks_exact_mut(width) {
                let w = t * (urow[li] + dot(z, &urow[b..]));
                urow[li] = urow[li] - w;
                axpy(-w, z, &mut urow[b..]);
            }
        }

        for i in 0..b {
            for j in 0..b {
                a[(k0 + i, k0 + j)] = rb[i * width + j];
            }
        }
        for t in 0..tail {
            let col = a.col_mut(r + t);
            for i in 0..b {
                col[k0 + i] = rb[i * width + b + t];
            }
        }

        if k0 > 0 {
            // Reflectors in application order k1-1, k1-2, ..., k0.
            let zt = Matrix::from_fn(tail, b, |t, i| rb[(b - 1 - i) * width + b + t]);
            let taus: Vec<T> = (0..b).map(|i| tau[k1 - 1 - i]).collect();
            let mut gram = Matrix::zeros(b, b);
            gemm(
                T::one(),
                zt.view(0, 0, tail, b).t(),
                zt.view(0, 0, tail, b),
                T::zero(),
                gram.view_mut(0, 0, b, b),
            );
            let tf = triangular_factor(&gram, &taus);
            let mut mm = Matrix::from_fn(k0, b, |row, i| a[(row, k1 - 1 - i)]);
            gemm(
                T::one(),
                a.view(0, r, k0, tail),
                zt.view(0, 0, tail, b),
                T::one(),
                mm.view_mut(0, 0, k0, b),
            );
            let n2 = mm.matmul(&tf);
            for i in 0..b {
                let col = a.col_mut(k1 - 1 - i);
                for (v, d) in col[..k0].iter_mut().zip(n2.col(i)) {
                    *v = *v - *d;
                }
            }
            gemm(
                -T::one(),
                n2.view(0, 0, k0, b),
                zt.view(0, 0, tail, b).t(),
                T::one(),
                a.view_mut(0, r, k0, tail),
            );
        }
        k1 = k0;
    }
    tau
}
