//! Elementary reflectors `H = I - tau v v^T` with `v[0] = 1`.

use super::{axpy, dot, nrm2, Matrix};
use crate::real::Real;

/// Generates a reflector mapping `(alpha, x)` onto `(beta, 0)`.
///
/// `x` is overwritten with the tail of `v`. Returns `(beta, tau)`; `tau = 0`
/// means `H = I` and `beta = alpha`.
pub(crate) fn generate<T: Real>(alpha: T, x: &mut [T]) -> (T, T) {
    let xnorm = nrm2(x);
    if xnorm == T::zero() {
        return (alpha, T::zero());
    }
    let mut beta = alpha.hypot(xnorm);
    if alpha >= T::zero() {
        beta = -beta;
    }
    let tau = (beta - alpha) / beta;
    let scale = T::one() / (alpha - beta);
    for v in x.iter_mut() {
        *v = *v * scale;
    }
    (beta, tau)
}

/// Applies `H` to the vector `(head, tail)` in place.
#[inline]
pub(crate) fn apply<T: Real>(v_tail: &[T], tau: T, head: &mut T, tail: &mut [T]) {
    if tau == T::zero() {
        return;
    }
    let w = tau * (*head + dot(v_tail, tail));
    *head = *head - w;
    axpy(-w, v_tail, tail);
}

/// Upper triangular `T` with `H_0 H_1 ... H_{b-1} = I - V T V^T`, given the
/// Gram matrix `G = V^T V` (only the strict upper part is read).
pub(crate) fn triangular_factor<T: Real>(gram: &Matrix<T>, tau: &[T]) -> Matrix<T> {
    let b = tau.len();
    let mut t = Matrix::zeros(b, b);
    for i in 0..b {
        t[(i, i)] = tau[i];
        if tau[i] == T::zero() {
            continue;
        }
        for r in 0..i {
            let mut acc = T::zero();
            for c in r..i {
                acc = acc + t[(r, c)] * gram[(c, i)];
            }
            t[(r, i)] = -tau[i] * acc;
        }
    }
    t
}
