//! Orthonormal Chebyshev polynomials on `[-1, 1]`.
//!
//! `phi_0 = 1`, `phi_k = sqrt(2) T_k` for `k >= 1`; orthonormal with respect to
//! the arcsine (Chebyshev) probability measure, the image of the uniform
//! measure on the circle under `x = cos(theta)`.

use crate::real::Real;

/// Fills `out[k] = phi_k(x)` for `k = 0..out.len()` via `T_{k+1} = 2x T_k - T_{k-1}`.
pub fn values<T: Real>(x: T, out: &mut [T]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    let sqrt2 = T::SQRT_2();
    let two_x = x + x;
    let mut prev = T::one();
    let mut cur = x;
    out[0] = T::one();
    if n > 1 {
        out[1] = sqrt2 * cur;
    }
    for slot in out.iter_mut().skip(2) {
        let next = two_x * cur - prev;
        prev = cur;
        cur = next;
        *slot = sqrt2 * cur;
    }
}

/// Fills `out[k] = phi_k'(x)` using `T_k' = k U_{k-1}` and the `U` recurrence.
pub fn derivatives<T: Real>(x: T, out: &mut [T]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    let sqrt2 = T::SQRT_2();
    let two_x = x + x;
    out[0] = T::zero();
    // U_{-1} = 0, U_0 = 1
    let mut u_prev = T::zero();
    let mut u_cur = T::one();
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        *slot = sqrt2 * T::of(k as f64) * u_cur;
        let next = two_x * u_cur - u_prev;
        u_prev = u_cur;
        u_cur = next;
    }
}

/// `sum_k a_k phi_k(x)` by Clenshaw's recurrence.
pub fn clenshaw<T: Real>(coefficients: &[T], x: T) -> T {
    let n = coefficients.len();
    if n == 0 {
        return T::zero();
    }
    let sqrt2 = T::SQRT_2();
    let two_x = x + x;
    let mut b1 = T::zero();
    let mut b2 = T::zero();
    for k in (1..n).rev() {
        let b0 = sqrt2 * coefficients[k] + two_x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    coefficients[0] + x * b1 - b2
}

/// `sum_k a_k phi_k'(x)`: the derivative series rewritten in `U_j` and summed by Clenshaw.
pub fn clenshaw_derivative<T: Real>(coefficients: &[T], x: T) -> T {
    let n = coefficients.len();
    if n < 2 {
        return T::zero();
    }
    let sqrt2 = T::SQRT_2();
    let two_x = x + x;
    let mut b1 = T::zero();
    let mut b2 = T::zero();
    // U-series coefficients c_j = sqrt(2) (j+1) a_{j+1}, j = 0..n-2
    for j in (0..n - 1).rev() {
        let c = sqrt2 * T::of((j + 1) as f64) * coefficients[j + 1];
        let b0 = c + two_x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    b1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t3_values() {
        let mut v = [0.0f64; 4];
        values(0.5, &mut v);
        assert!((v[3] / 2f64.sqrt() - (-1.0)).abs() < 1e-15);
        values(1.0, &mut v);
        for (k, x) in v.iter().enumerate().skip(1) {
            assert!((x / 2f64.sqrt() - 1.0).abs() < 1e-15, "k={k}");
        }
    }

    #[test]
    fn derivative_at_one_is_n_squared() {
        let mut d = [0.0f64; 6];
        derivatives(1.0, &mut d);
        for (k, v) in d.iter().enumerate() {
            assert!((v / if k == 0 { 1.0 } else { 2f64.sqrt() } - (k * k) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn clenshaw_matches_direct_sum() {
        let a: Vec<f64> = (0..40)
            .map(|k| ((k * 7 % 11) as f64 - 5.0) / (1.0 + k as f64))
            .collect();
        let mut v = vec![0.0; a.len()];
        let mut d = vec![0.0; a.len()];
        for &x in &[-1.0, -0.73, 0.0, 0.31, 0.999, 1.0] {
            values(x, &mut v);
            derivatives(x, &mut d);
            let direct: f64 = a.iter().zip(&v).map(|(a, v)| a * v).sum();
            let direct_d: f64 = a.iter().zip(&d).map(|(a, v)| a * v).sum();
            assert!((clenshaw(&a, x) - direct).abs() < 1e-12 * (1.0 + direct.abs()));
            assert!((clenshaw_derivative(&a, x) - direct_d).abs() < 1e-11 * (1.0 + direct_d.abs()));
        }
    }
}
