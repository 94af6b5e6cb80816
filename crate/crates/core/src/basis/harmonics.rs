//! Real spherical harmonics, orthonormal under the normalized surface measure
//! `dsigma / (4 pi)`, without the Condon–Shortley phase.
//!
//! `Y_{l,0} = P_l0`, `Y_{l,m} = P_lm cos(m phi)` and `Y_{l,-m} = P_lm sin(m phi)`
//! for `m > 0`, where `P_lm` are the 4pi-normalized associated Legendre
//! functions. Ordinal of `(l, m)` is `l^2 + l + m`.

use crate::real::Real;

/// Ordinal of `(l, m)` in the `(l, m)`-lexicographic ordering, `m = -l..=l`.
#[inline]
pub fn ordinal(l: usize, m: i64) -> usize {
    l * l + (l as i64 + m) as usize
}

/// Normalized associated Legendre values at one colatitude.
///
/// `p[l][m]` holds `P_lm(cos theta)`; `q[l][m]` holds `P_lm / sin(theta)` for
/// `m >= 1`, computed with its own recurrence so it stays finite at the poles.
pub(crate) struct LegendreTable<T> {
    p: Vec<T>,
    q: Vec<T>,
}

impl<T: Real> LegendreTable<T> {
    #[inline]
    fn at(l: usize, m: usize) -> usize {
        l * (l + 1) / 2 + m
    }

    /// `t = cos(theta)`, `u = sin(theta) >= 0`.
    pub fn new(max_degree: usize, t: T, u: T) -> Self {
        let size = (max_degree + 1) * (max_degree + 2) / 2;
        let mut p = vec![T::zero(); size];
        let mut q = vec![T::zero(); size];
        p[0] = T::one();
        // Diagonal: P_mm = u sqrt((2m+1)/(2m)) P_{m-1,m-1}, with P_11 = sqrt(3) u.
        // The Q diagonal carries one power of u fewer.
        let mut prev_diag = T::one();
        for m in 1..=max_degree {
            let factor = if m == 1 {
                T::of(3.0).sqrt()
            } else {
                T::of((2 * m + 1) as f64 / (2 * m) as f64).sqrt()
            };
            let q_mm = factor * prev_diag;
            q[Self::at(m, m)] = q_mm;
            p[Self::at(m, m)] = q_mm * u;
            prev_diag = p[Self::at(m, m)];
        }
        for m in 0..=max_degree {
            if m + 1 > max_degree {
                break;
            }
            let c = T::of((2 * m + 3) as f64).sqrt() * t;
            p[Self::at(m + 1, m)] = c * p[Self::at(m, m)];
            q[Self::at(m + 1, m)] = c * q[Self::at(m, m)];
            for l in m + 2..=max_degree {
                let lf = l as f64;
                let mf = m as f64;
                let a = T::of(((2.0 * lf - 1.0) * (2.0 * lf + 1.0) / ((lf - mf) * (lf + mf))).sqrt());
                let b = T::of(
                    ((2.0 * lf + 1.0) * (lf + mf - 1.0) * (lf - mf - 1.0) / ((lf - mf) * (lf + mf) * (2.0 * lf - 3.0)))
                        .sqrt(),
                );
                p[Self::at(l, m)] = a * t * p[Self::at(l - 1, m)] - b * p[Self::at(l - 2, m)];
                q[Self::at(l, m)] = a * t * q[Self::at(l - 1, m)] - b * q[Self::at(l - 2, m)];
            }
        }
        Self { p, q }
    }

    #[inline]
    pub fn p(&self, l: usize, m: usize) -> T {
        if m > l {
            T::zero()
        } else {
            self.p[Self::at(l, m)]
        }
    }

    #[inline]
    pub fn q(&self, l: usize, m: usize) -> T {
        self.q[Self::at(l, m)]
    }

    /// `d P_lm(cos theta) / d theta` from the ladder relation in `m`.
    pub fn dtheta(&self, l: usize, m: usize) -> T {
        let lf = l as f64;
        let mf = m as f64;
        match m {
            0 => {
                if l == 0 {
                    T::zero()
                } else {
                    -T::of((lf * (lf + 1.0) / 2.0).sqrt()) * self.p(l, 1)
                }
            }
            1 => {
                T::of(0.5)
                    * (T::of((2.0 * lf * (lf + 1.0)).sqrt()) * self.p(l, 0)
                        - T::of(((lf - 1.0) * (lf + 2.0)).max(0.0).sqrt()) * self.p(l, 2))
            }
            _ => {
                T::of(0.5)
                    * (T::of(((lf + mf) * (lf - mf + 1.0)).sqrt()) * self.p(l, m - 1)
                        - T::of(((lf - mf) * (lf + mf + 1.0)).max(0.0).sqrt()) * self.p(l, m + 1))
            }
        }
    }
}

/// Spherical coordinates of a unit vector: `(cos theta, sin theta, cos phi, sin phi)`.
pub(crate) fn angles<T: Real>(p: &[T]) -> (T, T, T, T) {
    let rxy = (p[0] * p[0] + p[1] * p[1]).sqrt();
    let r = (rxy * rxy + p[2] * p[2]).sqrt();
    let t = p[2] / r;
    let u = rxy / r;
    if rxy > T::zero() {
        (t, u, p[0] / rxy, p[1] / rxy)
    } else {
        (t, u, T::one(), T::zero())
    }
}

/// `cos(m phi)`, `sin(m phi)` for `m = 0..=max` by angle addition.
pub(crate) fn trig_table<T: Real>(cphi: T, sphi: T, max: usize) -> (Vec<T>, Vec<T>) {
    let mut c = vec![T::zero(); max + 1];
    let mut s = vec![T::zero(); max + 1];
    c[0] = T::one();
    for m in 1..=max {
        c[m] = c[m - 1] * cphi - s[m - 1] * sphi;
        s[m] = s[m - 1] * cphi + c[m - 1] * sphi;
    }
    (c, s)
}

/// Values of all `(L+1)^2` harmonics at unit vector `p`.
pub fn values<T: Real>(max_degree: usize, p: &[T], out: &mut [T]) {
    let (t, u, cphi, sphi) = angles(p);
    let table = LegendreTable::new(max_degree, t, u);
    let (c, s) = trig_table(cphi, sphi, max_degree);
    for l in 0..=max_degree {
        out[ordinal(l, 0)] = table.p(l, 0);
        for m in 1..=l {
            let plm = table.p(l, m);
            out[ordinal(l, m as i64)] = plm * c[m];
            out[ordinal(l, -(m as i64))] = plm * s[m];
        }
    }
}

/// Orthonormal tangent frame `(e_theta, e_phi)` at unit vector `p`.
///
/// Within `1e-8` of a pole the azimuth is undefined; the frame is then built
/// from the x axis projected onto the tangent plane.
pub fn tangent_frame<T: Real>(p: &[T]) -> ([T; 3], [T; 3]) {
    let (t, u, cphi, sphi) = angles(p);
    if u.to_f64_lossless() < 1e-8 {
        let dot = p[0];
        let mut e1 = [T::one() - dot * p[0], -dot * p[1], -dot * p[2]];
        let n = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
        for v in e1.iter_mut() {
            *v = *v / n;
        }
        let e2 = [
            p[1] * e1[2] - p[2] * e1[1],
            p[2] * e1[0] - p[0] * e1[2],
            p[0] * e1[1] - p[1] * e1[0],
        ];
        return (e1, e2);
    }
    ([t * cphi, t * sphi, -u], [-sphi, cphi, T::zero()])
}

/// Directional derivatives of all harmonics at `p` along tangent `dir`.
pub fn directional_derivatives<T: Real>(max_degree: usize, p: &[T], dir: &[T], out: &mut [T]) {
    let (t, u, cphi, sphi) = angles(p);
    let table = LegendreTable::new(max_degree, t, u);
    let (c, s) = trig_table(cphi, sphi, max_degree);
    let e_theta = [t * cphi, t * sphi, -u];
    let e_phi = [-sphi, cphi, T::zero()];
    let d_theta = e_theta[0] * dir[0] + e_theta[1] * dir[1] + e_theta[2] * dir[2];
    let d_phi = e_phi[0] * dir[0] + e_phi[1] * dir[1] + e_phi[2] * dir[2];
    for l in 0..=max_degree {
        out[ordinal(l, 0)] = table.dtheta(l, 0) * d_theta;
        for m in 1..=l {
            let dp = table.dtheta(l, m);
            let mq = T::of(m as f64) * table.q(l, m);
            // grad = dY/dtheta e_theta + (1/sin theta) dY/dphi e_phi
            out[ordinal(l, m as i64)] = dp * c[m] * d_theta - mq * s[m] * d_phi;
            out[ordinal(l, -(m as i64))] = dp * s[m] * d_theta + mq * c[m] * d_phi;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_closed_forms() {
        // Y_10 = sqrt(3) z, Y_11 = sqrt(3) x, Y_1,-1 = sqrt(3) y
        let p = [0.48f64, -0.6, 0.64];
        let mut out = vec![0.0; 9];
        values(2, &p, &mut out);
        let r3 = 3f64.sqrt();
        assert!((out[0] - 1.0).abs() < 1e-15);
        assert!((out[ordinal(1, -1)] - r3 * p[1]).abs() < 1e-14);
        assert!((out[ordinal(1, 0)] - r3 * p[2]).abs() < 1e-14);
        assert!((out[ordinal(1, 1)] - r3 * p[0]).abs() < 1e-14);
        // Y_20 = sqrt(5)/2 (3z^2 - 1)
        let y20 = 5f64.sqrt() / 2.0 * (3.0 * p[2] * p[2] - 1.0);
        assert!((out[ordinal(2, 0)] - y20).abs() < 1e-14);
        // Y_22 = sqrt(15)/2 (x^2 - y^2)
        let y22 = 15f64.sqrt() / 2.0 * (p[0] * p[0] - p[1] * p[1]);
        assert!((out[ordinal(2, 2)] - y22).abs() < 1e-14);
    }

    #[test]
    fn pole_derivative_is_finite() {
        let p = [0.0f64, 0.0, 1.0];
        let (e1, _) = tangent_frame(&p);
        let mut out = vec![0.0; 16];
        directional_derivatives(3, &p, &e1, &mut out);
        // Y_11 = sqrt(3) x has gradient sqrt(3) e_x at the north pole
        assert!((out[ordinal(1, 1)] - 3f64.sqrt() * e1[0]).abs() < 1e-14);
        assert!(out.iter().all(|v| v.is_finite()));
    }
}
