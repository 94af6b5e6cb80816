//! Benchmark functions: four Runge ridges on `[-1,1]^2`, their restriction to
//! the line `y = -0.96`, and a smooth oscillatory field on the sphere.

use crate::constraints::ScalarField;
use crate::error::{MsnError, Result};

/// Difficulty used by most tables.
pub const R_DEFAULT: f64 = 25.0;

/// `y` coordinate of the 1D test function.
pub const LINE_Y: f64 = -0.96;

/// Ridge arguments `t_i(x, y)` with their gradients.
fn ridges(x: f64, y: f64) -> [(f64, f64, f64); 4] {
    [
        (x * x + y - 0.3, 2.0 * x, 1.0),
        (x + y - 0.4, 1.0, 1.0),
        (x + y * y - 0.5, 1.0, 2.0 * y),
        (x * x + y * y - 0.25, 2.0 * x, 2.0 * y),
    ]
}

/// `f_R(x, y) = sum_i 1 / (1 + R t_i^2)`.
pub fn eval_f_r(r: f64, x: f64, y: f64) -> f64 {
    ridges(x, y).iter().map(|(t, _, _)| 1.0 / (1.0 + r * t * t)).sum()
}

pub fn grad_f_r(r: f64, x: f64, y: f64) -> [f64; 2] {
    ridges(x, y).iter().fold([0.0, 0.0], |[gx, gy], (t, tx, ty)| {
        let d = 1.0 + r * t * t;
        let c = -2.0 * r * t / (d * d);
        [gx + c * tx, gy + c * ty]
    })
}

/// `f_25(x, -0.96)`.
pub fn eval_f_1d(x: f64) -> f64 {
    eval_f_r(R_DEFAULT, x, LINE_Y)
}

pub fn d_f_1d(x: f64) -> f64 {
    grad_f_r(R_DEFAULT, x, LINE_Y)[0]
}

fn check_unit(p: &[f64]) -> Result<()> {
    if p.len() != 3 || ((p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt() - 1.0).abs() > 1e-12 {
        return Err(MsnError::Domain {
            domain: "unit sphere",
            point: p.to_vec(),
        });
    }
    Ok(())
}

fn sphere_arg(p: &[f64]) -> f64 {
    (7.0 * p[0]).cos() + (7.0 * p[1]).cos() + (7.0 * p[2]).cos()
}

fn ambient_grad_g(p: &[f64]) -> [f64; 3] {
    let u = sphere_arg(p);
    let d = 1.0 + u * u;
    let c = 14.0 * u / (d * d);
    [c * (7.0 * p[0]).sin(), c * (7.0 * p[1]).sin(), c * (7.0 * p[2]).sin()]
}

/// `g(p) = 1 / (1 + (cos 7x + cos 7y + cos 7z)^2)`.
pub fn eval_g_sphere(p: &[f64]) -> Result<f64> {
    check_unit(p)?;
    let u = sphere_arg(p);
    Ok(1.0 / (1.0 + u * u))
}

/// `(I - p p^T) grad g`.
pub fn tangential_grad_g(p: &[f64]) -> Result<[f64; 3]> {
    check_unit(p)?;
    let g = ambient_grad_g(p);
    let radial = g[0] * p[0] + g[1] * p[1] + g[2] * p[2];
    Ok([g[0] - radial * p[0], g[1] - radial * p[1], g[2] - radial * p[2]])
}

/// Test function selector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestFunction {
    /// `f_R` on the plane.
    Runge { r: f64 },
    /// `f_25(x, -0.96)` on the interval.
    Line,
    /// `g` on the sphere.
    Sphere,
}

impl ScalarField for TestFunction {
    fn value(&self, p: &[f64]) -> f64 {
        match *self {
            TestFunction::Runge { r } => eval_f_r(r, p[0], p[1]),
            TestFunction::Line => eval_f_1d(p[0]),
            TestFunction::Sphere => {
                let u = sphere_arg(p);
                1.0 / (1.0 + u * u)
            }
        }
    }

    fn gradient(&self, p: &[f64]) -> Vec<f64> {
        match *self {
            TestFunction::Runge { r } => grad_f_r(r, p[0], p[1]).to_vec(),
            TestFunction::Line => vec![d_f_1d(p[0])],
            TestFunction::Sphere => ambient_grad_g(p).to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert!((eval_f_r(25.0, 0.0, 0.3) - 2.601_98).abs() < 1e-5);
        let direct = 1.0
            + 1.0 / (1.0 + 25.0 * 0.01)
            + 1.0 / (1.0 + 25.0 * 0.41f64.powi(2))
            + 1.0 / (1.0 + 25.0 * 0.16f64.powi(2));
        assert!((eval_f_r(25.0, 0.0, 0.3) - direct).abs() < 1e-15);
        assert!((eval_f_1d(0.0) - 0.310_903_037).abs() < 1e-9);
        assert_ne!(eval_f_1d(0.5), eval_f_1d(-0.5));
        assert!((eval_g_sphere(&[0.0, 0.0, 1.0]).unwrap() - 0.116_497).abs() < 1e-6);
        assert!(eval_g_sphere(&[0.0, 0.0, 1.1]).is_err());
    }

    #[test]
    fn first_ridge_peaks_on_parabola() {
        // x^2 + y = 0.3 zeroes the first argument
        let (x, y) = (0.4, 0.3 - 0.16);
        let rest = eval_f_r(25.0, x, y) - 1.0;
        let others: f64 = ridges(x, y)[1..]
            .iter()
            .map(|(t, _, _)| 1.0 / (1.0 + 25.0 * t * t))
            .sum();
        assert!((rest - others).abs() < 1e-15);
    }

    #[test]
    fn sphere_symmetry_and_tangency() {
        let p = [0.48, -0.6, 0.64];
        let g = eval_g_sphere(&p).unwrap();
        for q in [[p[1], p[0], p[2]], [p[2], p[1], p[0]], [p[1], p[2], p[0]]] {
            assert!((eval_g_sphere(&q).unwrap() - g).abs() < 1e-15);
        }
        let t = tangential_grad_g(&p).unwrap();
        assert!((t[0] * p[0] + t[1] * p[1] + t[2] * p[2]).abs() < 1e-14);
    }
}
