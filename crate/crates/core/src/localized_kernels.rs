//! Smoothly cut-off spectral kernels `Phi_n(x, y) = sum_k h(k/n) phi_k(x) phi_k(y)`
//! for the Chebyshev system, and an empirical check of their decay away
//! from the diagonal in the distance `rho(x, y) = |acos x - acos y|`.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::chebyshev;
use crate::error::{MsnError, Result};

fn psi(u: f64) -> f64 {
    if u > 0.0 {
        (-1.0 / u).exp()
    } else {
        0.0
    }
}

/// Even `C^inf` cutoff: 1 on `[0, 1/2]`, 0 beyond 1, monotone between.
pub fn cutoff_h(t: f64) -> f64 {
    let t = t.abs();
    if t <= 0.5 {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0;
    }
    let a = psi(2.0 - 2.0 * t);
    a / (a + psi(2.0 * t - 1.0))
}

/// Number of nonzero terms of `Phi_n`.
fn terms(n: f64) -> usize {
    n.ceil() as usize
}

fn check_args(n: f64, x: f64, y: f64) -> Result<()> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(MsnError::Precondition(format!(
            "kernel order n must be positive, got {n}"
        )));
    }
    for p in [x, y] {
        if !(-1.0..=1.0).contains(&p) {
            return Err(MsnError::Domain {
                domain: "interval [-1, 1]",
                point: vec![p],
            });
        }
    }
    Ok(())
}

/// `Phi_n(x, y)` by direct summation of the three-term recurrence values.
pub fn eval_phi_n(n: f64, x: f64, y: f64) -> Result<f64> {
    check_args(n, x, y)?;
    let len = terms(n);
    let (mut px, mut py) = (vec![0.0; len], vec![0.0; len]);
    chebyshev::values(x, &mut px);
    chebyshev::values(y, &mut py);
    Ok((0..len).map(|k| cutoff_h(k as f64 / n) * (px[k] * py[k])).sum())
}

/// `rho(x, y)`.
pub fn torus_distance(x: f64, y: f64) -> f64 {
    (x.clamp(-1.0, 1.0).acos() - y.clamp(-1.0, 1.0).acos()).abs()
}

/// Empirical decay constant for one `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayReport {
    pub n: usize,
    /// `max |Phi_n| max(1, (n rho)^S) / n` over the samples.
    pub constant: f64,
    /// Sample attaining the maximum.
    pub rho_at_max: f64,
}

/// Samples `sample_count` pairs per `n` with `rho >= 4/n` (angles drawn
/// uniformly in `[0, pi]`) and reports the decay constant per `n`.
pub fn verify_decay(n_list: &[usize], s: u32, sample_count: usize, seed: u64) -> Result<Vec<DecayReport>> {
    if n_list.is_empty() || n_list.contains(&0) {
        return Err(MsnError::Precondition("n_list must be nonempty and positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pi = std::f64::consts::PI;
    let mut out = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let nf = n as f64;
        let min_rho = 4.0 / nf;
        let mut best = DecayReport {
            n,
            constant: 0.0,
            rho_at_max: f64::NAN,
        };
        let mut taken = 0;
        while taken < sample_count {
            let (a, b) = (rng.random_range(0.0..=pi), rng.random_range(0.0..=pi));
            let rho = (a - b).abs();
            if rho < min_rho {
                continue;
            }
            taken += 1;
            let phi = eval_phi_n(nf, a.cos(), b.cos())?;
            let c = phi.abs() * (nf * rho).powi(s as i32).max(1.0) / nf;
            if c > best.constant {
                best.constant = c;
                best.rho_at_max = rho;
            }
        }
        out.push(best);
    }
    Ok(out)
}

/// `max / min` of the reported constants.
pub fn spread(reports: &[DecayReport]) -> f64 {
    let max = reports.iter().map(|r| r.constant).fold(f64::MIN, f64::max);
    let min = reports.iter().map(|r| r.constant).fold(f64::MAX, f64::min);
    max / min
}

/// Decay curve of `Phi_n(x0, .)` for `y` sweeping `[-1, 1]`: columns
/// `n,rho,abs_phi,bound` with `bound = c n / max(1, (n rho)^S)`.
pub fn write_decay_csv<W: Write>(
    n_list: &[usize],
    s: u32,
    constant: f64,
    x0: f64,
    points: usize,
    mut out: W,
) -> io::Result<()> {
    writeln!(out, "n,rho,abs_phi,bound")?;
    let pi = std::f64::consts::PI;
    for &n in n_list {
        let nf = n as f64;
        for i in 0..points {
            let theta = pi * i as f64 / (points - 1).max(1) as f64;
            let y = theta.cos();
            let phi = eval_phi_n(nf, x0, y).map_err(io::Error::other)?;
            let rho = torus_distance(x0, y);
            let bound = constant * nf / (nf * rho).powi(s as i32).max(1.0);
            writeln!(out, "{n},{rho:.6e},{:.6e},{bound:.6e}", phi.abs())?;
        }
    }
    Ok(())
}
