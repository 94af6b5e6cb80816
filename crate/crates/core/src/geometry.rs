//! Node sets, separation measures and the degree-selection rules.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::BasisFamily;
use crate::error::{MsnError, Result};

/// Tolerance for unit norms and annulus radii.
const GEOMETRY_TOL: f64 = 1e-12;

/// Seed of the sphere candidate sequence unless one is supplied.
pub const DEFAULT_SPHERE_SEED: u64 = 20_180_417;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    Interval,
    Square,
    Annulus { r_in: f64, r_out: f64 },
    Sphere,
}

impl Domain {
    pub fn dim(self) -> usize {
        match self {
            Domain::Interval => 1,
            Domain::Square | Domain::Annulus { .. } => 2,
            Domain::Sphere => 3,
        }
    }

    pub fn basis_family(self) -> BasisFamily {
        match self {
            Domain::Interval => BasisFamily::Chebyshev1D,
            Domain::Square | Domain::Annulus { .. } => BasisFamily::ChebyshevTensor2D,
            Domain::Sphere => BasisFamily::SphericalHarmonics,
        }
    }
}

/// Points of one domain, stored flat.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    domain: Domain,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(domain: Domain, coords: Vec<f64>) -> Result<Self> {
        if !coords.len().is_multiple_of(domain.dim()) {
            return Err(MsnError::Precondition(format!(
                "{} coordinates do not form {}-dimensional points",
                coords.len(),
                domain.dim()
            )));
        }
        Ok(Self { domain, coords })
    }

    pub fn from_points(domain: Domain, points: &[Vec<f64>]) -> Result<Self> {
        let coords = points.iter().flatten().copied().collect();
        if points.iter().any(|p| p.len() != domain.dim()) {
            return Err(MsnError::Precondition(
                "point dimension does not match the domain".into(),
            ));
        }
        Self::new(domain, coords)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.coords[i * d..(i + 1) * d]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim())
    }

    /// Metric distance: Euclidean, or geodesic on the sphere.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        distance(self.domain, self.point(i), self.point(j))
    }

    /// Writes one point per row with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let header = ["x", "y", "z"][..self.dim()].join(",");
        writeln!(out, "{header}")?;
        for p in self.iter() {
            let row: Vec<String> = p.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

fn distance(domain: Domain, p: &[f64], q: &[f64]) -> f64 {
    match domain {
        Domain::Sphere => geodesic(p, q),
        _ => p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt(),
    }
}

/// Angle between unit vectors, accurate for nearby and antipodal pairs.
pub fn geodesic(p: &[f64], q: &[f64]) -> f64 {
    let cross = [
        p[1] * q[2] - p[2] * q[1],
        p[2] * q[0] - p[0] * q[2],
        p[0] * q[1] - p[1] * q[0],
    ];
    let sin = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    let cos = p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
    sin.atan2(cos)
}

/// Smallest pairwise distance, by exhaustive scan.
pub fn minimal_separation(ps: &PointSet) -> Result<f64> {
    if ps.len() < 2 {
        return Err(MsnError::Precondition(
            "minimal separation needs at least 2 points".into(),
        ));
    }
    let mut best = f64::INFINITY;
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            best = best.min(ps.distance(i, j));
        }
    }
    Ok(best)
}

fn arccos_checked(x: f64) -> Result<f64> {
    if !(-1.0 - GEOMETRY_TOL..=1.0 + GEOMETRY_TOL).contains(&x) {
        return Err(MsnError::Domain {
            domain: "interval [-1,1]",
            point: vec![x],
        });
    }
    Ok(x.clamp(-1.0, 1.0).acos())
}

/// `ceil(2 pi / min_{i != j} |acos x_i - acos x_j|)`.
pub fn mesh_norm_1d(xs: &[f64]) -> Result<usize> {
    if xs.len() < 2 {
        return Err(MsnError::Precondition("mesh norm needs at least 2 points".into()));
    }
    let mut theta = xs.iter().map(|&x| arccos_checked(x)).collect::<Result<Vec<_>>>()?;
    theta.sort_by(f64::total_cmp);
    let gap = theta.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if gap <= 0.0 {
        return Err(MsnError::Precondition("duplicate points in mesh norm".into()));
    }
    Ok((2.0 * PI / gap).ceil() as usize)
}

/// Degree `ceil(2 pi / eta)` from the minimal distance `eta` of the
/// `(acos x, acos y)` images of a planar set.
fn mesh_norm_2d(ps: &PointSet) -> Result<usize> {
    if ps.len() < 2 {
        return Err(MsnError::Precondition("mesh norm needs at least 2 points".into()));
    }
    let angles = ps
        .iter()
        .map(|p| Ok((arccos_checked(p[0])?, arccos_checked(p[1])?)))
        .collect::<Result<Vec<_>>>()?;
    let mut gap = f64::INFINITY;
    for (i, a) in angles.iter().enumerate() {
        for b in &angles[i + 1..] {
            gap = gap.min((a.0 - b.0).hypot(a.1 - b.1));
        }
    }
    if gap <= 0.0 {
        return Err(MsnError::Precondition("duplicate points in mesh norm".into()));
    }
    Ok((2.0 * PI / gap).ceil() as usize)
}

/// Polynomial degree used for interpolation on `ps`.
///
/// Interval: the 1D mesh norm. Planar sets: the same rule applied to the
/// minimal distance between the points mapped by `acos` per coordinate
/// (on tensor grids this equals the 1D rule on the grid coordinates).
/// Sphere: `ceil(2 pi / eta)` with geodesic minimal separation `eta`.
pub fn select_degree(ps: &PointSet) -> Result<usize> {
    match ps.domain() {
        Domain::Interval => {
            let xs: Vec<f64> = ps.iter().map(|p| p[0]).collect();
            mesh_norm_1d(&xs)
        }
        Domain::Square | Domain::Annulus { .. } => mesh_norm_2d(ps),
        Domain::Sphere => {
            let eta = minimal_separation(ps)?;
            if eta <= 0.0 {
                return Err(MsnError::Precondition("duplicate points on the sphere".into()));
            }
            Ok((2.0 * PI / eta).ceil() as usize)
        }
    }
}

fn check_n(n: usize, what: &str) -> Result<()> {
    if n < 2 {
        return Err(MsnError::Precondition(format!("{what} needs n >= 2, got {n}")));
    }
    Ok(())
}

fn equispaced(n: usize) -> Vec<f64> {
    let h = (n - 1) as f64;
    // exact integer numerator keeps the set symmetric about 0
    (0..n).map(|i| (2.0 * i as f64 - h) / h).collect()
}

fn midpoints(n: usize) -> Vec<f64> {
    let h = (n - 1) as f64;
    (0..n - 1).map(|i| (2.0 * i as f64 + 1.0 - h) / h).collect()
}

fn product(xs: &[f64]) -> Vec<f64> {
    xs.iter().flat_map(|&x| xs.iter().flat_map(move |&y| [x, y])).collect()
}

pub fn gen_equispaced_1d(n: usize) -> Result<PointSet> {
    check_n(n, "equispaced points")?;
    PointSet::new(Domain::Interval, equispaced(n))
}

pub fn gen_midpoints_1d(n: usize) -> Result<PointSet> {
    check_n(n, "midpoints")?;
    PointSet::new(Domain::Interval, midpoints(n))
}

/// `n x n` grid, x-major.
pub fn gen_tensor_grid(n: usize) -> Result<PointSet> {
    check_n(n, "tensor grid")?;
    PointSet::new(Domain::Square, product(&equispaced(n)))
}

/// `(n-1) x (n-1)` grid of cell centres.
pub fn gen_tensor_midgrid(n: usize) -> Result<PointSet> {
    check_n(n, "tensor midgrid")?;
    PointSet::new(Domain::Square, product(&midpoints(n)))
}

/// Tensor grid points with `r_in <= |p| <= r_out`.
pub fn gen_tensor_annulus(n: usize, r_in: f64, r_out: f64) -> Result<PointSet> {
    check_n(n, "tensor annulus")?;
    filter_annulus(&gen_tensor_grid(n)?, r_in, r_out)
}

/// Grid points (from any planar set) lying in the closed annulus.
pub fn filter_annulus(grid: &PointSet, r_in: f64, r_out: f64) -> Result<PointSet> {
    let coords: Vec<f64> = grid
        .iter()
        .filter(|p| {
            let r = p[0].hypot(p[1]);
            r_in <= r && r <= r_out
        })
        .flatten()
        .copied()
        .collect();
    if coords.is_empty() {
        return Err(MsnError::Precondition(format!(
            "no grid point lies in the annulus [{r_in}, {r_out}]"
        )));
    }
    PointSet::new(Domain::Annulus { r_in, r_out }, coords)
}

/// `m` radii times `n` angles on the annulus.
pub fn gen_annular_grid(m: usize, n: usize, r_in: f64, r_out: f64) -> Result<PointSet> {
    if m < 2 || n < 1 {
        return Err(MsnError::Precondition(format!(
            "annular grid needs m >= 2 and n >= 1, got ({m}, {n})"
        )));
    }
    let mut coords = Vec::with_capacity(2 * m * n);
    for i in 0..m {
        let r = r_in + (r_out - r_in) * i as f64 / (m - 1) as f64;
        for j in 0..n {
            let phi = 2.0 * PI * j as f64 / n as f64;
            coords.push(r * phi.cos());
            coords.push(r * phi.sin());
        }
    }
    PointSet::new(Domain::Annulus { r_in, r_out }, coords)
}

/// Radical inverse with a fixed digit scramble.
fn scrambled_radical_inverse(mut i: u64, base: u64, scramble: &[u64]) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += scramble[(i % base) as usize] as f64 * f;
        i /= base;
        f *= inv;
    }
    out
}

fn random_rotation(rng: &mut ChaCha8Rng) -> [[f64; 3]; 3] {
    // uniform unit quaternion
    let (u1, u2, u3): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    let (w, x, y, z) = (
        a * (2.0 * PI * u2).sin(),
        a * (2.0 * PI * u2).cos(),
        b * (2.0 * PI * u3).sin(),
        b * (2.0 * PI * u3).cos(),
    );
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - z * w),
            2.0 * (x * z + y * w),
        ],
        [
            2.0 * (x * y + z * w),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - x * w),
        ],
        [
            2.0 * (x * z - y * w),
            2.0 * (y * z + x * w),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

/// Deterministic low-discrepancy candidates on the sphere: scrambled Halton
/// points in `(z, phi)` (area preserving) under a seeded rotation.
pub fn sphere_candidates(count: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scramble2 = [0u64, 1];
    let mut scramble3 = [0u64, 1, 2];
    if rng.random::<bool>() {
        scramble2.swap(0, 1);
    }
    let k = rng.random_range(0..3usize);
    scramble3.rotate_left(k);
    let rot = random_rotation(&mut rng);
    (1..=count as u64)
        .map(|i| {
            let u = scrambled_radical_inverse(i, 2, &scramble2);
            let v = scrambled_radical_inverse(i, 3, &scramble3);
            let z = 1.0 - 2.0 * u;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let phi = 2.0 * PI * v;
            let p = [rho * phi.cos(), rho * phi.sin(), z];
            let mut q = [0.0; 3];
            for (qi, row) in q.iter_mut().zip(&rot) {
                *qi = row[0] * p[0] + row[1] * p[1] + row[2] * p[2];
            }
            let norm = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
            q.map(|c| c / norm)
        })
        .collect()
}

/// Polar-cap membership: `theta` in `[0, pi/3]` or `[2 pi/3, pi]`.
pub fn in_polar_caps(p: &[f64]) -> bool {
    p[2].abs() >= 0.5
}

/// Greedy packing with geodesic separation at least `pi/d`.
///
/// Candidates from [`sphere_candidates`] (`100 d^2` of them) are accepted in
/// order when they keep the separation; the result is maximal with respect to
/// the candidate set. With `caps`, only candidates in the polar caps are used.
pub fn gen_sphere_scattered(d: usize, caps: bool, seed: u64) -> Result<PointSet> {
    if d < 2 {
        return Err(MsnError::Precondition(format!("sphere packing needs d >= 2, got {d}")));
    }
    let sep = PI / d as f64;
    let chord = 2.0 * (sep / 2.0).sin();
    let cell = chord;
    let key = |p: &[f64; 3]| p.map(|c| ((c + 1.0) / cell).floor() as i64);
    let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    let mut accepted: Vec<[f64; 3]> = Vec::new();
    for cand in sphere_candidates(100 * d * d, seed) {
        if caps && !in_polar_caps(&cand) {
            continue;
        }
        let k = key(&cand);
        let mut ok = true;
        'scan: for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(ids) = grid.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                        if ids.iter().any(|&i| geodesic(&accepted[i], &cand) < sep) {
                            ok = false;
                            break 'scan;
                        }
                    }
                }
            }
        }
        if ok {
            grid.entry(k).or_default().push(accepted.len());
            accepted.push(cand);
        }
    }
    PointSet::new(Domain::Sphere, accepted.iter().flatten().copied().collect())
}

/// Checks the point-set invariants: finite coordinates inside the domain,
/// unit norm on the sphere, closed annulus bounds, pairwise distinct points.
pub fn validate(ps: &PointSet) -> Result<()> {
    let bad = |p: &[f64], domain: &'static str| MsnError::Domain {
        domain,
        point: p.to_vec(),
    };
    for p in ps.iter() {
        if p.iter().any(|v| !v.is_finite()) {
            return Err(MsnError::NonFinite("point coordinates"));
        }
        match ps.domain() {
            Domain::Interval | Domain::Square => {
                if p.iter().any(|v| v.abs() > 1.0) {
                    return Err(bad(p, "square [-1,1]^d"));
                }
            }
            Domain::Annulus { r_in, r_out } => {
                let r = p[0].hypot(p[1]);
                if r < r_in - GEOMETRY_TOL || r > r_out + GEOMETRY_TOL {
                    return Err(bad(p, "annulus"));
                }
            }
            Domain::Sphere => {
                let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                if (n - 1.0).abs() > GEOMETRY_TOL {
                    return Err(bad(p, "unit sphere"));
                }
            }
        }
    }
    if ps.len() >= 2 && minimal_separation(ps)? <= 0.0 {
        return Err(MsnError::Precondition("point set contains duplicates".into()));
    }
    Ok(())
}
