use msn_core::basis::harmonics::tangent_frame;
use msn_core::constraints::assemble_matrix;
use msn_core::kernel_solver::{eval_g, eval_lk_g};
use msn_core::linalg::nrm2;
use msn_core::msn_solver::{evaluate_interpolant_deriv, oracle_solve_msn};
use msn_core::testfuncs::{eval_g_sphere, tangential_grad_g};
use msn_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unit_sphere_point(rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = nrm2(&v);
        if n > 0.2 && n <= 1.0 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

/// Jittered nodes `-1 + (2i + 1 + u) / k`, `|u| <= 1/2`, kept apart.
fn jittered(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    (0..k)
        .map(|i| -1.0 + (2.0 * i as f64 + 1.0 + rng.random_range(-0.5..0.5)) / k as f64)
        .collect()
}

/// Well-separated sphere points by rejection.
fn spread_sphere(rng: &mut ChaCha8Rng, k: usize) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = Vec::new();
    while pts.len() < k {
        let p = unit_sphere_point(rng);
        if pts.iter().all(|q| geometry::geodesic(&p, q) > 0.5) {
            pts.push(p);
        }
    }
    pts
}

fn axis_dirs(dim: usize) -> Vec<Vec<f64>> {
    (0..dim)
        .map(|i| (0..dim).map(|j| (i == j) as u8 as f64).collect())
        .collect()
}

/// Value and derivative functionals at the given points.
fn functionals(points: &[Vec<f64>], with_derivs: bool) -> Vec<LinearFunctional> {
    let mut out: Vec<LinearFunctional> = points
        .iter()
        .map(|p| LinearFunctional::Eval { point: p.clone() })
        .collect();
    if with_derivs {
        for p in points {
            let dirs = if p.len() == 3 {
                let (a, b) = tangent_frame(p);
                vec![a.to_vec(), b.to_vec()]
            } else {
                axis_dirs(p.len())
            };
            for d in dirs {
                out.push(LinearFunctional::DirectionalDeriv {
                    point: p.clone(),
                    direction: d,
                });
            }
        }
    }
    out
}

/// Random underdetermined system: (basis, functionals).
fn random_setup(rng: &mut ChaCha8Rng, family: BasisFamily) -> (BasisSpec, Vec<LinearFunctional>) {
    match family {
        BasisFamily::Chebyshev1D => {
            let k = rng.random_range(4..12);
            let pts: Vec<Vec<f64>> = jittered(rng, k).into_iter().map(|x| vec![x]).collect();
            (BasisSpec::new(family, 6 * k), functionals(&pts, true))
        }
        BasisFamily::ChebyshevTensor2D => {
            let xs = jittered(rng, 3);
            let ys = jittered(rng, 3);
            let pts: Vec<Vec<f64>> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| vec![x, y])).collect();
            (BasisSpec::new(family, 9), functionals(&pts, true))
        }
        BasisFamily::SphericalHarmonics => (BasisSpec::new(family, 8), functionals(&spread_sphere(rng, 8), true)),
    }
}

fn family_strategy() -> impl Strategy<Value = BasisFamily> {
    prop_oneof![
        Just(BasisFamily::Chebyshev1D),
        Just(BasisFamily::ChebyshevTensor2D),
        Just(BasisFamily::SphericalHarmonics)
    ]
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    nrm2(&d) / nrm2(b).max(f64::MIN_POSITIVE)
}

/// `sum_k a_k phi_k(p)` from closed forms, independent of the library recurrences.
fn closed_form_value(spec: &BasisSpec, a: &[f64], p: &[f64]) -> f64 {
    let t = |k: usize, x: f64| {
        if k == 0 {
            1.0
        } else {
            2f64.sqrt() * (k as f64 * x.acos()).cos()
        }
    };
    spec.indices()
        .iter()
        .zip(a)
        .map(|(ix, c)| match ix.multi_index {
            MultiIndex::Degree(k) => c * t(k, p[0]),
            MultiIndex::Pair(k1, k2) => c * t(k1, p[0]) * t(k2, p[1]),
            MultiIndex::Harmonic { .. } => unreachable!(),
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn msn_matches_gram_schmidt_oracle(seed in any::<u64>(), family in family_strategy(), s in 0.0f64..6.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (spec, f) = random_setup(&mut rng, family);
        let data: Vec<f64> = (0..f.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let sys: System64 = assemble(&spec, &f, &data).unwrap();
        let a = solve_msn(&sys, s).unwrap();
        let b = oracle_solve_msn(&sys, s).unwrap();
        prop_assert_eq!(a.numerical_rank, sys.rows());
        prop_assert!(rel_diff(&a.coefficients, &b.coefficients) <= 1e-8);
        prop_assert!(a.constraint_residual <= 1e-12);
    }

    #[test]
    fn in_span_data_is_reproduced(seed in any::<u64>(), family in family_strategy(), s in 0.0f64..8.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (spec, pts) = match family {
            BasisFamily::Chebyshev1D => {
                let pts: Vec<Vec<f64>> = jittered(&mut rng, 11).into_iter().map(|x| vec![x]).collect();
                (BasisSpec::new(family, 10), pts)
            }
            BasisFamily::ChebyshevTensor2D => {
                let xs = jittered(&mut rng, 4);
                let ys = jittered(&mut rng, 4);
                (BasisSpec::new(family, 3), xs.iter().flat_map(|&x| ys.iter().map(move |&y| vec![x, y])).collect())
            }
            BasisFamily::SphericalHarmonics => (BasisSpec::new(family, 3), spread_sphere(&mut rng, 16)),
        };
        let a_p: Vec<f64> = (0..spec.dimension()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let f = functionals(&pts, true);
        let v = assemble_matrix::<f64>(&spec, &f).unwrap();
        let sys: System64 = assemble(&spec, &f, &v.mul_vec(&a_p)).unwrap();
        let sol = solve_msn(&sys, s).unwrap();
        let probes: Vec<Vec<f64>> = match family {
            BasisFamily::SphericalHarmonics => (0..200).map(|_| unit_sphere_point(&mut rng)).collect(),
            _ => (0..200).map(|_| (0..family.point_dim()).map(|_| rng.random_range(-1.0..=1.0)).collect()).collect(),
        };
        for p in probes {
            let exact = evaluate_interpolant(&spec, &a_p, &p).unwrap();
            let got = evaluate_interpolant(&spec, &sol.coefficients, &p).unwrap();
            prop_assert!((exact - got).abs() <= 1e-10, "{} vs {}", exact, got);
        }
    }

    #[test]
    fn null_space_perturbations_do_not_decrease_norm(seed in any::<u64>(), family in family_strategy(), s in 0.0f64..8.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (spec, f) = random_setup(&mut rng, family);
        let data: Vec<f64> = (0..f.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let sys: System64 = assemble(&spec, &f, &data).unwrap();
        let fact = MsnFactorization::new(&sys.matrix, &spec, s, &CodOptions::default()).unwrap();
        let sol = fact.solve(&sys.matrix, &sys.rhs).unwrap();
        let w = fact.weights();
        let sobolev = |a: &[f64]| nrm2(&a.iter().zip(w).map(|(x, w)| x * w).collect::<Vec<_>>());
        let base = sobolev(&sol.coefficients);
        for _ in 0..5 {
            let mut z = vec![0.0; spec.dimension()];
            for j in 0..fact.nullity() {
                let c = rng.random_range(-1.0..1.0);
                for (zi, ni) in z.iter_mut().zip(fact.null_vector(j)) {
                    *zi += c * ni;
                }
            }
            let vz = sys.matrix.mul_vec(&z);
            prop_assert!(vz.iter().all(|v| v.abs() <= 1e-10 * (1.0 + sobolev(&z))));
            let t = rng.random_range(-1.0..1.0) * base / sobolev(&z).max(1e-300);
            let perturbed: Vec<f64> = sol.coefficients.iter().zip(&z).map(|(a, z)| a + t * z).collect();
            prop_assert!(sobolev(&perturbed) >= base * (1.0 - 1e-10));
        }
    }

    #[test]
    fn solution_scales_with_data(seed in any::<u64>(), family in family_strategy(), lambda in -8.0f64..8.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (spec, f) = random_setup(&mut rng, family);
        let data: Vec<f64> = (0..f.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let scaled: Vec<f64> = data.iter().map(|v| lambda * v).collect();
        let sys: System64 = assemble(&spec, &f, &data).unwrap();
        let a = solve_msn(&sys, 4.0).unwrap().coefficients;
        let b = solve_msn(&sys.with_rhs(&scaled).unwrap(), 4.0).unwrap().coefficients;
        let la: Vec<f64> = a.iter().map(|v| lambda * v).collect();
        prop_assert!(rel_diff(&b, &la) <= 1e-14 || nrm2(&la) == 0.0);
    }

    #[test]
    fn assembly_matches_closed_form_evaluation(seed in any::<u64>(), two_d in any::<bool>(), m in 1usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let family = if two_d { BasisFamily::ChebyshevTensor2D } else { BasisFamily::Chebyshev1D };
        let m = if two_d { m / 3 + 1 } else { m };
        let spec = BasisSpec::new(family, m);
        let a: Vec<f64> = (0..spec.dimension()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let dim = family.point_dim();
        let pts: Vec<Vec<f64>> = (0..10).map(|_| (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect()).collect();
        let f = functionals(&pts, true);
        let mut data = Vec::new();
        for l in &f {
            match l {
                LinearFunctional::Eval { point } => data.push(closed_form_value(&spec, &a, point)),
                LinearFunctional::DirectionalDeriv { point, direction } => {
                    data.push(evaluate_interpolant_deriv(&spec, &a, point, direction).unwrap())
                }
            }
        }
        let sys: System64 = assemble(&spec, &f, &data).unwrap();
        let va = sys.matrix.mul_vec(&a);
        let fnorm = data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let scale: f64 = a.iter().map(|v| v.abs()).sum::<f64>() * 2.0;
        for (p, q) in va.iter().zip(&data).take(pts.len()) {
            prop_assert!((p - q).abs() <= 1e-12 * (1.0 + fnorm).max(scale));
        }
        for (p, q) in va.iter().zip(&data).skip(pts.len()) {
            prop_assert!((p - q).abs() <= 1e-12 * (1.0 + fnorm));
        }
    }

    #[test]
    fn basis_derivatives_match_finite_differences(seed in any::<u64>(), family in family_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = BasisSpec::new(family, 6);
        let n = spec.dimension();
        let h = 1e-6;
        let (p, dir, plus, minus) = match family {
            BasisFamily::SphericalHarmonics => {
                let p = unit_sphere_point(&mut rng);
                let (e1, e2) = tangent_frame(&p);
                let ang = rng.random_range(0.0..std::f64::consts::TAU);
                let d: Vec<f64> = (0..3).map(|i| ang.cos() * e1[i] + ang.sin() * e2[i]).collect();
                let walk = |t: f64| (0..3).map(|i| p[i] * t.cos() + d[i] * t.sin()).collect::<Vec<f64>>();
                (p.clone(), d.clone(), walk(h), walk(-h))
            }
            _ => {
                let dim = family.point_dim();
                let p: Vec<f64> = (0..dim).map(|_| rng.random_range(-0.95..0.95)).collect();
                let ang = rng.random_range(0.0..std::f64::consts::TAU);
                let d = if dim == 1 { vec![1.0] } else { vec![ang.cos(), ang.sin()] };
                let plus = p.iter().zip(&d).map(|(x, v)| x + h * v).collect();
                let minus = p.iter().zip(&d).map(|(x, v)| x - h * v).collect();
                (p, d, plus, minus)
            }
        };
        let (mut d, mut fp, mut fm) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        spec.eval_all_deriv(&p, &dir, &mut d).unwrap();
        spec.eval_all(&plus, &mut fp).unwrap();
        spec.eval_all(&minus, &mut fm).unwrap();
        let scale = d.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for k in 0..n {
            let fd = (fp[k] - fm[k]) / (2.0 * h);
            prop_assert!((fd - d[k]).abs() <= 1e-6 * scale, "k={} fd={} exact={}", k, fd, d[k]);
        }
    }

    #[test]
    fn test_function_gradients_match_finite_differences(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = 1e-6;
        let (x, y) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let g = testfuncs::grad_f_r(25.0, x, y);
        let fx = (testfuncs::eval_f_r(25.0, x + h, y) - testfuncs::eval_f_r(25.0, x - h, y)) / (2.0 * h);
        let fy = (testfuncs::eval_f_r(25.0, x, y + h) - testfuncs::eval_f_r(25.0, x, y - h)) / (2.0 * h);
        let scale = g[0].abs().max(g[1].abs()).max(1.0);
        prop_assert!((fx - g[0]).abs() <= 1e-6 * scale && (fy - g[1]).abs() <= 1e-6 * scale);
        let d1 = (testfuncs::eval_f_1d(x + h) - testfuncs::eval_f_1d(x - h)) / (2.0 * h);
        prop_assert!((d1 - testfuncs::d_f_1d(x)).abs() <= 1e-6 * testfuncs::d_f_1d(x).abs().max(1.0));

        let p = unit_sphere_point(&mut rng);
        let (e1, _) = tangent_frame(&p);
        let walk = |t: f64| (0..3).map(|i| p[i] * t.cos() + e1[i] * t.sin()).collect::<Vec<f64>>();
        let fd = (eval_g_sphere(&walk(h)).unwrap() - eval_g_sphere(&walk(-h)).unwrap()) / (2.0 * h);
        let tg = tangential_grad_g(&p).unwrap();
        let exact: f64 = (0..3).map(|i| tg[i] * e1[i]).sum();
        prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0));
    }

    #[test]
    fn kernel_derivative_matches_finite_differences(y0 in -0.9f64..0.9, x in -1.0f64..1.0) {
        let ks = KernelSpec::new(BasisFamily::Chebyshev1D, 3.0, 64).unwrap();
        let h = 1e-6;
        let d = LinearFunctional::DirectionalDeriv { point: vec![y0], direction: vec![1.0] };
        let exact: f64 = eval_lk_g(&ks, &d, &[x]).unwrap();
        let fd = (eval_g(&ks, &[y0 + h], &[x]).unwrap() - eval_g(&ks, &[y0 - h], &[x]).unwrap()) / (2.0 * h);
        prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0));
    }
}

fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                let (mut q0, mut q1) = (1.0, z);
                for k in 2..=n {
                    let q2 = ((2 * k - 1) as f64 * z * q1 - (k - 1) as f64 * q0) / k as f64;
                    q0 = q1;
                    q1 = q2;
                }
                let dq = n as f64 * (z * q1 - q0) / (z * z - 1.0);
                x[i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * dq * dq);
                break;
            }
        }
    }
    (x, w)
}

fn check_gram(gram: &[Vec<f64>]) {
    for (i, row) in gram.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((v - expected).abs() < 1e-12, "entry ({i},{j}) = {v}");
        }
    }
}

fn accumulate(spec: &BasisSpec, nodes: impl Iterator<Item = (Vec<f64>, f64)>) -> Vec<Vec<f64>> {
    let n = spec.dimension();
    let mut gram = vec![vec![0.0; n]; n];
    let mut phi = vec![0.0; n];
    for (p, w) in nodes {
        spec.eval_all(&p, &mut phi).unwrap();
        for i in 0..n {
            for j in 0..n {
                gram[i][j] += w * phi[i] * phi[j];
            }
        }
    }
    gram
}

#[test]
fn chebyshev_bases_are_orthonormal() {
    let q = 64;
    let theta = |j: usize| std::f64::consts::PI * (j as f64 + 0.5) / q as f64;
    let spec = BasisSpec::new(BasisFamily::Chebyshev1D, 20);
    check_gram(&accumulate(
        &spec,
        (0..q).map(|j| (vec![theta(j).cos()], 1.0 / q as f64)),
    ));
    let spec = BasisSpec::new(BasisFamily::ChebyshevTensor2D, 6);
    let nodes = (0..q * q).map(|ij| (vec![theta(ij / q).cos(), theta(ij % q).cos()], 1.0 / (q * q) as f64));
    check_gram(&accumulate(&spec, nodes));
}

#[test]
fn spherical_harmonics_are_orthonormal() {
    let spec = BasisSpec::new(BasisFamily::SphericalHarmonics, 8);
    let (z, w) = gauss_legendre(20);
    let nphi = 40;
    let nodes = z.iter().zip(&w).flat_map(|(&z, &w)| {
        let r = (1.0 - z * z).sqrt();
        (0..nphi).map(move |k| {
            let phi = std::f64::consts::TAU * k as f64 / nphi as f64;
            (vec![r * phi.cos(), r * phi.sin(), z], w / (2.0 * nphi as f64))
        })
    });
    check_gram(&accumulate(&spec, nodes));
}

#[test]
fn kernel_interpolant_equals_msn_with_matching_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for family in [
        BasisFamily::Chebyshev1D,
        BasisFamily::ChebyshevTensor2D,
        BasisFamily::SphericalHarmonics,
    ] {
        let (_, f) = random_setup(&mut rng, family);
        let beta = 2.5;
        let ks = KernelSpec::new(family, beta, 24).unwrap();
        let data: Vec<f64> = (0..f.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let kern: KernelInterpolant<f64> = solve_kernel_system(&ks, &f, &data).unwrap();
        // MSN over exactly the basis elements the kernel weights
        let spec = ks.basis();
        let keep: Vec<usize> = spec
            .indices()
            .iter()
            .filter(|ix| ix.eigenvalue < 24.0)
            .map(|ix| ix.ordinal)
            .collect();
        let v = assemble_matrix::<f64>(spec, &f).unwrap();
        let w: Vec<f64> = spec.sobolev_weights(beta);
        let b = Matrix::from_fn(v.rows(), keep.len(), |i, j| v[(i, keep[j])] / w[keep[j]]);
        let cod = linalg::CompleteOrthogonalDecomposition::factor(b, &CodOptions::default());
        let c = cod.solve(&data);
        let mut a = vec![0.0; spec.dimension()];
        for (j, &k) in keep.iter().enumerate() {
            a[k] = c[j] / w[k];
        }
        assert!(
            rel_diff(&kern.expansion, &a) <= 1e-7,
            "{family:?}: {}",
            rel_diff(&kern.expansion, &a)
        );
    }
}

#[test]
fn kernel_and_msn_agree_at_constraint_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let pts: Vec<Vec<f64>> = jittered(&mut rng, 9).into_iter().map(|x| vec![x]).collect();
    let f = functionals(&pts, true);
    let data: Vec<f64> = (0..f.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let beta = 2.0;
    let ks = KernelSpec::new(BasisFamily::Chebyshev1D, beta, 64).unwrap();
    let kern: KernelInterpolant<f64> = solve_kernel_system(&ks, &f, &data).unwrap();
    let spec = BasisSpec::new(BasisFamily::Chebyshev1D, 63);
    let sys: System64 = assemble(&spec, &f, &data).unwrap();
    let msn = solve_msn(&sys, 2.0 * beta).unwrap();
    let vk = sys.matrix.mul_vec(&kern.expansion);
    let vm = sys.matrix.mul_vec(&msn.coefficients);
    assert!(rel_diff(&vk, &vm) <= 1e-7, "{}", rel_diff(&vk, &vm));
}

#[test]
fn single_precision_solve_is_usable() {
    let pts: Vec<Vec<f64>> = (0..9).map(|i| vec![-1.0 + 0.25 * i as f64]).collect();
    let f = functionals(&pts, true);
    let data: Vec<f64> = f
        .iter()
        .map(|l| match l {
            LinearFunctional::Eval { point } => point[0].sin(),
            LinearFunctional::DirectionalDeriv { point, .. } => point[0].cos(),
        })
        .collect();
    let spec = BasisSpec::new(BasisFamily::Chebyshev1D, 40);
    let sys: System32 = assemble(&spec, &f, &data).unwrap();
    let sol: Solution32 = solve_msn(&sys, 3.0).unwrap();
    assert_eq!(sol.precision, Precision::Single);
    assert!(sol.constraint_residual <= 1e-4);
    for x in [-0.9f32, -0.3, 0.2, 0.8] {
        let v = evaluate_interpolant(&spec, &sol.coefficients, &[x]).unwrap();
        assert!((v - x.sin()).abs() < 1e-3);
    }
}
