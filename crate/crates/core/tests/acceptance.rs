//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Runs with `cargo test -p ghk-core --test acceptance`.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use ghk_core::barriers::{constant_c, constant_rk, margin_curve, max_axial_radius, Line, MarginFamily};
use ghk_core::convexity::{brute_force_grassmannian_min, k_smallest_eigensum, scan_samples, spectral_norm, sylvester_positive};
use ghk_core::geodesics::{find_critical_points, residual_tolerance, SeedStrategy};
use ghk_core::potential::{check_harmonic, phi_jet};
use ghk_core::roots::poly_eval;
use ghk_core::stability::{
    chebyshev_nodes, counterexample_closed_form, counterexample_segment, gaussian_curvature_direct, mn_decomposition,
    SegmentSurface,
};
use ghk_core::surfaces::{lifted_mean_curvature, lifted_sff};
use ghk_core::{BarrierSurface, PointConfiguration, Sampling, Vec3};
use num::rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{fd_gradient_hessian, random_config, random_symmetric, regular_point, term_scale};

struct Outcome {
    pass: bool,
    detail: String,
}

fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn c1_constant_c() -> Outcome {
    let (c, elapsed) = {
        let start = Instant::now();
        let c = constant_c();
        (c, start.elapsed())
    };
    let residual = poly_eval(&[2.0, 5.0, 4.0, -1.0], c).abs();
    Outcome {
        pass: (5.06..=5.08).contains(&c) && residual < 1e-9 && elapsed < Duration::from_millis(1),
        detail: format!("C = {c:.13}, residual {residual:.1e}, {elapsed:?}"),
    }
}

fn c2_constant_rk() -> Outcome {
    let roots: Vec<f64> = (2..=20).map(|k| constant_rk(k).unwrap()).collect();
    let min = roots.iter().copied().fold(f64::INFINITY, f64::min);
    let exact = (16.0 + 288f64.sqrt()) / 8.0;
    let err = (roots[0] - exact).abs();
    Outcome {
        pass: min > 4.0 && err <= 1e-10,
        detail: format!("min R_k over k=2..20 = {min:.12}, |R_2 - (16+√288)/8| = {err:.1e}"),
    }
}

fn two_centre(m: f64, a: f64) -> SegmentSurface {
    let cfg = PointConfiguration::with_unit_centres(m, &[Vec3::new(0.0, 0.0, a), Vec3::new(0.0, 0.0, -a)]).unwrap();
    SegmentSurface::new(&cfg, 0, 1).unwrap()
}

fn c3_eguchi_hanson() -> Outcome {
    let (out, elapsed) = timed(|| {
        let seg = two_centre(0.0, 1.0);
        let mut worst_k: f64 = 0.0;
        let mut worst_paths: f64 = 0.0;
        for t in chebyshev_nodes(1.0, 100) {
            let direct = gaussian_curvature_direct(&seg, t).unwrap();
            let split = mn_decomposition(&seg, t).unwrap().k;
            worst_k = worst_k.max((direct - 1.0).abs());
            worst_paths = worst_paths.max((direct - split).abs());
        }
        let taub = two_centre(1.0, 1.0);
        let k0 = gaussian_curvature_direct(&taub, 0.0).unwrap();
        let k0_split = mn_decomposition(&taub, 0.0).unwrap().k;
        worst_paths = worst_paths.max((k0 - k0_split).abs());
        Outcome {
            pass: worst_k <= 1e-9 && (k0 - 0.25).abs() <= 1e-9 && worst_paths <= 1e-9,
            detail: format!(
                "max |K - 1| = {worst_k:.1e}, K(m=1, t=0) = {k0:.12}, max |direct - M+N| = {worst_paths:.1e}"
            ),
        }
    });
    Outcome {
        pass: out.pass && elapsed < Duration::from_millis(10),
        detail: format!("{}, {elapsed:?}", out.detail),
    }
}

fn c4_counterexample() -> Outcome {
    // exact evaluation at a = 1, ε = 1/10, m = 0
    let a = Ratio::from_integer(1i64);
    let eps = Ratio::new(1i64, 10);
    let m = Ratio::from_integer(0i64);
    let two = Ratio::from_integer(2i64);
    let four = Ratio::from_integer(4i64);
    let exact = -two * a * a - two * a * a * a * m - a * a * a / eps
        + a.pow(5) / (two * eps.pow(3))
        + m * a.pow(6) / (two * eps.pow(3))
        + a.pow(6) / (four * eps.pow(4));
    let exact_ok = exact == Ratio::from_integer(2988);
    let closed = counterexample_closed_form(1.0, 0.1, 0.0).unwrap();
    let s = mn_decomposition(&counterexample_segment(1.0, 0.1, 0.0).unwrap(), 0.0).unwrap();
    let rel = ((s.m + s.n) - closed).abs() / closed.abs();

    // Sign changes of ε ↦ (M+N) on a dense grid of (0, 10]; for a = 1,
    // m = 0 the quartic 4ε⁴(M+N) = -8ε⁴ - 4ε³ + 2ε + 1 has one sign change in
    // its coefficients, so Descartes' rule allows exactly one positive root.
    let n = 200_000;
    let mut changes = 0;
    let mut prev = counterexample_closed_form(1.0, 10.0 / n as f64, 0.0).unwrap().signum();
    for i in 2..=n {
        let cur = counterexample_closed_form(1.0, 10.0 * i as f64 / n as f64, 0.0).unwrap().signum();
        if cur != prev {
            changes += 1;
        }
        prev = cur;
    }
    let coeff_signs = [-8.0f64, -4.0, 0.0, 2.0, 1.0]
        .iter()
        .filter(|c| **c != 0.0)
        .map(|c| c.signum())
        .collect::<Vec<_>>()
        .windows(2)
        .filter(|w| w[0] != w[1])
        .count();
    Outcome {
        pass: exact_ok && (closed - 2988.0).abs() <= 1e-9 * 2988.0 && rel <= 1e-9 && changes == 1 && coeff_signs == 1,
        detail: format!(
            "exact value {exact}, (M+N)(0) = {:.10} (rel {rel:.1e}), sign changes on grid {changes}, Descartes count {coeff_signs}",
            s.m + s.n
        ),
    }
}

fn c5_barrier_margins() -> Outcome {
    let (out, elapsed) = timed(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let axis = Line::new(Vec3::zeros(), Vec3::z()).unwrap();
        let mut worst = [f64::INFINITY; 3];
        let mut skipped = 0;
        for trial in 0..20 {
            let k = rng.random_range(1..=6);
            let cfg = random_config(&mut rng, k, (trial % 2) as f64, 1.0, 0.1);
            let r_sphere = 1.34 * cfg.max_centre_norm();
            let r_cyl = 2.01 * max_axial_radius(&cfg, &axis);
            let r_codim2 = 5.1 * cfg.max_centre_norm();
            let runs = [
                margin_curve(&cfg, &MarginFamily::Sphere, &[r_sphere], 10_000, trial).unwrap(),
                margin_curve(&cfg, &MarginFamily::Cylinder(axis), &[r_cyl], 10_000, trial).unwrap(),
                margin_curve(&cfg, &MarginFamily::SphereCodim2, &[r_codim2], 10_000, trial).unwrap(),
            ];
            for (w, run) in worst.iter_mut().zip(&runs) {
                *w = w.min(run[0].min_margin);
                skipped += run[0].skipped;
            }
        }
        Outcome {
            pass: worst.iter().all(|w| *w > 0.0) && skipped == 0,
            detail: format!(
                "min margins: sphere {:.3e}, cylinder {:.3e}, codim-2 {:.3e} ({skipped} skipped)",
                worst[0], worst[1], worst[2]
            ),
        }
    });
    Outcome {
        pass: out.pass && elapsed < Duration::from_secs(30),
        detail: format!("{}, {elapsed:?}", out.detail),
    }
}

fn c6_ellipsoid() -> Outcome {
    let (out, elapsed) = timed(|| {
        let mut failures = 0;
        let mut evaluated = 0;
        for m in [0.0, 1.0, 3.0] {
            let cfg = PointConfiguration::with_unit_centres(m, &[Vec3::z(), -Vec3::z()]).unwrap();
            for i in 0..128 {
                let r = 0.05 + (3.0 - 0.05) * i as f64 / 127.0;
                let surface = BarrierSurface::two_foci_ellipsoid(1.0, r);
                for j in 0..128 {
                    let beta = PI * j as f64 / 127.0;
                    let data = surface.surface_point([0.0, beta]).unwrap();
                    let lift = lifted_sff(&cfg, &data).unwrap();
                    evaluated += 1;
                    if !sylvester_positive(&lift.matrix).unwrap() {
                        failures += 1;
                    }
                }
            }
        }
        Outcome {
            pass: failures == 0,
            detail: format!("{failures} of {evaluated} grid points fail Sylvester's criterion"),
        }
    });
    Outcome {
        pass: out.pass && elapsed < Duration::from_secs(10),
        detail: format!("{}, {elapsed:?}", out.detail),
    }
}

fn c7_three_foci() -> Outcome {
    let radius = 2.0 / 3f64.sqrt();
    let foci: Vec<Vec3> = (0..3)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / 3.0;
            Vec3::new(radius * t.cos(), radius * t.sin(), 0.0)
        })
        .collect();
    let cfg = PointConfiguration::with_unit_centres(0.0, &foci).unwrap();
    let f_min = 2.0 * 3f64.sqrt();
    let sampling = Sampling {
        grid: [32, 32],
        random: 1000,
        seed: 0,
    };
    let mut best: Option<(f64, f64)> = None;
    for rel in [1e-3, 1e-2, 1e-1] {
        let level = f_min * (1.0 + rel);
        let surface = BarrierSurface::multi_foci_ellipsoid(&foci, level);
        let samples = scan_samples(&cfg, &surface, 1, &sampling).unwrap();
        for s in samples.iter().flatten() {
            let relative = s.eigensum / s.scale;
            if best.is_none_or(|(r, _)| relative < r) {
                best = Some((relative, level));
            }
        }
    }
    let (relative, level) = best.unwrap();
    Outcome {
        pass: relative < -1e-6,
        detail: format!("smallest λ₁/‖S‖ = {relative:.4e} at level {level:.6}"),
    }
}

fn c8_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_below: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    for i in 0..1000 {
        let s = random_symmetric(&mut rng);
        let norm = spectral_norm(&s);
        for k in 1..=3 {
            let exact = k_smallest_eigensum(&s, k).unwrap();
            let oracle = brute_force_grassmannian_min(&s, k, 100_000, i).unwrap();
            let gap = (oracle - exact) / norm;
            worst_below = worst_below.min(gap);
            worst_gap = worst_gap.max(gap);
        }
    }
    Outcome {
        pass: worst_below >= 0.0 && worst_gap <= 1e-2,
        detail: format!("relative gap range [{worst_below:.2e}, {worst_gap:.2e}]"),
    }
}

fn c9_geodesics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut short = 0;
    let mut outside = 0;
    let mut residual_bad = 0;
    let mut counts = Vec::new();
    for trial in 0..20 {
        let k = rng.random_range(2..=6);
        let cfg = random_config(&mut rng, k, 0.0, 1.0, 0.2);
        let found = find_critical_points(
            &cfg,
            &SeedStrategy {
                random: 1000,
                seed: trial,
            },
        )
        .unwrap();
        let tol = residual_tolerance(&cfg);
        if found.points.len() + 1 < k {
            short += 1;
        }
        outside += found.points.iter().filter(|p| !p.in_hull).count();
        residual_bad += found.points.iter().filter(|p| p.residual > tol).count();
        counts.push(format!("{}/{}", found.points.len(), k - 1));
    }
    Outcome {
        pass: short == 0 && outside == 0 && residual_bad == 0,
        detail: format!(
            "found/required per config [{}]; {outside} outside hull, {residual_bad} above residual tolerance",
            counts.join(" ")
        ),
    }
}

fn c10_flat_space() -> Outcome {
    let cfg = PointConfiguration::with_unit_centres(0.0, &[Vec3::zeros()]).unwrap();
    let mut worst: f64 = 0.0;
    for r in [0.5, 1.0, 2.0] {
        let surface = BarrierSurface::sphere(Vec3::zeros(), r);
        for params in [[0.0, 0.3], [1.0, 1.5], [4.0, 2.9]] {
            let data = surface.surface_point(params).unwrap();
            let h = lifted_mean_curvature(&cfg, &data).unwrap();
            worst = worst.max((h.abs() - 3.0 / (2.0 * r).sqrt()).abs());
        }
    }
    Outcome {
        pass: worst <= 1e-9,
        detail: format!("max ||H| - 3/√(2r)| = {worst:.1e}"),
    }
}

fn c11_jet() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst_grad: f64 = 0.0;
    let mut worst_hess: f64 = 0.0;
    let mut worst_lap: f64 = 0.0;
    for trial in 0..10 {
        let k = rng.random_range(1..=6);
        let cfg = random_config(&mut rng, k, (trial % 2) as f64, 1.0, 0.2);
        for _ in 0..100 {
            let x = regular_point(&mut rng, &cfg, 2.0, 0.2);
            let jet = phi_jet(&cfg, &x).unwrap();
            let value = |y: &Vec3| phi_jet(&cfg, y).unwrap().value;
            // steps proportional to the distance to the nearest centre
            let near = cfg.nearest_centre(&x).unwrap().1;
            let (g, h) = fd_gradient_hessian(value, &x, 1e-5 * near, 3e-4 * near);
            // errors are measured against the larger of the derivative and
            // the size of its individual centre terms
            let g_scale = jet.gradient.norm().max(term_scale(&cfg, &x, 2));
            let h_scale = jet.hessian.norm().max(term_scale(&cfg, &x, 3));
            worst_grad = worst_grad.max((g - jet.gradient).norm() / g_scale);
            worst_hess = worst_hess.max((h - jet.hessian).norm() / h_scale);
            worst_lap = worst_lap.max(check_harmonic(&cfg, &x).unwrap().abs() / jet.hessian.norm());
        }
    }
    Outcome {
        pass: worst_grad <= 1e-6 && worst_hess <= 1e-6 && worst_lap <= 1e-10,
        detail: format!(
            "max relative FD error: gradient {worst_grad:.1e}, Hessian {worst_hess:.1e}; max |Δφ|/‖Hess‖ {worst_lap:.1e}"
        ),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("constant C", c1_constant_c),
        ("constants R_k", c2_constant_rk),
        ("Eguchi-Hanson curvature", c3_eguchi_hanson),
        ("counterexample closed form", c4_counterexample),
        ("barrier margin suite", c5_barrier_margins),
        ("two-foci ellipsoid convexity", c6_ellipsoid),
        ("three-foci failure witness", c7_three_foci),
        ("Grassmannian oracle", c8_oracle),
        ("critical point count", c9_geodesics),
        ("flat-space mean curvature", c10_flat_space),
        ("potential jet", c11_jet),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        let tag = if out.pass { "PASS" } else { "FAIL" };
        if !out.pass {
            failed += 1;
        }
        println!("[{tag}] {:>2} {name}: {}", i + 1, out.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
