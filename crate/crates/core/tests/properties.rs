//! Randomised invariants across the numerical modules.

use std::f64::consts::PI;

use proptest::prelude::*;
use sloshing::counting::{
    deficit_exact, lattice_count, profile_integral, surplus_exact, profile_shift_in_band, total_counts_and_s, EllipseSpec,
};
use sloshing::edge::{edge_decay_fit, enumerate_edge_quasi, EdgeMode};
use sloshing::equidist::{exponential_sum, fractional_parts, ks_uniform, ExpSumSpec};
use sloshing::exact::pi4_corner_branches;
use sloshing::surface::{
    build_beach_solution, enumerate_surface_quasi, gamma_closed_form, quantization_value, theta_phase,
};
use sloshing::{validate_config, Corner};

fn five_point(u: &impl Fn(f64, f64) -> f64, x: f64, y: f64, h: f64) -> f64 {
    (u(x + h, y) + u(x - h, y) + u(x, y + h) + u(x, y - h) - 4.0 * u(x, y)) / (h * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kappa_nu_symmetric(q in 1i64..=30, r in 1i64..=30) {
        prop_assume!(!(q == 1 && r == 1));
        let a = validate_config(2.0, 3.0, q, r).unwrap();
        let b = validate_config(2.0, 3.0, r, q).unwrap();
        prop_assert_eq!(a.kappa(), b.kappa());
        prop_assert_eq!(a.nu(), b.nu());
    }

    #[test]
    fn lambda_spacing(depth in 0.1f64..10.0, n in 0usize..10_000) {
        let cfg = validate_config(1.0, depth, 2, 3).unwrap();
        let step = cfg.lambda(n + 1) - cfg.lambda(n);
        prop_assert!((step - PI / depth).abs() <= 4.0 * f64::EPSILON * cfg.lambda(n + 1));
    }

    #[test]
    fn edge_wave_boundary_conditions(q in 1u32..=12, m_frac in 0.0f64..1.0, lambda in 0.3f64..4.0, t in 0.05f64..3.0) {
        let m = ((f64::from((q - 1) / 2) + 1.0) * m_frac) as u32;
        prop_assume!(2 * m + 1 <= q);
        let mode = EdgeMode::new(Corner::Alpha, q, 1, m, lambda).unwrap();
        let u = |x: f64, y: f64| mode.value_unchecked(x, y);
        let a = mode.angle();
        let h = 1e-5;
        // Steklov on the surface, Neumann on the wall at angle -a
        let (x0, y0) = (t, 0.0);
        // the terms can cancel, so tolerances scale with their total size
        let size = 1.0 + mode.coeffs.iter().map(|c| 2.0 * c.abs()).sum::<f64>();
        let dy = (u(x0, y0 + h) - u(x0, y0 - h)) / (2.0 * h);
        prop_assert!((dy - mode.sigma * u(x0, y0)).abs() <= 1e-8 * lambda * size, "steklov");
        let (xw, yw) = (t * a.cos(), -t * a.sin());
        let (nx, ny) = (a.sin(), a.cos());
        let dn = (u(xw + h * nx, yw + h * ny) - u(xw - h * nx, yw - h * ny)) / (2.0 * h);
        let grad = ((u(xw + h, yw) - u(xw - h, yw)) / (2.0 * h)).hypot((u(xw, yw + h) - u(xw, yw - h)) / (2.0 * h));
        prop_assert!(dn.abs() <= 1e-6 * grad.max(lambda * size), "neumann {dn} {grad}");
    }

    #[test]
    fn edge_helmholtz_residual_second_order(q in 1u32..=9, lambda in 0.5f64..3.0, x in 0.5f64..2.0, depth in 0.1f64..1.0) {
        let mode = EdgeMode::new(Corner::Beta, q, 2, 0, lambda).unwrap();
        let u = |x: f64, y: f64| mode.value_unchecked(x, y);
        let res = |h: f64| (five_point(&u, x, -depth, h) - lambda * lambda * u(x, -depth)).abs();
        let (r1, r2) = (res(2e-2), res(1e-2));
        prop_assert!(r1 < 1e-2 * (1.0 + lambda.powi(4)));
        prop_assert!(r2 < 0.3 * r1 || r2 < 1e-8, "{r1} {r2}");
    }

    #[test]
    fn beach_helmholtz_residual_second_order(q in 1u32..=8, mu in 0.0f64..0.95, x in 0.5f64..3.0, depth in 0.1f64..1.0) {
        let sol = build_beach_solution(q, mu).unwrap();
        let a = PI / (2.0 * f64::from(q));
        let y = -depth * x * a.tan();
        let size: f64 = sol.terms.iter().map(|t| t.amp.norm()).sum();
        for part in [0usize, 1] {
            let u = |x: f64, y: f64| {
                let v = sol.value_unchecked(x, y).total;
                if part == 0 { v.re } else { v.im }
            };
            let res = |h: f64| (five_point(&u, x, y, h) - mu * mu * u(x, y)).abs();
            let (r1, r2) = (res(2e-2), res(1e-2));
            prop_assert!(r1 < 1e-3 * size, "{r1}");
            prop_assert!(r2 < 0.3 * r1 || r2 < 1e-8 * size, "{r1} {r2}");
        }
    }

    #[test]
    fn theta_increasing(q in 2u32..=12, t in 0.0f64..0.99, dt in 1e-4f64..0.01) {
        prop_assert!(theta_phase(q, t + dt).unwrap() > theta_phase(q, t).unwrap());
    }

    #[test]
    fn quantization_increasing_above_kappa(q in 1i64..=6, r in 1i64..=6, n in 0usize..6) {
        prop_assume!(!(q == 1 && r == 1));
        let cfg = validate_config(PI, 2.0, q, r).unwrap();
        let lambda = cfg.lambda(n);
        let mut prev: Option<f64> = None;
        for k in 1..=400 {
            let sigma = lambda + 0.05 * k as f64;
            let f = quantization_value(&cfg, n, sigma).unwrap();
            if let Some(p) = prev {
                // f_n starts at kappa and may dip below it before rising
                if p > cfg.kappa() {
                    prop_assert!(f > p, "sigma {sigma}: {p} -> {f}");
                }
            }
            prev = Some(f);
        }
    }

    #[test]
    fn edge_enumeration_prefix(q in 1i64..=8, r in 1i64..=8, lo in 1.0f64..8.0, extra in 0.5f64..8.0) {
        prop_assume!(!(q == 1 && r == 1));
        let cfg = validate_config(PI, PI, q, r).unwrap();
        let short = enumerate_edge_quasi(&cfg, lo);
        let long = enumerate_edge_quasi(&cfg, lo + extra);
        prop_assert!(long.windows(2).all(|w| w[0].sigma() <= w[1].sigma()));
        prop_assert_eq!(&long[..short.len()], &short[..]);
        prop_assert!(long[short.len()..].iter().all(|e| e.sigma() > lo));
    }

    #[test]
    fn lattice_rows_closed_form(sigma in 0.5f64..200.0, length in 0.5f64..5.0, depth in 0.5f64..5.0) {
        let cfg = validate_config(length, depth, 2, 3).unwrap();
        let mut oracle = 0u64;
        let mut n = 0u64;
        loop {
            let lam = n as f64 * PI / depth;
            if lam >= sigma {
                break;
            }
            let x = length / PI * (sigma * sigma - lam * lam).sqrt();
            oracle += (x.ceil() as u64).saturating_sub(1);
            n += 1;
        }
        prop_assert_eq!(lattice_count(&EllipseSpec::new(&cfg, sigma)), oracle);
    }

    #[test]
    fn exponential_sum_conjugate(sigma in 10.0f64..5000.0, k in 2u32..8, r_frac in 0.0f64..1.0, h in 1i64..5) {
        let r = ((k - 1) as f64 * r_frac) as u32;
        prop_assume!(r + 2 <= k);
        let plus = exponential_sum(&ExpSumSpec::new(sigma, k, r, h).unwrap());
        let minus = exponential_sum(&ExpSumSpec::new(sigma, k, r, -h).unwrap());
        prop_assert!((plus - minus.conj()).norm() < 1e-12 * (1.0 + plus.norm()));
    }
}

#[test]
fn gamma_on_grid() {
    for q in 1..=12u32 {
        for k in 0..100 {
            let mu = k as f64 / 100.0;
            let sol = build_beach_solution(q, mu).unwrap();
            assert!((sol.gamma.norm() - 1.0).abs() < 1e-10);
            let d = (sol.gamma.arg() - gamma_closed_form(q, mu).unwrap().arg()).rem_euclid(2.0 * PI);
            assert!(d.min(2.0 * PI - d) < 1e-10, "q = {q}, mu = {mu}");
        }
    }
}

#[test]
fn edge_decay_for_lower_modes() {
    for q in [3u32, 5, 7, 9] {
        for m in 0..(q - 1) / 2 {
            let mode = EdgeMode::new(Corner::Alpha, q, 1, m, 1.5).unwrap();
            let fit = edge_decay_fit(&mode).unwrap();
            assert!(fit.slope < 0.0, "q = {q}, m = {m}");
        }
    }
}

#[test]
fn profile_shift_shrinks() {
    for (q, r) in [(2, 3), (3, 3), (2, 5)] {
        let cfg = validate_config(PI, PI, q, r).unwrap();
        let s: Vec<f64> = [50.0, 100.0, 200.0]
            .iter()
            .map(|&sigma| profile_shift_in_band(&cfg, sigma).unwrap())
            .collect();
        assert!(s[1] < s[0] && s[2] < s[1], "({q},{r}): {s:?}");
    }
}

#[test]
fn deficit_relative_error() {
    // the lattice error is a few points either way, so the relative bound
    // is checked where the strip integral is of order one
    for (q, r) in [(5, 5), (3, 9)] {
        let cfg = validate_config(PI, PI, q, r).unwrap();
        let integral = profile_integral(&cfg);
        for (sigma, tol) in [(500.0, 0.05), (2000.0, 0.02)] {
            let ratio = deficit_exact(&cfg, sigma) as f64 / sigma;
            assert!((ratio - integral).abs() < tol * integral, "({q},{r}) {sigma}: {ratio} vs {integral}");
        }
    }
}

#[test]
fn signed_strip_count_for_half_kappa() {
    // with kappa = 1/2 the profile is negative near t = 1 and the points it
    // adds back outside the ellipse carry that part of the integral
    let cfg = validate_config(PI, PI, 2, 3).unwrap();
    let integral = profile_integral(&cfg);
    let sigma = 2000.0;
    let signed = (deficit_exact(&cfg, sigma) as f64 - surplus_exact(&cfg, sigma) as f64) / sigma;
    let unsigned = deficit_exact(&cfg, sigma) as f64 / sigma;
    assert!((signed - integral).abs() < 0.05 * integral, "{signed} vs {integral}");
    assert!((unsigned - integral).abs() > (signed - integral).abs());
}

#[test]
fn surface_count_tracks_strip_identity() {
    for (q, r) in [(2, 2), (2, 3), (3, 9)] {
        let cfg = validate_config(PI, PI, q, r).unwrap();
        let modes = enumerate_surface_quasi(&cfg, 500.0);
        let non_positive = modes.iter().filter(|m| m.m <= 0).count() as i64;
        for k in 0..50 {
            let sigma = 10.0 + 9.8 * k as f64;
            let exact = modes.partition_point(|m| m.sigma < sigma) as i64;
            let strip = lattice_count(&EllipseSpec::new(&cfg, sigma)) as i64 - deficit_exact(&cfg, sigma) as i64
                + surplus_exact(&cfg, sigma) as i64;
            assert!((0..=non_positive).contains(&(exact - strip)), "({q},{r}) at {sigma}");
            if cfg.kappa() == 0.0 {
                assert_eq!(surplus_exact(&cfg, sigma), 0);
            }
        }
    }
}

#[test]
fn counting_series_nondecreasing() {
    let grid: Vec<f64> = (1..=200).map(|k| 0.25 * k as f64).collect();
    for (q, r) in [(2, 3), (5, 5), (1, 4)] {
        let cfg = validate_config(PI, 2.0, q, r).unwrap();
        let rep = total_counts_and_s(&cfg, &grid).unwrap();
        for series in [&rep.exact_ne, &rep.exact_ns, &rep.exact_total] {
            assert!(series.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}

#[test]
fn pi4_branches_straddle_diagonal() {
    let roots = pi4_corner_branches(PI, PI, 12.0).unwrap();
    for r in roots.iter().filter(|r| r.n >= 1 && r.n < 10) {
        let mid = r.n as f64 / 2f64.sqrt();
        match r.branch {
            sloshing::exact::Pi4Branch::CoshCosh => assert!(r.sigma < mid),
            sloshing::exact::Pi4Branch::SinhSinh => assert!(r.sigma > mid),
            _ => {}
        }
    }
}

#[test]
fn ks_and_sums_move_together() {
    let stats = |sigma: f64| {
        let sum = (1..=3)
            .map(|h| exponential_sum(&ExpSumSpec::new(sigma, 4, 0, h).unwrap()).norm())
            .fold(0.0, f64::max);
        (sum, ks_uniform(&fractional_parts(sigma, 4, 0).unwrap().values))
    };
    let runs: Vec<(f64, f64)> = [1e2, 1e3, 1e4].iter().map(|&s| stats(s)).collect();
    for w in runs.windows(2) {
        assert_eq!(w[1].0 < w[0].0, w[1].1 < w[0].1, "{runs:?}");
    }
}
