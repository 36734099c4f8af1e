//! Exact and asymptotic eigenvalue counting: the ellipse lattice count,
//! the boundary-strip deficit, the phase integral and the second-term
//! quantity `S(sigma)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::PrismConfig;
use crate::edge::{edge_count_exact, edge_counting_asymptotic};
use crate::error::{Error, Result};
use crate::numerics::integrate;
use crate::surface::{enumerate_surface_quasi, quantization_value, theta_of_s, theta_phase};

/// The ellipse `(x pi / sigma L)^2 + (y pi / sigma M)^2 < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseSpec {
    pub sigma: f64,
    pub length: f64,
    pub depth: f64,
}

impl EllipseSpec {
    pub fn new(cfg: &PrismConfig, sigma: f64) -> Self {
        Self {
            sigma,
            length: cfg.length(),
            depth: cfg.depth(),
        }
    }

    /// Number of rows `n >= 0` that meet the ellipse.
    pub fn rows(&self) -> usize {
        if self.sigma <= 0.0 {
            return 0;
        }
        let mut n = (self.sigma * self.depth / PI).ceil() as usize;
        while n > 0 && self.lambda(n - 1) >= self.sigma {
            n -= 1;
        }
        while self.lambda(n) < self.sigma {
            n += 1;
        }
        n
    }

    fn lambda(&self, n: usize) -> f64 {
        n as f64 * PI / self.depth
    }

    /// Half-width `x_n = (L/pi) sqrt(sigma^2 - lambda_n^2)` of row `n`.
    pub fn half_width(&self, n: usize) -> f64 {
        let l = self.lambda(n);
        self.length / PI * ((self.sigma - l) * (self.sigma + l)).max(0.0).sqrt()
    }

    /// Membership test written as in the definition of the ellipse.
    pub fn contains(&self, m: f64, n: f64) -> bool {
        let u = m * PI / (self.sigma * self.length);
        let v = n * PI / (self.sigma * self.depth);
        u * u + v * v < 1.0
    }
}

/// Points `(m, n)` with `m >= 1`, `n >= 0` strictly inside the ellipse.
pub fn lattice_count(spec: &EllipseSpec) -> u64 {
    if spec.sigma <= 0.0 {
        return 0;
    }
    let rows = spec.rows();
    (0..rows)
        .into_par_iter()
        .map(|n| {
            let mut count = 0u64;
            let mut m = 1u64;
            while spec.contains(m as f64, n as f64) {
                count += 1;
                m += 1;
            }
            count
        })
        .sum()
}

/// `f(t) = -kappa - (theta_alpha(t) + theta_beta(t)) / pi`.
pub fn perturbation_profile(cfg: &PrismConfig, t: f64) -> Result<f64> {
    Ok(-cfg.kappa() - (theta_phase(cfg.q(), t)? + theta_phase(cfg.r(), t)?) / PI)
}

fn profile_unchecked(cfg: &PrismConfig, t: f64) -> f64 {
    let s = (1.0 - t * t).max(0.0).sqrt();
    -cfg.kappa() - (theta_of_s(cfg.q(), s) + theta_of_s(cfg.r(), s)) / PI
}

/// `int_0^1 (theta_alpha + theta_beta) dt`, computed with `t = sin u`.
pub fn theta_integral(cfg: &PrismConfig) -> f64 {
    integrate(
        |u: f64| (theta_of_s(cfg.q(), u.cos()) + theta_of_s(cfg.r(), u.cos())) * u.cos(),
        0.0,
        PI / 2.0,
        1e-13,
    )
}

/// `int_0^1 f(t) dt`.
pub fn profile_integral(cfg: &PrismConfig) -> f64 {
    -cfg.kappa() - theta_integral(cfg) / PI
}

/// Upper bound `f(0) = -kappa + (q + r - 2)/4` of the profile.
pub fn profile_bound(cfg: &PrismConfig) -> f64 {
    -cfg.kappa() + f64::from(cfg.q() + cfg.r() - 2) / 4.0
}

/// Lattice points `(m >= 1, n)` inside the ellipse whose quasi-eigenvalue
/// `sigma_{m,n}` is at least `sigma`.
///
/// For `m >= 1` the root of `f_n = m` is unique and `f_n` increases through
/// it, so `sigma_{m,n} >= sigma` exactly when `f_n(sigma) <= m`.
pub fn deficit_exact(cfg: &PrismConfig, sigma: f64) -> u64 {
    strip_counts(cfg, sigma).0
}

/// Lattice points `(m >= 1, n)` outside the ellipse whose quasi-eigenvalue
/// lies below `sigma`. Only possible where `f < 0`, i.e. when `kappa = 1/2`.
pub fn surplus_exact(cfg: &PrismConfig, sigma: f64) -> u64 {
    strip_counts(cfg, sigma).1
}

fn strip_counts(cfg: &PrismConfig, sigma: f64) -> (u64, u64) {
    let spec = EllipseSpec::new(cfg, sigma);
    let band = profile_bound(cfg).max(0.0);
    (0..spec.rows())
        .into_par_iter()
        .map(|n| {
            if cfg.lambda(n) >= sigma {
                return (0, 0);
            }
            let x_n = spec.half_width(n);
            let f_n = quantization_value(cfg, n, sigma).unwrap_or(cfg.kappa());
            let mut deficit = 0;
            let mut surplus = 0;
            let first = ((x_n - band).floor() - 1.0).max(1.0) as u64;
            let mut m = first;
            loop {
                let mf = m as f64;
                let inside = spec.contains(mf, n as f64);
                if inside {
                    if f_n <= mf {
                        deficit += 1;
                    }
                } else if f_n > mf {
                    surplus += 1;
                } else {
                    break;
                }
                m += 1;
            }
            (deficit, surplus)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

/// Leading behaviour `(M sigma / pi) int_0^1 f` of the deficit.
pub fn deficit_asymptotic(cfg: &PrismConfig, sigma: f64) -> f64 {
    cfg.depth() * sigma / PI * profile_integral(cfg)
}

/// `L M sigma^2 / 4 pi + (L - M) sigma / 2 pi + kappa M sigma / pi
/// + (M sigma / pi^2) int_0^1 (theta_alpha + theta_beta)`.
pub fn surface_counting_asymptotic(cfg: &PrismConfig, sigma: f64) -> f64 {
    let (l, m) = (cfg.length(), cfg.depth());
    l * m * sigma * sigma / (4.0 * PI)
        + (l - m) * sigma / (2.0 * PI)
        + cfg.kappa() * m * sigma / PI
        + m * sigma / (PI * PI) * theta_integral(cfg)
}

/// Conjectured limit of `S(sigma)`: the linear coefficients of the edge
/// and surface asymptotics.
pub fn s_limit(cfg: &PrismConfig) -> f64 {
    edge_counting_asymptotic(cfg, 1.0) + surface_counting_asymptotic(cfg, 1.0)
        - cfg.length() * cfg.depth() / (4.0 * PI)
}

/// Exact and asymptotic counting series over a grid of `sigma` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub sigma_grid: Vec<f64>,
    pub exact_ne: Vec<u64>,
    pub exact_ns: Vec<u64>,
    /// All eigenvalues below `sigma`, the constant mode included.
    pub exact_total: Vec<u64>,
    pub asym_ne: Vec<f64>,
    pub asym_ns: Vec<f64>,
    pub deficit_exact: Vec<u64>,
    pub deficit_asym: Vec<f64>,
    pub s_values: Vec<f64>,
    pub s_limit: f64,
}

/// Merges exact edge and surface counts and evaluates `S(sigma)`.
pub fn total_counts_and_s(cfg: &PrismConfig, sigma_grid: &[f64]) -> Result<CountReport> {
    if sigma_grid.windows(2).any(|w| !(w[0] < w[1])) || sigma_grid.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::InvalidArgument(
            "sigma grid must be positive and strictly ascending".into(),
        ));
    }
    let top = sigma_grid.last().copied().unwrap_or(0.0);
    let surface: Vec<f64> = enumerate_surface_quasi(cfg, top)
        .into_iter()
        .map(|m| m.sigma)
        .collect();
    let area = cfg.length() * cfg.depth() / (4.0 * PI);
    let mut report = CountReport {
        sigma_grid: sigma_grid.to_vec(),
        exact_ne: Vec::new(),
        exact_ns: Vec::new(),
        exact_total: Vec::new(),
        asym_ne: Vec::new(),
        asym_ns: Vec::new(),
        deficit_exact: Vec::new(),
        deficit_asym: Vec::new(),
        s_values: Vec::new(),
        s_limit: s_limit(cfg),
    };
    for &sigma in sigma_grid {
        let ne = edge_count_exact(cfg, sigma);
        let ns = surface.partition_point(|&s| s < sigma) as u64;
        let total = 1 + ne + ns;
        report.exact_ne.push(ne);
        report.exact_ns.push(ns);
        report.exact_total.push(total);
        report.asym_ne.push(edge_counting_asymptotic(cfg, sigma));
        report.asym_ns.push(surface_counting_asymptotic(cfg, sigma));
        report.deficit_exact.push(deficit_exact(cfg, sigma));
        report.deficit_asym.push(deficit_asymptotic(cfg, sigma));
        report
            .s_values
            .push((total as f64 - area * sigma * sigma) / sigma);
    }
    Ok(report)
}

/// `max |f(t_n(sigma_{m,n})) - f(t_n(sigma))|` over the band
/// `x_n - f(0) - 1 <= m < x_n`, where `t_n(s) = lambda_n / s`.
pub fn profile_shift_in_band(cfg: &PrismConfig, sigma: f64) -> Result<f64> {
    let spec = EllipseSpec::new(cfg, sigma);
    let band = profile_bound(cfg).max(0.0);
    let mut worst: f64 = 0.0;
    for n in 0..spec.rows() {
        let x_n = spec.half_width(n);
        let lo = ((x_n - band).floor() - 1.0).max(1.0) as i64;
        let mut m = lo;
        while (m as f64) < x_n {
            let mode = crate::surface::solve_quasi(cfg, m, n)?;
            let shift = profile_unchecked(cfg, cfg.lambda(n) / mode.sigma)
                - profile_unchecked(cfg, cfg.lambda(n) / sigma);
            worst = worst.max(shift.abs());
            m += 1;
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::validate_config;

    fn brute_count(sigma: f64, l: f64, m_depth: f64) -> u64 {
        let mut c = 0;
        for m in 1..1000 {
            for n in 0..1000 {
                let u = (m as f64 * PI / (sigma * l)).powi(2) + (n as f64 * PI / (sigma * m_depth)).powi(2);
                if u < 1.0 {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn lattice_examples() {
        let spec = EllipseSpec { sigma: 10.0, length: PI, depth: PI };
        assert_eq!(lattice_count(&spec), 76);
        assert_eq!(brute_count(10.0, PI, PI), 76);
        let spec = EllipseSpec { sigma: 0.5, length: PI, depth: PI };
        assert_eq!(lattice_count(&spec), 0);
        let spec = EllipseSpec { sigma: 13.7, length: 2.0, depth: 5.0 };
        assert_eq!(lattice_count(&spec), brute_count(13.7, 2.0, 5.0));
    }

    #[test]
    fn profile_examples() {
        let cfg = validate_config(PI, PI, 2, 2).unwrap();
        assert!((perturbation_profile(&cfg, 0.0).unwrap() - 0.5).abs() < 1e-14);
        let cfg = validate_config(PI, PI, 2, 3).unwrap();
        assert!((perturbation_profile(&cfg, 1.0).unwrap() + 0.5).abs() < 1e-14);
        let cfg = validate_config(PI, PI, 5, 5).unwrap();
        assert!((perturbation_profile(&cfg, 0.0).unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(
            perturbation_profile(&cfg, -0.1),
            Err(Error::DomainError { .. })
        ));
    }

    #[test]
    fn theta_integral_right_isosceles() {
        let cfg = validate_config(PI, PI, 2, 2).unwrap();
        assert!((theta_integral(&cfg) - PI * (1.0 - 2f64.sqrt())).abs() < 1e-10);
        assert!((profile_integral(&cfg) - (2f64.sqrt() - 1.0)).abs() < 1e-10);
    }

    #[test]
    fn theta_integral_single_corner() {
        let cfg = validate_config(PI, PI, 1, 2).unwrap();
        let direct = integrate(
            |t: f64| theta_phase(2, t.min(1.0)).unwrap(),
            0.0,
            1.0,
            1e-12,
        );
        assert!((theta_integral(&cfg) - direct).abs() < 1e-8);
    }

    #[test]
    fn asymptotic_examples() {
        let cfg = validate_config(PI, PI, 2, 2).unwrap();
        let v = surface_counting_asymptotic(&cfg, 100.0);
        let want = 2500.0 * PI + 100.0 * (1.0 - 2f64.sqrt());
        assert!((v - want).abs() < 1e-7);
        assert!((s_limit(&cfg) - (1.0 + 2f64.sqrt())).abs() < 1e-10);
        let cfg = validate_config(PI, PI, 2, 3).unwrap();
        let with = surface_counting_asymptotic(&cfg, 50.0);
        let without = with - 25.0;
        let area = PI * PI * 2500.0 / (4.0 * PI);
        assert!((without - area - 50.0 / PI * theta_integral(&cfg)).abs() < 1e-8);
    }

    #[test]
    fn strip_identity_is_exact() {
        for (q, r) in [(2, 2), (2, 3), (3, 5)] {
            let cfg = validate_config(PI, PI, q, r).unwrap();
            let sigma = 23.3;
            let modes = enumerate_surface_quasi(&cfg, sigma);
            let positive = modes.iter().filter(|m| m.m >= 1).count() as u64;
            let lattice = lattice_count(&EllipseSpec::new(&cfg, sigma));
            assert_eq!(
                positive,
                lattice - deficit_exact(&cfg, sigma) + surplus_exact(&cfg, sigma),
                "q = {q}, r = {r}"
            );
        }
    }

    #[test]
    fn surplus_needs_half_kappa() {
        let cfg = validate_config(PI, PI, 2, 2).unwrap();
        assert_eq!(surplus_exact(&cfg, 80.0), 0);
    }

    #[test]
    fn report_is_monotone() {
        let cfg = validate_config(PI, PI, 2, 3).unwrap();
        let grid: Vec<f64> = (1..=20).map(|k| k as f64).collect();
        let rep = total_counts_and_s(&cfg, &grid).unwrap();
        for w in rep.exact_total.windows(2) {
            assert!(w[0] <= w[1]);
        }
        assert!(total_counts_and_s(&cfg, &[2.0, 1.0]).is_err());
    }
}
