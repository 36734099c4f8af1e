//! Surface-wave quasimodes: the sloping-beach solution built by alternating
//! wall and surface reflections, the phase shifts it induces, and the
//! quantization condition that glues the two corners together.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::PrismConfig;
use crate::error::{Error, Result};
use crate::numerics::{bisect, fit_exponential_decay, LineFit};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_unit(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::DomainError { value: t, lo: 0.0, hi: 1.0 });
    }
    Ok(())
}

fn cot(x: f64) -> f64 {
    x.cos() / x.sin()
}

/// `theta(q, t) = -sum_{j<q} arctan(sqrt(1 - t^2) cot(j pi / 2q))`.
pub fn theta_phase(q: u32, t: f64) -> Result<f64> {
    check_unit(t)?;
    Ok(theta_of_s(q, (1.0 - t * t).max(0.0).sqrt()))
}

/// Same phase written in terms of `s = sqrt(1 - t^2)`.
pub fn theta_of_s(q: u32, s: f64) -> f64 {
    let qf = f64::from(q);
    -(1..q)
        .map(|j| (s * cot(f64::from(j) * PI / (2.0 * qf))).atan())
        .sum::<f64>()
}

/// `d theta / d t` for `0 <= t < 1`.
fn theta_dt(q: u32, t: f64) -> f64 {
    let s = (1.0 - t * t).sqrt();
    let qf = f64::from(q);
    (1..q)
        .map(|j| {
            let c = cot(f64::from(j) * PI / (2.0 * qf));
            c * t / (s * (1.0 + s * s * c * c))
        })
        .sum()
}

/// `g_{a,b}(x, y) = exp(x cos a + y sin a) exp(i s (x cos b + y sin b))`
/// with amplitude `amp`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeachTerm {
    pub a: f64,
    pub b: f64,
    pub amp: Complex64,
}

impl BeachTerm {
    fn exponent(&self, s: f64, x: f64, y: f64) -> Complex64 {
        Complex64::new(
            x * self.a.cos() + y * self.a.sin(),
            s * (x * self.b.cos() + y * self.b.sin()),
        )
    }

    pub fn value(&self, s: f64, x: f64, y: f64) -> Complex64 {
        self.amp * self.exponent(s, x, y).exp()
    }

    /// `(d/dx, d/dy)`.
    pub fn gradient(&self, s: f64, x: f64, y: f64) -> (Complex64, Complex64) {
        let v = self.value(s, x, y);
        (
            Complex64::new(self.a.cos(), s * self.b.cos()) * v,
            Complex64::new(self.a.sin(), s * self.b.sin()) * v,
        )
    }

    /// Reflection in the wall line; keeps the amplitude.
    fn wall_reflect(&self, xi: f64) -> Self {
        Self {
            a: -self.a + xi,
            b: -self.b + xi,
            amp: self.amp,
        }
    }

    /// Reflection in the surface with the coefficient that cancels the
    /// Steklov defect of the pair.
    fn surface_reflect(&self, s: f64) -> Self {
        let k = Complex64::new(self.a.sin(), s * self.b.sin());
        Self {
            a: -self.a,
            b: -self.b,
            amp: self.amp * (k - 1.0) / (k + 1.0),
        }
    }
}

/// Sloping-beach solution `v = sum f_m` on the sector of angle `pi/(2q)`
/// with unit Steklov parameter and Helmholtz parameter `mu`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeachSolution {
    pub mu: f64,
    pub q: u32,
    pub s: f64,
    pub terms: Vec<BeachTerm>,
    pub gamma: Complex64,
}

/// Value split into the two surface-wave terms and the decaying remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeachValue {
    pub total: Complex64,
    pub principal: Complex64,
    pub decaying: Complex64,
}

pub fn build_beach_solution(q: u32, mu: f64) -> Result<BeachSolution> {
    check_unit(mu)?;
    if q == 0 {
        return Err(Error::InvalidArgument("angle integer must be positive".into()));
    }
    Ok(beach_from_s(q, mu, (1.0 - mu * mu).max(0.0).sqrt()))
}

fn beach_from_s(q: u32, mu: f64, s: f64) -> BeachSolution {
    let xi = -PI / f64::from(q);
    let mut terms = Vec::with_capacity(2 * q as usize);
    terms.push(BeachTerm {
        a: PI / 2.0,
        b: PI,
        amp: Complex64::new(1.0, 0.0),
    });
    for k in 1..2 * q as usize {
        let prev = terms[k - 1];
        terms.push(if k % 2 == 1 {
            prev.wall_reflect(xi)
        } else {
            prev.surface_reflect(s)
        });
    }
    let gamma = terms[terms.len() - 1].amp;
    BeachSolution {
        mu,
        q,
        s,
        terms,
        gamma,
    }
}

/// `(-1)^{q-1} exp(2 i theta(q, mu))`.
pub fn gamma_closed_form(q: u32, mu: f64) -> Result<Complex64> {
    let sign = if q % 2 == 1 { 1.0 } else { -1.0 };
    Ok(sign * (2.0 * I * theta_phase(q, mu)?).exp())
}

fn in_sector(q: u32, x: f64, y: f64) -> bool {
    let a = PI / (2.0 * f64::from(q));
    let tol = 1e-12 * (1.0 + x.abs() + y.abs());
    y <= tol && x * a.sin() + y * a.cos() >= -tol
}

impl BeachSolution {
    fn principal_range(&self) -> [usize; 2] {
        [0, self.terms.len() - 1]
    }

    pub fn value_unchecked(&self, x: f64, y: f64) -> BeachValue {
        let [first, last] = self.principal_range();
        let principal = self.terms[first].value(self.s, x, y) + self.terms[last].value(self.s, x, y);
        let decaying = self.terms[first + 1..last]
            .iter()
            .map(|t| t.value(self.s, x, y))
            .sum();
        BeachValue {
            total: principal + decaying,
            principal,
            decaying,
        }
    }

    /// Gradient of the decaying part.
    pub fn decaying_gradient(&self, x: f64, y: f64) -> (Complex64, Complex64) {
        let [first, last] = self.principal_range();
        self.terms[first + 1..last]
            .iter()
            .map(|t| t.gradient(self.s, x, y))
            .fold((Complex64::default(), Complex64::default()), |acc, g| {
                (acc.0 + g.0, acc.1 + g.1)
            })
    }

    /// Gradient of the full solution.
    pub fn gradient(&self, x: f64, y: f64) -> (Complex64, Complex64) {
        self.terms
            .iter()
            .map(|t| t.gradient(self.s, x, y))
            .fold((Complex64::default(), Complex64::default()), |acc, g| {
                (acc.0 + g.0, acc.1 + g.1)
            })
    }

    /// `(d_y - 1) v` on the surface.
    pub fn steklov_defect(&self, x: f64) -> Complex64 {
        self.gradient(x, 0.0).1 - self.value_unchecked(x, 0.0).total
    }

    /// Least-squares decay fit of `|v^d|` on the surface for `x in [2, 12]`.
    pub fn decay_fit(&self) -> Option<LineFit> {
        let xs: Vec<f64> = (0..20).map(|k| 2.0 + 10.0 * k as f64 / 19.0).collect();
        let mags: Vec<f64> = xs
            .iter()
            .map(|&x| self.value_unchecked(x, 0.0).decaying.norm())
            .collect();
        fit_exponential_decay(&xs, &mags)
    }
}

pub fn beach_value(sol: &BeachSolution, x: f64, y: f64) -> Result<BeachValue> {
    if !in_sector(sol.q, x, y) {
        return Err(Error::OutsideSector { x, y });
    }
    Ok(sol.value_unchecked(x, y))
}

/// `f_n(sigma)` extended continuously to `sigma = lambda_n`.
fn quantization_unchecked(cfg: &PrismConfig, lambda: f64, sigma: f64) -> f64 {
    let root = ((sigma - lambda) * (sigma + lambda)).max(0.0).sqrt();
    let s = if sigma > 0.0 { root / sigma } else { 1.0 };
    (cfg.length() * root + theta_of_s(cfg.q(), s) + theta_of_s(cfg.r(), s)) / PI + cfg.kappa()
}

fn quantization_derivative(cfg: &PrismConfig, lambda: f64, sigma: f64) -> f64 {
    let root = ((sigma - lambda) * (sigma + lambda)).sqrt();
    let t = lambda / sigma;
    let dt = -lambda / (sigma * sigma);
    (cfg.length() * sigma / root + (theta_dt(cfg.q(), t) + theta_dt(cfg.r(), t)) * dt) / PI
}

/// `f_n(sigma) = (L sqrt(sigma^2 - lambda_n^2) + theta_alpha + theta_beta)/pi + kappa`.
pub fn quantization_value(cfg: &PrismConfig, n: usize, sigma: f64) -> Result<f64> {
    let lambda = cfg.lambda(n);
    if !(sigma > lambda) {
        return Err(Error::BelowCutoff { sigma, cutoff: lambda });
    }
    Ok(quantization_unchecked(cfg, lambda, sigma))
}

/// A solution of `f_n(sigma) = m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceMode {
    pub m: i64,
    pub n: usize,
    pub sigma: f64,
    pub theta_alpha: f64,
    pub theta_beta: f64,
    /// Matching constant between the two corner solutions.
    pub q_match: Complex64,
    pub residual: f64,
}

impl SurfaceMode {
    fn from_root(cfg: &PrismConfig, m: i64, n: usize, sigma: f64) -> Self {
        let lambda = cfg.lambda(n);
        let root = ((sigma - lambda) * (sigma + lambda)).max(0.0).sqrt();
        let s = root / sigma;
        let theta_alpha = theta_of_s(cfg.q(), s);
        let gamma_alpha = beach_from_s(cfg.q(), lambda / sigma, s).gamma;
        Self {
            m,
            n,
            sigma,
            theta_alpha,
            theta_beta: theta_of_s(cfg.r(), s),
            q_match: gamma_alpha * (I * root * cfg.length()).exp(),
            residual: quantization_unchecked(cfg, lambda, sigma) - m as f64,
        }
    }
}

/// Polishes a bisection root with a few guarded Newton steps.
fn polish(cfg: &PrismConfig, lambda: f64, target: f64, mut sigma: f64, lo: f64, hi: f64) -> f64 {
    for _ in 0..3 {
        let r = quantization_unchecked(cfg, lambda, sigma) - target;
        let d = quantization_derivative(cfg, lambda, sigma);
        let next = sigma - r / d;
        if !(next.is_finite() && next > lo && next < hi) {
            break;
        }
        if (quantization_unchecked(cfg, lambda, next) - target).abs() > r.abs() {
            break;
        }
        sigma = next;
    }
    sigma
}

/// The unique `sigma > lambda_n` with `f_n(sigma) = m`, for `m >= 1`.
pub fn solve_quasi(cfg: &PrismConfig, m: i64, n: usize) -> Result<SurfaceMode> {
    if m < 1 {
        return Err(Error::InvalidArgument(format!(
            "quantization index m = {m} must be at least 1"
        )));
    }
    let lambda = cfg.lambda(n);
    let target = m as f64;
    let lo = lambda * (1.0 + 1e-9);
    let mut hi = (lambda.max(1.0 / cfg.length())) * 2.0;
    let mut doublings = 0;
    while quantization_unchecked(cfg, lambda, hi) <= target {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::RootNotBracketed(format!("m = {m}, n = {n}")));
        }
    }
    let f = |s: f64| quantization_unchecked(cfg, lambda, s) - target;
    let sigma = bisect(f, lo, hi, 80)?;
    let sigma = polish(cfg, lambda, target, sigma, lo, hi);
    Ok(SurfaceMode::from_root(cfg, m, n, sigma))
}

const SCAN_SAMPLES: usize = 10_000;

/// Roots of `f_n = k` for integers `k <= 0` in `(lambda_n, sigma_max)`.
/// Returns `None` when `f_n` was increasing at every sample.
fn scan_nonpositive_branch(cfg: &PrismConfig, n: usize, sigma_max: f64) -> (Vec<SurfaceMode>, bool) {
    let lambda = cfg.lambda(n);
    let width = sigma_max - lambda;
    // quadratic spacing resolves the square-root onset at lambda_n
    let grid: Vec<f64> = (0..=SCAN_SAMPLES)
        .map(|i| {
            let u = i as f64 / SCAN_SAMPLES as f64;
            lambda + width * u * u
        })
        .collect();
    let values: Vec<f64> = grid
        .iter()
        .map(|&s| quantization_unchecked(cfg, lambda, s))
        .collect();
    let monotone = grid[1..]
        .iter()
        .all(|&s| quantization_derivative(cfg, lambda, s) > 0.0);
    let mut roots = Vec::new();
    for i in 0..SCAN_SAMPLES {
        let (f0, f1) = (values[i], values[i + 1]);
        let lo_k = f0.min(f1).ceil() as i64;
        let hi_k = f0.max(f1).floor() as i64;
        for k in lo_k..=hi_k.min(0) {
            let kf = k as f64;
            if (f0 - kf) * (f1 - kf) >= 0.0 {
                continue;
            }
            let (a, b) = (grid[i], grid[i + 1]);
            let g = |s: f64| quantization_unchecked(cfg, lambda, s) - kf;
            if let Ok(sigma) = bisect(g, a, b, 80) {
                let sigma = polish(cfg, lambda, kf, sigma, a, b);
                if sigma > lambda && sigma < sigma_max {
                    roots.push(SurfaceMode::from_root(cfg, k, n, sigma));
                }
            }
        }
    }
    (roots, monotone)
}

/// All surface quasi-eigenvalues below `sigma_max`, ascending by `sigma`
/// then `n` then `m`. The constant mode `sigma = 0` is not included.
pub fn enumerate_surface_quasi(cfg: &PrismConfig, sigma_max: f64) -> Vec<SurfaceMode> {
    let step = cfg.lambda(1);
    let n_count = if sigma_max > 0.0 {
        (sigma_max / step).ceil() as usize
    } else {
        0
    };
    let ns: Vec<usize> = (0..n_count).filter(|&n| cfg.lambda(n) < sigma_max).collect();

    let mut modes: Vec<SurfaceMode> = ns
        .par_iter()
        .flat_map_iter(|&n| {
            let lambda = cfg.lambda(n);
            let top = quantization_unchecked(cfg, lambda, sigma_max);
            let m_max = top.ceil() as i64 - 1;
            (1..=m_max)
                .filter_map(move |m| solve_quasi(cfg, m, n).ok())
                .filter(move |mode| mode.sigma < sigma_max)
                .collect::<Vec<_>>()
        })
        .collect();

    for &n in &ns {
        let (roots, monotone) = scan_nonpositive_branch(cfg, n, sigma_max);
        modes.extend(roots);
        if monotone && n > 0 {
            break;
        }
    }

    modes.sort_by(|a, b| {
        a.sigma
            .total_cmp(&b.sigma)
            .then(a.n.cmp(&b.n))
            .then(a.m.cmp(&b.m))
    });
    modes
}

/// Glued quasimode `v_alpha(sigma x, sigma y) + Q v_beta^d(sigma (L - x), sigma y)`.
#[derive(Debug, Clone)]
pub struct SurfaceQuasimode {
    pub length: f64,
    pub sigma: f64,
    pub q_match: Complex64,
    pub alpha: BeachSolution,
    pub beta: BeachSolution,
    cfg: PrismConfig,
}

/// Largest sampled defects of a glued quasimode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    /// `max |d_nu g|` over wall samples.
    pub wall: f64,
    /// `max |(d_y - sigma) g|` over surface samples.
    pub steklov: f64,
    /// `max |g|` over surface samples, for scale.
    pub surface_scale: f64,
}

/// Tolerance on `|gamma_alpha gamma_beta exp(2 i s sigma L) - 1|`.
const MATCH_TOL: f64 = 1e-8;

impl SurfaceQuasimode {
    pub fn new(cfg: &PrismConfig, mode: &SurfaceMode) -> Result<Self> {
        let lambda = cfg.lambda(mode.n);
        let sigma = mode.sigma;
        if !(sigma > lambda) {
            return Err(Error::BelowCutoff { sigma, cutoff: lambda });
        }
        let root = ((sigma - lambda) * (sigma + lambda)).sqrt();
        let s = root / sigma;
        let mu = lambda / sigma;
        let alpha = beach_from_s(cfg.q(), mu, s);
        let beta = beach_from_s(cfg.r(), mu, s);
        let phase = (I * root * cfg.length()).exp();
        let residual = (alpha.gamma * beta.gamma * phase * phase - 1.0).norm();
        if !(residual < MATCH_TOL) {
            return Err(Error::QUndefined { residual });
        }
        Ok(Self {
            length: cfg.length(),
            sigma,
            q_match: alpha.gamma * phase,
            alpha,
            beta,
            cfg: *cfg,
        })
    }

    pub fn value_unchecked(&self, x: f64, y: f64) -> Complex64 {
        let s = self.sigma;
        self.alpha.value_unchecked(s * x, s * y).total
            + self.q_match * self.beta.value_unchecked(s * (self.length - x), s * y).decaying
    }

    pub fn value(&self, x: f64, y: f64) -> Result<Complex64> {
        if !self.cfg.contains(x, y, 1e-12) {
            return Err(Error::OutsideTriangle { x, y });
        }
        Ok(self.value_unchecked(x, y))
    }

    pub fn gradient(&self, x: f64, y: f64) -> (Complex64, Complex64) {
        let s = self.sigma;
        let (ax, ay) = self.alpha.gradient(s * x, s * y);
        let (bx, by) = self.beta.decaying_gradient(s * (self.length - x), s * y);
        (
            s * (ax - self.q_match * bx),
            s * (ay + self.q_match * by),
        )
    }

    /// Samples `count` points on each wall and on the surface.
    pub fn defects(&self, count: usize) -> DefectReport {
        let cfg = &self.cfg;
        let (xa, ya) = cfg.apex();
        let (sa, ca) = cfg.alpha().sin_cos();
        let (sb, cb) = cfg.beta().sin_cos();
        let mut report = DefectReport {
            wall: 0.0,
            steklov: 0.0,
            surface_scale: 0.0,
        };
        for k in 1..count + 1 {
            let u = k as f64 / (count + 1) as f64;
            // alpha wall from the origin to the apex
            let (x, y) = (u * xa, u * ya);
            let (gx, gy) = self.gradient(x, y);
            report.wall = report.wall.max((-sa * gx - ca * gy).norm());
            // beta wall from (L, 0) to the apex
            let (x, y) = (self.length + u * (xa - self.length), u * ya);
            let (gx, gy) = self.gradient(x, y);
            report.wall = report.wall.max((sb * gx - cb * gy).norm());
            let x = u * self.length;
            let v = self.value_unchecked(x, 0.0);
            let (_, gy) = self.gradient(x, 0.0);
            report.steklov = report.steklov.max((gy - self.sigma * v).norm());
            report.surface_scale = report.surface_scale.max(v.norm());
        }
        report
    }
}

pub fn quasimode_eval(cfg: &PrismConfig, mode: &SurfaceMode, x: f64, y: f64) -> Result<(Complex64, DefectReport)> {
    let qm = SurfaceQuasimode::new(cfg, mode)?;
    let v = qm.value(x, y)?;
    Ok((v, qm.defects(100)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::validate_config;

    #[test]
    fn theta_examples() {
        for q in 1..=12 {
            assert_eq!(theta_phase(q, 1.0).unwrap(), 0.0);
            let want = -f64::from(q - 1) * PI / 4.0;
            assert!((theta_phase(q, 0.0).unwrap() - want).abs() < 1e-12);
        }
        assert!((theta_phase(5, 0.0).unwrap() + PI).abs() < 1e-12);
        assert!(matches!(theta_phase(2, 1.5), Err(Error::DomainError { .. })));
    }

    #[test]
    fn theta_matches_spec_form() {
        // arctan(sqrt(1-t^2) sin(j pi/q) / (1 - cos(j pi/q)))
        for q in 2..=9u32 {
            for &t in &[0.0, 0.3, 0.9] {
                let s: f64 = (1.0f64 - t * t).sqrt();
                let raw: f64 = -(1..q)
                    .map(|j| {
                        let a = f64::from(j) * PI / f64::from(q);
                        (s * a.sin() / (1.0 - a.cos())).atan()
                    })
                    .sum::<f64>();
                assert!((theta_phase(q, t).unwrap() - raw).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn beach_examples() {
        let sol = build_beach_solution(1, 0.5).unwrap();
        assert_eq!(sol.terms.len(), 2);
        assert!((sol.terms[1].a + 1.5 * PI).abs() < 1e-15);
        assert!((sol.terms[1].b + 2.0 * PI).abs() < 1e-15);
        assert!((sol.gamma - 1.0).norm() < 1e-15);

        let sol = build_beach_solution(2, 0.0).unwrap();
        assert!((sol.gamma - I).norm() < 1e-14);
        assert!((sol.gamma.arg() - PI / 2.0).abs() < 1e-14);

        for q in 1..=8 {
            let sol = build_beach_solution(q, 1.0).unwrap();
            let want = if q % 2 == 1 { 1.0 } else { -1.0 };
            assert!((sol.gamma - want).norm() < 1e-14);
        }
    }

    #[test]
    fn last_term_is_outgoing_surface_wave() {
        for q in 1..=7 {
            let sol = build_beach_solution(q, 0.4).unwrap();
            let last = sol.terms.last().unwrap();
            let (x, y) = (0.7, -0.2);
            let want = sol.gamma * Complex64::new(y, sol.s * x).exp();
            assert!((last.value(sol.s, x, y) - want).norm() < 1e-13);
        }
    }

    #[test]
    fn steklov_defect_vanishes() {
        let sol = build_beach_solution(4, 0.6).unwrap();
        for k in 0..100 {
            let x = 0.1 * k as f64;
            assert!(sol.steklov_defect(x).norm() < 1e-8);
        }
    }

    #[test]
    fn single_corner_has_no_decaying_part() {
        let sol = build_beach_solution(1, 0.3).unwrap();
        let v = beach_value(&sol, 0.5, -0.1).unwrap();
        assert_eq!(v.decaying, Complex64::default());
        assert!(matches!(
            beach_value(&sol, -0.5, -0.1),
            Err(Error::OutsideSector { .. })
        ));
    }

    #[test]
    fn quantization_examples() {
        let cfg = validate_config(PI, PI, 2, 3).unwrap();
        assert!((quantization_value(&cfg, 0, 1.25).unwrap() - 1.0).abs() < 1e-14);
        let cfg = validate_config(PI, PI, 2, 2).unwrap();
        // f_0(sigma) = sigma - 1/2
        assert!(quantization_value(&cfg, 0, 0.5).unwrap().abs() < 1e-14);
        assert!((quantization_value(&cfg, 0, 1.5).unwrap() - 1.0).abs() < 1e-14);
        let v = quantization_value(&cfg, 1, 1.0 + 1e-12).unwrap();
        assert!((v - cfg.kappa()).abs() < 1e-5);
        assert!(matches!(
            quantization_value(&cfg, 1, 1.0),
            Err(Error::BelowCutoff { .. })
        ));
    }

    #[test]
    fn solve_examples() {
        let cfg = validate_config(PI, PI, 2, 3).unwrap();
        let mode = solve_quasi(&cfg, 1, 0).unwrap();
        assert!((mode.sigma - 1.25).abs() < 1e-12);
        let mode = solve_quasi(&cfg, 1, 1).unwrap();
        assert!((mode.sigma - 1.504_86).abs() < 1e-5);
        assert!(mode.residual.abs() < 1e-12);
        let cfg = validate_config(PI, PI, 2, 2).unwrap();
        let mode = solve_quasi(&cfg, 3, 0).unwrap();
        assert!((mode.sigma - 3.5).abs() < 1e-12);
    }

    #[test]
    fn enumeration_examples() {
        let cfg = validate_config(PI, PI, 2, 3).unwrap();
        let sig: Vec<f64> = enumerate_surface_quasi(&cfg, 1.3)
            .iter()
            .map(|m| m.sigma)
            .collect();
        assert!(sig.iter().any(|s| (s - 0.25).abs() < 1e-12));
        assert!(sig.iter().any(|s| (s - 1.25).abs() < 1e-12));

        let cfg = validate_config(PI, PI, 5, 5).unwrap();
        let modes = enumerate_surface_quasi(&cfg, 1.05);
        assert!(modes
            .iter()
            .any(|m| m.n == 0 && m.m == -1 && (m.sigma - 1.0).abs() < 1e-12));

        let cfg = validate_config(PI, PI, 2, 2).unwrap();
        let n0: Vec<f64> = enumerate_surface_quasi(&cfg, 2.0)
            .iter()
            .filter(|m| m.n == 0)
            .map(|m| m.sigma)
            .collect();
        assert_eq!(n0.len(), 2);
        assert!((n0[0] - 0.5).abs() < 1e-12 && (n0[1] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn quasimode_steklov_defect_is_exact() {
        let cfg = validate_config(PI, PI, 2, 3).unwrap();
        let mode = solve_quasi(&cfg, 6, 2).unwrap();
        let (_, report) = quasimode_eval(&cfg, &mode, 1.0, -0.2).unwrap();
        assert!(report.steklov < 1e-8 * report.surface_scale.max(1.0));
        assert!(matches!(
            quasimode_eval(&cfg, &mode, 1.0, 0.5),
            Err(Error::OutsideTriangle { .. })
        ));
    }

    #[test]
    fn mismatched_sigma_has_no_matching_constant() {
        let cfg = validate_config(PI, PI, 2, 3).unwrap();
        let mut mode = solve_quasi(&cfg, 4, 1).unwrap();
        mode.sigma += 0.1;
        assert!(matches!(
            SurfaceQuasimode::new(&cfg, &mode),
            Err(Error::QUndefined { .. })
        ));
    }
}
