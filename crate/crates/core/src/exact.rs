//! Closed-form spectra used as independent oracles: the right isosceles
//! cross-section (both wall angles pi/4) and the rectangular tank.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::bisect;

/// Separated eigenfunction families for the pi/4 cross-section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pi4Branch {
    CoshCosh,
    SinhSinh,
    CosCosh,
    SinSinh,
    XY,
}

impl Pi4Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Pi4Branch::CoshCosh => "coshcosh",
            Pi4Branch::SinhSinh => "sinhsinh",
            Pi4Branch::CosCosh => "coscosh",
            Pi4Branch::SinSinh => "sinsinh",
            Pi4Branch::XY => "xy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pi4Root {
    pub branch: Pi4Branch,
    pub n: usize,
    pub m: usize,
    /// Oscillation wavenumber; `None` for the non-oscillatory families.
    pub chi: Option<f64>,
    pub sigma: f64,
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

fn lambda(depth: f64, n: usize) -> f64 {
    n as f64 * PI / depth
}

/// `coth(x) - tanh(x) = 2 / sinh(2x)`, the gap between the two corner
/// families, evaluated without cancellation.
pub fn pi4_branch_gap(length: f64, lambda_n: f64) -> f64 {
    let x = lambda_n * length / (2.0 * SQRT_2);
    lambda_n / SQRT_2 * 2.0 / (2.0 * x).sinh()
}

/// Corner-concentrated families and the single `xy` mode below `sigma_max`.
/// The constant mode (`n = 0` of the first family) is included once.
pub fn pi4_corner_branches(length: f64, depth: f64, sigma_max: f64) -> Result<Vec<Pi4Root>> {
    check_positive("L", length)?;
    check_positive("M", depth)?;
    check_positive("sigma_max", sigma_max)?;
    let mut out = Vec::new();
    for n in 0.. {
        let l = lambda(depth, n);
        let x = l * length / (2.0 * SQRT_2);
        let cosh = l / SQRT_2 * x.tanh();
        if cosh >= sigma_max {
            break;
        }
        out.push(Pi4Root {
            branch: Pi4Branch::CoshCosh,
            n,
            m: 0,
            chi: None,
            sigma: cosh,
        });
        if n >= 1 {
            let sinh = cosh + pi4_branch_gap(length, l);
            if sinh < sigma_max {
                out.push(Pi4Root {
                    branch: Pi4Branch::SinhSinh,
                    n,
                    m: 0,
                    chi: None,
                    sigma: sinh,
                });
            }
        }
    }
    if 2.0 / length < sigma_max {
        out.push(Pi4Root {
            branch: Pi4Branch::XY,
            n: 0,
            m: 0,
            chi: None,
            sigma: 2.0 / length,
        });
    }
    sort_roots(&mut out);
    Ok(out)
}

/// `chi L / pi + (2/pi) arctan(sqrt(1 + (lambda/chi)^2) h(sqrt(chi^2 + lambda^2) L / 2)) - k`
/// with `h = tanh` or `coth`.
fn oscillatory_residual(chi: f64, lambda_n: f64, length: f64, coth: bool, k: f64) -> f64 {
    let rho = (chi * chi + lambda_n * lambda_n).sqrt();
    let arg = rho * length / 2.0;
    let h = if coth { 1.0 / arg.tanh() } else { arg.tanh() };
    let ratio = (1.0 + (lambda_n / chi).powi(2)).sqrt();
    chi * length / PI + 2.0 / PI * (ratio * h).atan() - k
}

/// Root `chi` of the third-family condition for `m >= 1`.
fn solve_coscosh(lambda_n: f64, length: f64, m: usize) -> Result<f64> {
    let k = 2.0 * m as f64;
    let lo = (k - 1.0) * PI / length;
    let hi = k * PI / length;
    bisect(
        |chi| oscillatory_residual(chi, lambda_n, length, false, k),
        lo,
        hi,
        200,
    )
}

/// Root `chi` of the fourth-family condition; `None` when the bracket
/// shows no sign change (which happens for `m = 0`).
fn solve_sinsinh(lambda_n: f64, length: f64, m: usize) -> Result<Option<f64>> {
    let k = 2.0 * m as f64 + 1.0;
    let hi = k * PI / length;
    let lo = if m == 0 {
        1e-9 * PI / length
    } else {
        (k - 1.0) * PI / length
    };
    let f = |chi: f64| oscillatory_residual(chi, lambda_n, length, true, k);
    if m == 0 {
        // no guaranteed bracket: sample the interval for a sign change
        let samples = 256;
        let mut prev = (lo, f(lo));
        for i in 1..=samples {
            let chi = lo + (hi - lo) * i as f64 / samples as f64;
            let v = f(chi);
            if prev.1 * v < 0.0 {
                return bisect(f, prev.0, chi, 200).map(Some);
            }
            prev = (chi, v);
        }
        return Ok(None);
    }
    bisect(f, lo, hi, 200).map(Some)
}

/// `-chi tan(chi L / 2)` written as `rho tanh(rho L / 2)`, which is the
/// same number on the root and is well conditioned.
fn coscosh_sigma(chi: f64, lambda_n: f64, length: f64) -> f64 {
    let rho = (chi * chi + lambda_n * lambda_n).sqrt();
    rho * (rho * length / 2.0).tanh()
}

fn sinsinh_sigma(chi: f64, lambda_n: f64, length: f64) -> f64 {
    let rho = (chi * chi + lambda_n * lambda_n).sqrt();
    rho / (rho * length / 2.0).tanh()
}

/// Oscillatory families below `sigma_max`.
pub fn pi4_oscillatory_roots(length: f64, depth: f64, sigma_max: f64) -> Result<Vec<Pi4Root>> {
    check_positive("L", length)?;
    check_positive("M", depth)?;
    check_positive("sigma_max", sigma_max)?;
    // sigma >= rho tanh(rho L/2) >= lambda_n tanh(lambda_n L / 2)
    let mut ns = Vec::new();
    for n in 0.. {
        let l = lambda(depth, n);
        if l * (l * length / 2.0).tanh() >= sigma_max {
            break;
        }
        ns.push(n);
    }
    let per_n: Vec<Result<Vec<Pi4Root>>> = ns
        .par_iter()
        .map(|&n| {
            let l = lambda(depth, n);
            let mut roots = Vec::new();
            for m in 1.. {
                let chi = solve_coscosh(l, length, m)?;
                let sigma = coscosh_sigma(chi, l, length);
                if sigma >= sigma_max {
                    break;
                }
                roots.push(Pi4Root {
                    branch: Pi4Branch::CosCosh,
                    n,
                    m,
                    chi: Some(chi),
                    sigma,
                });
            }
            for m in 0.. {
                let Some(chi) = solve_sinsinh(l, length, m)? else {
                    continue;
                };
                let sigma = sinsinh_sigma(chi, l, length);
                if sigma >= sigma_max {
                    break;
                }
                roots.push(Pi4Root {
                    branch: Pi4Branch::SinSinh,
                    n,
                    m,
                    chi: Some(chi),
                    sigma,
                });
            }
            Ok(roots)
        })
        .collect();
    let mut out = Vec::new();
    for roots in per_n {
        out.extend(roots?);
    }
    sort_roots(&mut out);
    Ok(out)
}

fn sort_roots(roots: &mut [Pi4Root]) {
    roots.sort_by(|a, b| {
        a.sigma
            .total_cmp(&b.sigma)
            .then(a.branch.cmp(&b.branch))
            .then(a.n.cmp(&b.n))
            .then(a.m.cmp(&b.m))
    });
}

/// Every exact eigenvalue of the pi/4 prism below `sigma_max`.
pub fn pi4_spectrum(length: f64, depth: f64, sigma_max: f64) -> Result<Vec<Pi4Root>> {
    let mut all = pi4_corner_branches(length, depth, sigma_max)?;
    all.extend(pi4_oscillatory_roots(length, depth, sigma_max)?);
    sort_roots(&mut all);
    Ok(all)
}

/// `sigma` and `(N(sigma) - L M sigma^2 / 4 pi) / sigma` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pi4CountSeries {
    pub sigma: Vec<f64>,
    pub count: Vec<u64>,
    pub s_values: Vec<f64>,
    /// `(L + M (2 sqrt 2 + 1)) / 2 pi`.
    pub target: f64,
    /// Per-family counts at the top of the grid, in branch order.
    pub branch_counts: Vec<(Pi4Branch, u64)>,
}

pub fn pi4_counting_check(length: f64, depth: f64, sigma_max: f64, points: usize) -> Result<Pi4CountSeries> {
    if !(sigma_max >= 20.0) {
        return Err(Error::InvalidArgument(format!(
            "sigma_max must be at least 20, got {sigma_max}"
        )));
    }
    let points = points.max(2);
    let spectrum = pi4_spectrum(length, depth, sigma_max)?;
    let values: Vec<f64> = spectrum.iter().map(|r| r.sigma).collect();
    let area = length * depth / (4.0 * PI);
    let mut series = Pi4CountSeries {
        sigma: Vec::with_capacity(points),
        count: Vec::with_capacity(points),
        s_values: Vec::with_capacity(points),
        target: (length + depth * (2.0 * SQRT_2 + 1.0)) / (2.0 * PI),
        branch_counts: Vec::new(),
    };
    for k in 1..=points {
        let sigma = sigma_max * k as f64 / points as f64;
        let n = values.partition_point(|&s| s < sigma) as u64;
        series.sigma.push(sigma);
        series.count.push(n);
        series.s_values.push((n as f64 - area * sigma * sigma) / sigma);
    }
    for branch in [
        Pi4Branch::CoshCosh,
        Pi4Branch::SinhSinh,
        Pi4Branch::CosCosh,
        Pi4Branch::SinSinh,
        Pi4Branch::XY,
    ] {
        let c = spectrum.iter().filter(|r| r.branch == branch).count() as u64;
        series.branch_counts.push((branch, c));
    }
    Ok(series)
}

/// `sigma = mu tanh(mu R)` with `mu^2 = (m pi / L)^2 + (n pi / M)^2`.
pub fn cuboid_reference(length: f64, depth: f64, height: f64, sigma_max: f64) -> Result<Vec<f64>> {
    check_positive("L", length)?;
    check_positive("M", depth)?;
    check_positive("R", height)?;
    let mut out = Vec::new();
    // mu tanh(mu R) >= mu tanh(mu_1 R) once mu >= mu_1
    let floor = (PI / length.max(depth) * height).tanh();
    let mu_max = sigma_max / floor;
    let m_max = (mu_max * length / PI).ceil() as usize;
    let n_max = (mu_max * depth / PI).ceil() as usize;
    for m in 0..=m_max {
        for n in 0..=n_max {
            let mu = ((m as f64 * PI / length).powi(2) + (n as f64 * PI / depth).powi(2)).sqrt();
            let sigma = mu * (mu * height).tanh();
            if sigma < sigma_max {
                out.push(sigma);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}
