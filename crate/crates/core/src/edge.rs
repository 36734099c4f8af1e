//! Edge-wave quasimodes concentrated near the two ends of the sloshing side.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Corner, PrismConfig};
use crate::error::{Error, Result};
use crate::numerics::{fit_exponential_decay, LineFit};

/// One edge wave `phi_{nm}` of a single corner, in that corner's sector
/// coordinates (vertex at the origin, surface along the positive x-axis).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeMode {
    pub corner: Corner,
    pub angle_integer: u32,
    pub n: usize,
    pub m: u32,
    pub lambda: f64,
    pub sigma: f64,
    pub coeffs: Vec<f64>,
    pub multiplicity: u32,
}

/// The mode `psi_n` shared by both corners when `q` and `r` are odd.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerPairMode {
    pub n: usize,
    pub lambda: f64,
    pub sigma: f64,
    /// `(A^alpha_{mm}, A^beta_{ll})` with `m = (q-1)/2`, `l = (r-1)/2`.
    pub amplitudes: (f64, f64),
    pub alpha_mode: EdgeMode,
    pub beta_mode: EdgeMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EdgeQuasi {
    Single(EdgeMode),
    Pair(CornerPairMode),
}

impl EdgeQuasi {
    pub fn sigma(&self) -> f64 {
        match self {
            EdgeQuasi::Single(m) => m.sigma,
            EdgeQuasi::Pair(p) => p.sigma,
        }
    }

    pub fn multiplicity(&self) -> u32 {
        match self {
            EdgeQuasi::Single(m) => m.multiplicity,
            EdgeQuasi::Pair(_) => 1,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            EdgeQuasi::Single(m) => m.n,
            EdgeQuasi::Pair(p) => p.n,
        }
    }

    fn sort_key(&self) -> (u8, u8, usize, u32) {
        match self {
            EdgeQuasi::Single(m) => (0, m.corner as u8, m.n, m.m),
            EdgeQuasi::Pair(p) => (1, 0, p.n, 0),
        }
    }
}

fn tangent_at(q: u32, multiple: u32) -> Result<f64> {
    if multiple % (2 * q) == q {
        return Err(Error::TangentPole { q, multiple });
    }
    Ok((f64::from(multiple) * PI / (2.0 * f64::from(q))).tan())
}

/// `A_{1m}, ..., A_{mm}` for the wall angle `pi/(2q)`.
pub fn edge_coefficients(q: u32, m: u32) -> Result<Vec<f64>> {
    if q == 0 || 2 * m + 1 > q {
        return Err(Error::IndexOutOfRange { q, m });
    }
    let mut coeffs = Vec::with_capacity(m as usize);
    let mut product = 1.0;
    for j in 1..=m {
        product *= tangent_at(q, m - j + 1)? / tangent_at(q, m + j)?;
        let sign = if j % 2 == 1 { -1.0 } else { 1.0 };
        coeffs.push(sign * product);
    }
    Ok(coeffs)
}

/// `A_{mm}`, with the empty-product convention `A_{00} = 1`.
pub fn top_coefficient(q: u32, m: u32) -> Result<f64> {
    Ok(edge_coefficients(q, m)?.last().copied().unwrap_or(1.0))
}

impl EdgeMode {
    pub fn new(corner: Corner, angle_integer: u32, n: usize, m: u32, lambda: f64) -> Result<Self> {
        let coeffs = edge_coefficients(angle_integer, m)?;
        let angle = PI / (2.0 * f64::from(angle_integer));
        Ok(Self {
            corner,
            angle_integer,
            n,
            m,
            lambda,
            sigma: lambda * (f64::from(2 * m + 1) * angle).sin(),
            coeffs,
            multiplicity: 1,
        })
    }

    pub fn angle(&self) -> f64 {
        PI / (2.0 * f64::from(self.angle_integer))
    }

    /// Value without the sector check.
    pub fn value_unchecked(&self, x: f64, y: f64) -> f64 {
        let a = self.angle();
        let l = self.lambda;
        let wave = |k: f64, s: f64| (-l * (x * (k * a).cos() + s * y * (k * a).sin())).exp();
        let mut v = wave(1.0, -1.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            let j = (j + 1) as f64;
            v += c * (wave(2.0 * j - 1.0, 1.0) + wave(2.0 * j + 1.0, -1.0));
        }
        v
    }
}

fn in_sector(angle: f64, x: f64, y: f64) -> bool {
    let tol = 1e-12 * (1.0 + x.abs() + y.abs());
    y <= tol && x * angle.sin() + y * angle.cos() >= -tol
}

/// Evaluates an edge wave at `(x, y)` in its corner's sector coordinates.
pub fn edge_wave_value(mode: &EdgeMode, x: f64, y: f64) -> Result<f64> {
    if !in_sector(mode.angle(), x, y) {
        return Err(Error::OutsideSector { x, y });
    }
    Ok(mode.value_unchecked(x, y))
}

/// Evaluates `psi_n` on the triangle.
pub fn corner_pair_value(cfg: &PrismConfig, mode: &CornerPairMode, x: f64, y: f64) -> Result<f64> {
    if !cfg.contains(x, y, 1e-12) {
        return Err(Error::OutsideTriangle { x, y });
    }
    let (a_alpha, a_beta) = mode.amplitudes;
    Ok(a_beta * mode.alpha_mode.value_unchecked(x, y)
        + a_alpha * mode.beta_mode.value_unchecked(cfg.length() - x, y)
        - a_alpha * a_beta * (mode.lambda * y).exp())
}

impl CornerPairMode {
    pub fn new(cfg: &PrismConfig, n: usize) -> Result<Self> {
        let (q, r) = (cfg.q(), cfg.r());
        if q % 2 == 0 || r % 2 == 0 {
            return Err(Error::InvalidArgument(
                "corner pair modes need odd q and r".into(),
            ));
        }
        let lambda = cfg.lambda(n);
        let alpha_mode = EdgeMode::new(Corner::Alpha, q, n, (q - 1) / 2, lambda)?;
        let beta_mode = EdgeMode::new(Corner::Beta, r, n, (r - 1) / 2, lambda)?;
        Ok(Self {
            n,
            lambda,
            sigma: lambda,
            amplitudes: (
                top_coefficient(q, (q - 1) / 2)?,
                top_coefficient(r, (r - 1) / 2)?,
            ),
            alpha_mode,
            beta_mode,
        })
    }
}

/// Decaying edge-wave indices for one corner: `2m + 1 < q`.
fn decaying_indices(q: u32) -> impl Iterator<Item = u32> {
    (0..).take_while(move |m| 2 * m + 1 < q)
}

/// All edge quasi-eigenvalues below `sigma_max`, ascending.
pub fn enumerate_edge_quasi(cfg: &PrismConfig, sigma_max: f64) -> Vec<EdgeQuasi> {
    let (q, r) = (cfg.q(), cfg.r());
    // the slowest family is m = 0 at the sharper corner
    let slowest = cfg.alpha().min(cfg.beta()).sin();
    let n_max = (sigma_max / (cfg.lambda(1) * slowest)).ceil() as usize + 1;
    let mut out: Vec<EdgeQuasi> = (1..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| {
            let lambda = cfg.lambda(n);
            let mut modes = Vec::new();
            for m in decaying_indices(q) {
                let mut mode = EdgeMode::new(Corner::Alpha, q, n, m, lambda)
                    .expect("index range checked");
                if decaying_indices(r).any(|l| (2 * m + 1) * r == (2 * l + 1) * q) {
                    mode.multiplicity = 2;
                }
                modes.push(EdgeQuasi::Single(mode));
            }
            for l in decaying_indices(r) {
                if decaying_indices(q).any(|m| (2 * m + 1) * r == (2 * l + 1) * q) {
                    continue;
                }
                let mode =
                    EdgeMode::new(Corner::Beta, r, n, l, lambda).expect("index range checked");
                modes.push(EdgeQuasi::Single(mode));
            }
            if cfg.nu() == 1 {
                modes.push(EdgeQuasi::Pair(
                    CornerPairMode::new(cfg, n).expect("odd q and r"),
                ));
            }
            modes.retain(|e| e.sigma() < sigma_max);
            modes
        })
        .collect();
    out.sort_by(|a, b| {
        a.sigma()
            .total_cmp(&b.sigma())
            .then(a.sort_key().cmp(&b.sort_key()))
    });
    out
}

/// Leading-order edge counting function (no O(1) term).
pub fn edge_counting_asymptotic(cfg: &PrismConfig, sigma: f64) -> f64 {
    let scale = cfg.depth() * sigma / PI;
    let mut total = f64::from(cfg.nu()) * scale;
    for corner in [Corner::Alpha, Corner::Beta] {
        let q = cfg.angle_integer(corner);
        let a = cfg.angle(corner);
        for m in decaying_indices(q) {
            total += scale / (f64::from(2 * m + 1) * a).sin();
        }
    }
    total
}

/// Exact edge count below `sigma`, multiplicities included.
pub fn edge_count_exact(cfg: &PrismConfig, sigma: f64) -> u64 {
    // number of n >= 1 with lambda_n * s < sigma, using the same
    // floating-point expression as the enumeration
    let count_below = |s: f64| -> u64 {
        let mut k = (sigma / (cfg.lambda(1) * s)).floor().max(0.0) as usize;
        while k > 0 && cfg.lambda(k) * s >= sigma {
            k -= 1;
        }
        while cfg.lambda(k + 1) * s < sigma {
            k += 1;
        }
        k as u64
    };
    let mut total = 0;
    for corner in [Corner::Alpha, Corner::Beta] {
        let q = cfg.angle_integer(corner);
        let a = cfg.angle(corner);
        for m in decaying_indices(q) {
            total += count_below((f64::from(2 * m + 1) * a).sin());
        }
    }
    if cfg.nu() == 1 {
        total += count_below(1.0);
    }
    total
}

/// Least-squares decay exponent of `|phi|` along the sector bisector,
/// sampled at 20 points with `x` in `[1, 10]`.
pub fn edge_decay_fit(mode: &EdgeMode) -> Option<LineFit> {
    let half = 0.5 * mode.angle();
    let xs: Vec<f64> = (0..20).map(|k| 1.0 + 9.0 * k as f64 / 19.0).collect();
    let mags: Vec<f64> = xs
        .iter()
        .map(|&x| mode.value_unchecked(x, -x * half.tan()))
        .collect();
    fit_exponential_decay(&xs, &mags)
}
