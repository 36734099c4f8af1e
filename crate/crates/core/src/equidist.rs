//! Exponential sums over `sqrt(sigma^2 - n^2)` and the distribution of
//! its fractional parts.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::pairwise_sum;

/// Window `[r sigma / K, (r + 1) sigma / K)` and harmonic `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpSumSpec {
    pub sigma: f64,
    pub k: u32,
    pub r: u32,
    pub h: i64,
}

impl ExpSumSpec {
    pub fn new(sigma: f64, k: u32, r: u32, h: i64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
        }
        if k < 2 || r + 2 > k {
            return Err(Error::InvalidArgument(format!(
                "need K >= 2 and 0 <= r <= K - 2, got K = {k}, r = {r}"
            )));
        }
        if h == 0 {
            return Err(Error::InvalidArgument("harmonic h must be nonzero".into()));
        }
        Ok(Self { sigma, k, r, h })
    }

    /// Integers `n` in the window.
    pub fn window(&self) -> std::ops::Range<u64> {
        window(self.sigma, self.k, self.r)
    }
}

fn window(sigma: f64, k: u32, r: u32) -> std::ops::Range<u64> {
    let lo = (f64::from(r) * sigma / f64::from(k)).ceil() as u64;
    let hi_edge = f64::from(r + 1) * sigma / f64::from(k);
    let mut hi = hi_edge.ceil() as u64;
    // half-open: drop n equal to the upper edge
    while hi > lo && (hi - 1) as f64 >= hi_edge {
        hi -= 1;
    }
    lo..hi.max(lo)
}

/// `sqrt(sigma^2 - n^2)` in the product form `(sigma - n)(sigma + n)`.
pub fn radial(sigma: f64, n: u64) -> f64 {
    let n = n as f64;
    ((sigma - n) * (sigma + n)).max(0.0).sqrt()
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

fn unnormalized_sum(spec: &ExpSumSpec) -> Complex64 {
    let h = spec.h as f64;
    let terms: Vec<Complex64> = spec
        .window()
        .into_par_iter()
        .map(|n| Complex64::from_polar(1.0, 2.0 * PI * frac(h * radial(spec.sigma, n))))
        .collect();
    pairwise_sum(&terms)
}

/// `(K / sigma) sum_{n in window} e(h sqrt(sigma^2 - n^2))`; zero for an
/// empty window.
pub fn exponential_sum(spec: &ExpSumSpec) -> Complex64 {
    unnormalized_sum(spec) * (f64::from(spec.k) / spec.sigma)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorputReport {
    /// Modulus of the normalized sum.
    pub sum_modulus: f64,
    /// Modulus of the raw sum.
    pub raw_modulus: f64,
    /// `K^{3/2} (sigma / K) (|h| / sigma)^{1/2} + (sigma / |h|)^{1/2}`.
    pub bound: f64,
    /// `raw_modulus / bound`.
    pub c0: f64,
}

pub fn vdcorput_bound_check(spec: &ExpSumSpec) -> CorputReport {
    let raw = unnormalized_sum(spec).norm();
    let k = f64::from(spec.k);
    let lam = spec.h.unsigned_abs() as f64 / spec.sigma;
    let bound = k.powf(1.5) * (spec.sigma / k) * lam.sqrt() + lam.sqrt().recip();
    CorputReport {
        sum_modulus: raw * k / spec.sigma,
        raw_modulus: raw,
        bound,
        c0: raw / bound,
    }
}

/// The fractional parts `d_n(sigma)` for `n` in the window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionalPartSample {
    pub sigma: f64,
    pub values: Vec<f64>,
}

pub fn fractional_parts(sigma: f64, k: u32, r: u32) -> Result<FractionalPartSample> {
    ExpSumSpec::new(sigma, k, r, 1)?;
    Ok(FractionalPartSample {
        sigma,
        values: window(sigma, k, r).map(|n| frac(radial(sigma, n))).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub counts: Vec<u64>,
    /// Kolmogorov–Smirnov distance to the uniform law on `[0, 1)`.
    pub ks: f64,
}

/// Sup distance between the empirical CDF of `values` and `x -> x`.
pub fn ks_uniform(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / n).max((i + 1) as f64 / n - x))
        .fold(0.0, f64::max)
}

pub fn fractional_part_histogram(sigma: f64, k: u32, r: u32, bins: usize) -> Result<Histogram> {
    if bins == 0 {
        return Err(Error::InvalidArgument("need at least one bin".into()));
    }
    let sample = fractional_parts(sigma, k, r)?;
    let mut counts = vec![0u64; bins];
    for &v in &sample.values {
        counts[((v * bins as f64) as usize).min(bins - 1)] += 1;
    }
    Ok(Histogram {
        counts,
        ks: ks_uniform(&sample.values),
    })
}

/// One JSON-ready row per run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquidistReport {
    pub sigma: f64,
    #[serde(rename = "K")]
    pub k: u32,
    pub r: u32,
    pub h: i64,
    pub sum_modulus: f64,
    pub bound: f64,
    #[serde(rename = "C0")]
    pub c0: f64,
    pub ks: f64,
}

pub fn equidist_report(spec: &ExpSumSpec) -> Result<EquidistReport> {
    let corput = vdcorput_bound_check(spec);
    let ks = ks_uniform(&fractional_parts(spec.sigma, spec.k, spec.r)?.values);
    Ok(EquidistReport {
        sigma: spec.sigma,
        k: spec.k,
        r: spec.r,
        h: spec.h,
        sum_modulus: corput.sum_modulus,
        bound: corput.bound,
        c0: corput.c0,
        ks,
    })
}
