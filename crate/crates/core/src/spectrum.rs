//! The merged quasi-eigenvalue list: constant mode, edge waves, corner
//! pair modes and surface waves in one ascending sequence.

use serde::{Deserialize, Serialize};

use crate::config::{Corner, PrismConfig};
use crate::edge::{enumerate_edge_quasi, EdgeQuasi};
use crate::surface::enumerate_surface_quasi;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum QuasiKind {
    Constant,
    Edge,
    CornerPair,
    Surface,
}

impl QuasiKind {
    pub fn as_str(self) -> &'static str {
        match self {
            QuasiKind::Constant => "constant",
            QuasiKind::Edge => "edge",
            QuasiKind::CornerPair => "edgepair",
            QuasiKind::Surface => "surface",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiEntry {
    pub sigma: f64,
    pub kind: QuasiKind,
    pub corner: Option<Corner>,
    pub m: Option<i64>,
    pub n: usize,
    pub multiplicity: u32,
    /// Quantization residual for surface waves, zero otherwise.
    pub residual: f64,
}

/// All quasi-eigenvalues below `sigma_max`, each listed once with its
/// multiplicity. The constant mode `sigma = 0` appears once.
pub fn merged_quasi_spectrum(cfg: &PrismConfig, sigma_max: f64) -> Vec<QuasiEntry> {
    let mut out = Vec::new();
    if sigma_max > 0.0 {
        out.push(QuasiEntry {
            sigma: 0.0,
            kind: QuasiKind::Constant,
            corner: None,
            m: None,
            n: 0,
            multiplicity: 1,
            residual: 0.0,
        });
    }
    for e in enumerate_edge_quasi(cfg, sigma_max) {
        out.push(match e {
            EdgeQuasi::Single(mode) => QuasiEntry {
                sigma: mode.sigma,
                kind: QuasiKind::Edge,
                corner: Some(mode.corner),
                m: Some(i64::from(mode.m)),
                n: mode.n,
                multiplicity: mode.multiplicity,
                residual: 0.0,
            },
            EdgeQuasi::Pair(p) => QuasiEntry {
                sigma: p.sigma,
                kind: QuasiKind::CornerPair,
                corner: None,
                m: None,
                n: p.n,
                multiplicity: 1,
                residual: 0.0,
            },
        });
    }
    for s in enumerate_surface_quasi(cfg, sigma_max) {
        out.push(QuasiEntry {
            sigma: s.sigma,
            kind: QuasiKind::Surface,
            corner: None,
            m: Some(s.m),
            n: s.n,
            multiplicity: 1,
            residual: s.residual,
        });
    }
    out.sort_by(|a, b| {
        a.sigma
            .total_cmp(&b.sigma)
            .then(a.kind.cmp(&b.kind))
            .then(a.corner.cmp(&b.corner))
            .then(a.n.cmp(&b.n))
            .then(a.m.cmp(&b.m))
    });
    out
}

/// Ascending values with multiplicities expanded.
pub fn expanded_values(entries: &[QuasiEntry]) -> Vec<f64> {
    entries
        .iter()
        .flat_map(|e| std::iter::repeat(e.sigma).take(e.multiplicity as usize))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::validate_config;
    use std::f64::consts::PI;

    #[test]
    fn leading_values_right_isosceles_mixed() {
        let cfg = validate_config(PI, PI, 2, 3).unwrap();
        let v = expanded_values(&merged_quasi_spectrum(&cfg, 1.45));
        let want = [0.0, 0.25, 0.5, 0.707_107, 1.0, 1.25, 1.414_21];
        assert_eq!(v.len(), want.len());
        for (a, b) in v.iter().zip(want) {
            assert!((a - b).abs() < 1e-5);
        }
    }

    #[test]
    fn doubled_edge_values() {
        let cfg = validate_config(PI, PI, 5, 5).unwrap();
        let entries = merged_quasi_spectrum(&cfg, 0.95);
        let doubled: Vec<f64> = entries
            .iter()
            .filter(|e| e.multiplicity == 2)
            .map(|e| e.sigma)
            .collect();
        let want = [0.309_017, 0.618_034, 0.809_017, 0.927_051];
        assert_eq!(doubled.len(), 4);
        for (a, b) in doubled.iter().zip(want) {
            assert!((a - b).abs() < 1e-6);
        }
    }
}
