//! Finite-element reference spectrum of the 2D sloshing pencil.

mod assembly;
mod matching;
mod mesh;
mod solve;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::PrismConfig;
use crate::error::{Error, Result};

pub use assembly::{assemble_pencil, build_layout, DofLayout, EigPencil, ElementOrder, FemOperators, SparseSym};
pub use matching::{match_spectra, AlignmentReport};
pub use mesh::{generate_mesh, EdgeTag, TriangleMesh};
pub use solve::{schur_complement, sloshing_eigenvalues, solve_sloshing_modes};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FemOptions {
    pub h: f64,
    pub grading: f64,
    pub order: ElementOrder,
}

impl FemOptions {
    pub const DEFAULT_GRADING: f64 = 4.0;

    /// Quadratic elements at `h = L/40` with corner grading 4.
    pub fn for_config(cfg: &PrismConfig) -> Self {
        Self {
            h: cfg.length() / 40.0,
            grading: Self::DEFAULT_GRADING,
            order: ElementOrder::P2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FemSpectrum {
    pub per_n: BTreeMap<usize, Vec<f64>>,
    /// `(sigma, n, k)` sorted by `sigma`.
    pub merged: Vec<(f64, usize, usize)>,
    pub mesh_size: f64,
}

impl FemSpectrum {
    pub fn values(&self) -> Vec<f64> {
        self.merged.iter().map(|m| m.0).collect()
    }

    /// Checks `sigma_k(n + 1) > sigma_k(n)` wherever both are computed.
    pub fn monotone_in_n(&self) -> bool {
        self.per_n.iter().zip(self.per_n.iter().skip(1)).all(|((_, lo), (_, hi))| {
            lo.iter().zip(hi).all(|(a, b)| b > a)
        })
    }
}

/// Eigenvalues below `sigma_max` for `n = 0, 1, ...`, stopping at the
/// first `n` whose lowest eigenvalue exceeds `sigma_max`.
pub fn fem_spectrum(cfg: &PrismConfig, opts: &FemOptions, sigma_max: f64) -> Result<FemSpectrum> {
    if !(sigma_max > 0.0 && sigma_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("sigma_max must be positive, got {sigma_max}")));
    }
    let mesh = generate_mesh(cfg, opts.h, opts.grading)?;
    let ops = FemOperators::assemble(&mesh, opts.order)?;
    let batch = rayon::current_num_threads().max(1);
    let mut per_n = BTreeMap::new();
    let mut n0 = 0usize;
    'outer: loop {
        let results: Vec<Result<(usize, Vec<f64>)>> = (n0..n0 + batch)
            .into_par_iter()
            .map(|n| {
                let ev = sloshing_eigenvalues(&ops.pencil(cfg.lambda(n)))?;
                Ok((n, ev))
            })
            .collect();
        for r in results {
            let (n, ev) = r?;
            let lowest = if n == 0 { ev.get(1) } else { ev.first() };
            if lowest.map_or(true, |&v| v > sigma_max) {
                break 'outer;
            }
            per_n.insert(n, ev.into_iter().filter(|&v| v <= sigma_max).collect::<Vec<_>>());
        }
        n0 += batch;
    }
    let mut merged: Vec<(f64, usize, usize)> = per_n
        .iter()
        .flat_map(|(&n, ev)| ev.iter().enumerate().map(move |(k, &s)| (s, n, k)))
        .collect();
    merged.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    Ok(FemSpectrum {
        per_n,
        merged,
        mesh_size: opts.h,
    })
}
