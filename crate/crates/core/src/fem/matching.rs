//! Index alignment between a computed spectrum and a reference list.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentReport {
    /// Reference entry `j` pairs with computed entry `j + offset`.
    pub offset: i64,
    /// First reference index from which every paired gap is below `tol`.
    pub first_matched: Option<usize>,
    pub median_gap: f64,
    /// False when no offset brings the median gap below 0.05.
    pub stable: bool,
    /// `(reference index, reference value, computed value, gap)`.
    pub pairs: Vec<(usize, f64, f64, f64)>,
}

impl AlignmentReport {
    pub fn max_gap_in(&self, lo: f64, hi: f64) -> f64 {
        self.pairs
            .iter()
            .filter(|p| p.1 >= lo && p.1 <= hi)
            .map(|p| p.3)
            .fold(0.0, f64::max)
    }
}

const MAX_OFFSET: i64 = 12;
const STABLE_MEDIAN: f64 = 0.05;

fn paired(computed: &[f64], reference: &[f64], offset: i64) -> Vec<(usize, f64, f64, f64)> {
    reference
        .iter()
        .enumerate()
        .filter_map(|(j, &r)| {
            let k = j as i64 + offset;
            (k >= 0 && (k as usize) < computed.len()).then(|| {
                let c = computed[k as usize];
                (j, r, c, (c - r).abs())
            })
        })
        .collect()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Picks the offset minimising the median gap over the upper half of
/// the common range. Both inputs must be sorted ascending.
pub fn match_spectra(computed: &[f64], reference: &[f64], tol: f64) -> Result<AlignmentReport> {
    if computed.is_empty() || reference.is_empty() {
        return Err(Error::InvalidArgument("empty spectrum".into()));
    }
    let top = computed.last().unwrap().min(*reference.last().unwrap());
    let mut best: Option<(f64, i64)> = None;
    for offset in -MAX_OFFSET..=MAX_OFFSET {
        let gaps: Vec<f64> = paired(computed, reference, offset)
            .into_iter()
            .filter(|p| p.1 >= 0.5 * top && p.1 <= top)
            .map(|p| p.3)
            .collect();
        if gaps.is_empty() {
            continue;
        }
        let m = median(gaps);
        if best.map_or(true, |(bm, _)| m < bm) {
            best = Some((m, offset));
        }
    }
    let (median_gap, offset) = best.ok_or_else(|| Error::InvalidArgument("spectra do not overlap".into()))?;
    let pairs: Vec<_> = paired(computed, reference, offset)
        .into_iter()
        .filter(|p| p.1 <= top)
        .collect();
    let first_matched = match pairs.iter().rposition(|p| p.3 >= tol) {
        None => pairs.first().map(|p| p.0),
        Some(k) => pairs.get(k + 1).map(|p| p.0),
    };
    Ok(AlignmentReport {
        offset,
        first_matched,
        median_gap,
        stable: median_gap < STABLE_MEDIAN,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_shift() {
        let reference: Vec<f64> = (0..40).map(|k| 0.3 * k as f64).collect();
        let mut computed: Vec<f64> = vec![0.05, 0.11];
        computed.extend(reference.iter().skip(1).map(|v| v + 1e-4));
        let r = match_spectra(&computed, &reference, 1e-3).unwrap();
        assert_eq!(r.offset, 1);
        assert_eq!(r.first_matched, Some(1));
        assert!(r.stable);
    }

    #[test]
    fn identical_lists() {
        let v: Vec<f64> = (0..20).map(|k| (k as f64).sqrt()).collect();
        let r = match_spectra(&v, &v, 1e-12).unwrap();
        assert_eq!(r.offset, 0);
        assert!(r.pairs.iter().all(|p| p.3 == 0.0));
    }

    #[test]
    fn unrelated_lists_have_no_offset() {
        let reference: Vec<f64> = (0..30).map(|k| k as f64).collect();
        let computed: Vec<f64> = (0..30).map(|k| k as f64 + 0.5).collect();
        assert!(!match_spectra(&computed, &reference, 1e-2).unwrap().stable);
    }
}
