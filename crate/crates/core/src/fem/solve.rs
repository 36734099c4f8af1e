//! Condenses the pencil onto the sloshing DOFs and solves the dense
//! Steklov problem there.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use super::assembly::{EigPencil, SparseSym};
use crate::error::{Error, Result};

/// Row-envelope Cholesky factor of the leading interior block.
struct Envelope {
    first: Vec<usize>,
    offset: Vec<usize>,
    data: Vec<f64>,
}

impl Envelope {
    fn row(&self, i: usize) -> &[f64] {
        &self.data[self.offset[i]..self.offset[i + 1]]
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn factor_interior(a: &SparseSym, n_int: usize) -> Result<Envelope> {
    let first: Vec<usize> = (0..n_int).map(|i| a.row(i).next().map_or(i, |(c, _)| c.min(i))).collect();
    let mut offset = vec![0usize; n_int + 1];
    for i in 0..n_int {
        offset[i + 1] = offset[i] + (i + 1 - first[i]);
    }
    let mut data = vec![0.0; offset[n_int]];
    for i in 0..n_int {
        let fi = first[i];
        let (done, rest) = data.split_at_mut(offset[i]);
        let row = &mut rest[..i + 1 - fi];
        for (c, v) in a.row(i) {
            if c <= i {
                row[c - fi] = v;
            }
        }
        for j in fi..i {
            let fj = first[j];
            let k0 = fi.max(fj);
            let lj = &done[offset[j]..offset[j + 1]];
            let s = dot(&row[k0 - fi..j - fi], &lj[k0 - fj..j - fj]);
            row[j - fi] = (row[j - fi] - s) / lj[j - fj];
        }
        let d = row[i - fi] - dot(&row[..i - fi], &row[..i - fi]);
        if !(d > 0.0) {
            return Err(Error::FactorizationFailure { pivot: i });
        }
        row[i - fi] = d.sqrt();
    }
    Ok(Envelope { first, offset, data })
}

/// `A_SS - A_SI A_II^{-1} A_IS`, the discrete Dirichlet-to-Neumann map.
pub fn schur_complement(pencil: &EigPencil) -> Result<DMatrix<f64>> {
    let a = &pencil.a;
    let n_int = pencil.n_interior;
    let ns = a.n - n_int;
    let env = factor_interior(a, n_int)?;
    // forward substitution for every sloshing row against the interior factor
    let rows: Vec<(usize, Vec<f64>)> = (0..ns)
        .into_iter()
        .map(|s| {
            let i = n_int + s;
            let fi = a.row(i).next().map_or(n_int, |(c, _)| c.min(n_int));
            let mut w = vec![0.0; n_int - fi];
            for (c, v) in a.row(i) {
                if c < n_int {
                    w[c - fi] = v;
                }
            }
            for j in fi..n_int {
                let fj = env.first[j];
                let k0 = fi.max(fj);
                let lj = env.row(j);
                let s = dot(&w[k0 - fi..j - fi], &lj[k0 - fj..j - fj]);
                w[j - fi] = (w[j - fi] - s) / lj[j - fj];
            }
            (fi, w)
        })
        .collect();
    let mut schur = DMatrix::zeros(ns, ns);
    for s in 0..ns {
        for (c, v) in a.row(n_int + s) {
            if c >= n_int {
                schur[(s, c - n_int)] = v;
            }
        }
    }
    let updates: Vec<Vec<f64>> = (0..ns)
        .into_iter()
        .map(|s| {
            let (fs, ws) = &rows[s];
            (0..=s)
                .map(|t| {
                    let (ft, wt) = &rows[t];
                    let k0 = (*fs).max(*ft);
                    dot(&ws[k0 - fs..], &wt[k0 - ft..])
                })
                .collect()
        })
        .collect();
    for (s, u) in updates.iter().enumerate() {
        for (t, v) in u.iter().enumerate() {
            let val = schur[(s, t)] - v;
            schur[(s, t)] = val;
            schur[(t, s)] = val;
        }
    }
    Ok(schur)
}

fn sloshing_block(b: &SparseSym, n_int: usize) -> DMatrix<f64> {
    let ns = b.n - n_int;
    let mut m = DMatrix::zeros(ns, ns);
    for s in 0..ns {
        for (c, v) in b.row(n_int + s) {
            m[(s, c - n_int)] = v;
        }
    }
    m
}

/// All sloshing eigenvalues of the pencil in ascending order. At
/// `lambda = 0` the constant mode is deflated and reported as exactly 0.
pub fn sloshing_eigenvalues(pencil: &EigPencil) -> Result<Vec<f64>> {
    let d = schur_complement(pencil)?;
    let b = sloshing_block(&pencil.b, pencil.n_interior);
    let ns = d.nrows();
    let chol = b.cholesky().ok_or(Error::FactorizationFailure { pivot: pencil.n_interior })?;
    let l = chol.l();
    let x = l.solve_lower_triangular(&d).ok_or(Error::FactorizationFailure { pivot: pencil.n_interior })?;
    let mut m = l
        .solve_lower_triangular(&x.transpose())
        .ok_or(Error::FactorizationFailure { pivot: pencil.n_interior })?;
    m = (&m + m.transpose()) * 0.5;
    if pencil.lambda != 0.0 {
        let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        return Ok(ev);
    }
    // the constant maps to v = L^T 1; restrict to its orthogonal complement
    let v = l.transpose() * DVector::from_element(ns, 1.0);
    let norm = v.norm();
    let mut u = v.clone();
    u[0] += if v[0] >= 0.0 { norm } else { -norm };
    let uu = u.dot(&u);
    let hm = {
        // H M H with H = I - 2 u u^T / (u^T u)
        let mu = &m * &u;
        let umu = u.dot(&mu);
        let c = 2.0 / uu;
        &m - (&mu * u.transpose()) * c - (&u * mu.transpose()) * c + (&u * u.transpose()) * (c * c * umu)
    };
    let reduced = hm.view((1, 1), (ns - 1, ns - 1)).into_owned();
    let reduced = (&reduced + reduced.transpose()) * 0.5;
    let mut ev: Vec<f64> = std::iter::once(0.0)
        .chain(SymmetricEigen::new(reduced).eigenvalues.iter().copied())
        .collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

pub fn solve_sloshing_modes(pencil: &EigPencil, count: usize) -> Result<Vec<f64>> {
    let available = pencil.a.n - pencil.n_interior;
    if count > available {
        return Err(Error::InsufficientModes {
            requested: count,
            available,
        });
    }
    let mut ev = sloshing_eigenvalues(pencil)?;
    ev.truncate(count);
    Ok(ev)
}
