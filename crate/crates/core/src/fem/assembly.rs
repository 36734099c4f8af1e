//! Stiffness, volume mass and sloshing-boundary mass for P1 or P2 elements.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::mesh::{EdgeTag, TriangleMesh};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ElementOrder {
    P1,
    #[default]
    P2,
}

/// Symmetric sparse matrix in full CSR storage with sorted columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSym {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl SparseSym {
    fn from_triplets(n: usize, mut t: Vec<(usize, usize, f64)>) -> Self {
        t.sort_unstable_by_key(|e| (e.0, e.1));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(t.len());
        let mut vals: Vec<f64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { n, row_ptr, cols, vals }
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }
}

/// Degrees of freedom ordered interior first (by depth), then the
/// sloshing side (by `x`).
#[derive(Debug, Clone)]
pub struct DofLayout {
    pub order: ElementOrder,
    pub coords: Vec<[f64; 2]>,
    pub cells: Vec<Vec<usize>>,
    /// Sloshing edges as `[end, end]` (P1) or `[end, mid, end]` (P2).
    pub sloshing_edges: Vec<Vec<usize>>,
    pub n_interior: usize,
}

impl DofLayout {
    pub fn n_dofs(&self) -> usize {
        self.coords.len()
    }

    pub fn n_sloshing(&self) -> usize {
        self.coords.len() - self.n_interior
    }
}

pub fn build_layout(mesh: &TriangleMesh, order: ElementOrder) -> DofLayout {
    let nv = mesh.vertices.len();
    let mut coords = mesh.vertices.clone();
    let mut edge_dof: HashMap<(usize, usize), usize> = HashMap::new();
    let mut raw_cells = Vec::with_capacity(mesh.cells.len());
    for c in &mesh.cells {
        let mut local = c.to_vec();
        if order == ElementOrder::P2 {
            for k in 0..3 {
                let (a, b) = (c[k], c[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let d = *edge_dof.entry(key).or_insert_with(|| {
                    let (p, q) = (mesh.vertices[a], mesh.vertices[b]);
                    coords.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
                    coords.len() - 1
                });
                local.push(d);
            }
        }
        raw_cells.push(local);
    }
    let mut on_surface = vec![false; coords.len()];
    let mut raw_edges = Vec::new();
    for &(a, b, tag) in &mesh.boundary_edges {
        if tag != EdgeTag::Sloshing {
            continue;
        }
        let (a, b) = if mesh.vertices[a][0] <= mesh.vertices[b][0] { (a, b) } else { (b, a) };
        let e = match order {
            ElementOrder::P1 => vec![a, b],
            ElementOrder::P2 => vec![a, edge_dof[&(a.min(b), a.max(b))], b],
        };
        for &d in &e {
            on_surface[d] = true;
        }
        raw_edges.push(e);
    }
    debug_assert!(nv <= coords.len());

    let mut interior: Vec<usize> = (0..coords.len()).filter(|&d| !on_surface[d]).collect();
    interior.sort_by(|&a, &b| coords[a][1].total_cmp(&coords[b][1]).then(coords[a][0].total_cmp(&coords[b][0])));
    let mut surface: Vec<usize> = (0..coords.len()).filter(|&d| on_surface[d]).collect();
    surface.sort_by(|&a, &b| coords[a][0].total_cmp(&coords[b][0]));
    let n_interior = interior.len();
    let mut perm = vec![0usize; coords.len()];
    for (new, &old) in interior.iter().chain(surface.iter()).enumerate() {
        perm[old] = new;
    }
    let mut new_coords = vec![[0.0; 2]; coords.len()];
    for (old, &new) in perm.iter().enumerate() {
        new_coords[new] = coords[old];
    }
    DofLayout {
        order,
        coords: new_coords,
        cells: raw_cells.into_iter().map(|c| c.into_iter().map(|d| perm[d]).collect()).collect(),
        sloshing_edges: raw_edges.into_iter().map(|e| e.into_iter().map(|d| perm[d]).collect()).collect(),
        n_interior,
    }
}

// degree-4 rule on the reference triangle, weights summing to one
const QUAD: [(f64, f64, f64); 6] = [
    (0.445948490915965, 0.445948490915965, 0.223381589678011),
    (0.108103018168070, 0.445948490915965, 0.223381589678011),
    (0.445948490915965, 0.108103018168070, 0.223381589678011),
    (0.091576213509771, 0.091576213509771, 0.109951743655322),
    (0.816847572980459, 0.091576213509771, 0.109951743655322),
    (0.091576213509771, 0.816847572980459, 0.109951743655322),
];

/// Local stiffness and mass on a straight triangle.
fn element_matrices(p: [[f64; 2]; 3], order: ElementOrder, cell: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let area2 = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
    let diam2 = (0..3)
        .map(|k| {
            let (a, b) = (p[k], p[(k + 1) % 3]);
            (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
        })
        .fold(0.0, f64::max);
    if !(area2 > 1e-12 * diam2) {
        return Err(Error::SingularElement { cell });
    }
    let area = 0.5 * area2;
    let g = [
        [(p[1][1] - p[2][1]) / area2, (p[2][0] - p[1][0]) / area2],
        [(p[2][1] - p[0][1]) / area2, (p[0][0] - p[2][0]) / area2],
        [(p[0][1] - p[1][1]) / area2, (p[1][0] - p[0][0]) / area2],
    ];
    match order {
        ElementOrder::P1 => {
            let mut k = vec![0.0; 9];
            let mut m = vec![0.0; 9];
            for i in 0..3 {
                for j in 0..3 {
                    k[3 * i + j] = area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
                    m[3 * i + j] = area / 12.0 * if i == j { 2.0 } else { 1.0 };
                }
            }
            Ok((k, m))
        }
        ElementOrder::P2 => {
            let mut k = vec![0.0; 36];
            let mut m = vec![0.0; 36];
            for &(xi, eta, w) in &QUAD {
                let l = [1.0 - xi - eta, xi, eta];
                let mut phi = [0.0; 6];
                let mut grad = [[0.0; 2]; 6];
                for i in 0..3 {
                    phi[i] = l[i] * (2.0 * l[i] - 1.0);
                    for d in 0..2 {
                        grad[i][d] = (4.0 * l[i] - 1.0) * g[i][d];
                    }
                    let j = (i + 1) % 3;
                    phi[3 + i] = 4.0 * l[i] * l[j];
                    for d in 0..2 {
                        grad[3 + i][d] = 4.0 * (l[j] * g[i][d] + l[i] * g[j][d]);
                    }
                }
                let wa = w * area;
                for a in 0..6 {
                    for b in 0..6 {
                        k[6 * a + b] += wa * (grad[a][0] * grad[b][0] + grad[a][1] * grad[b][1]);
                        m[6 * a + b] += wa * phi[a] * phi[b];
                    }
                }
            }
            Ok((k, m))
        }
    }
}

/// Operators shared by every transverse wavenumber.
#[derive(Debug, Clone)]
pub struct FemOperators {
    pub layout: DofLayout,
    pub stiffness: SparseSym,
    pub mass: SparseSym,
    pub boundary_mass: SparseSym,
}

/// `(K + lambda^2 M) u = sigma B u`, sloshing DOFs last.
#[derive(Debug, Clone)]
pub struct EigPencil {
    pub lambda: f64,
    pub a: SparseSym,
    pub b: SparseSym,
    pub n_interior: usize,
}

impl FemOperators {
    pub fn assemble(mesh: &TriangleMesh, order: ElementOrder) -> Result<Self> {
        let layout = build_layout(mesh, order);
        let nl = layout.cells.first().map_or(0, Vec::len);
        let mut kt = Vec::with_capacity(layout.cells.len() * nl * nl);
        let mut mt = Vec::with_capacity(layout.cells.len() * nl * nl);
        for (ci, (cell, dofs)) in mesh.cells.iter().zip(&layout.cells).enumerate() {
            let p = [mesh.vertices[cell[0]], mesh.vertices[cell[1]], mesh.vertices[cell[2]]];
            let (k, m) = element_matrices(p, order, ci)?;
            for a in 0..nl {
                for b in 0..nl {
                    kt.push((dofs[a], dofs[b], k[nl * a + b]));
                    mt.push((dofs[a], dofs[b], m[nl * a + b]));
                }
            }
        }
        let mut bt = Vec::new();
        for e in &layout.sloshing_edges {
            let (a, b) = (layout.coords[e[0]], layout.coords[*e.last().unwrap()]);
            let len = (b[0] - a[0]).hypot(b[1] - a[1]);
            let local: &[f64] = match order {
                ElementOrder::P1 => &[2.0, 1.0, 1.0, 2.0],
                ElementOrder::P2 => &[4.0, 2.0, -1.0, 2.0, 16.0, 2.0, -1.0, 2.0, 4.0],
            };
            let scale = match order {
                ElementOrder::P1 => len / 6.0,
                ElementOrder::P2 => len / 30.0,
            };
            let n = e.len();
            for i in 0..n {
                for j in 0..n {
                    bt.push((e[i], e[j], scale * local[n * i + j]));
                }
            }
        }
        let n = layout.n_dofs();
        Ok(Self {
            stiffness: SparseSym::from_triplets(n, kt),
            mass: SparseSym::from_triplets(n, mt),
            boundary_mass: SparseSym::from_triplets(n, bt),
            layout,
        })
    }

    pub fn pencil(&self, lambda: f64) -> EigPencil {
        let l2 = lambda * lambda;
        let mut a = self.stiffness.clone();
        for (v, m) in a.vals.iter_mut().zip(&self.mass.vals) {
            *v += l2 * m;
        }
        EigPencil {
            lambda,
            a,
            b: self.boundary_mass.clone(),
            n_interior: self.layout.n_interior,
        }
    }
}

pub fn assemble_pencil(mesh: &TriangleMesh, lambda: f64, order: ElementOrder) -> Result<EigPencil> {
    Ok(FemOperators::assemble(mesh, order)?.pencil(lambda))
}
