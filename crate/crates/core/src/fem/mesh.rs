//! Conforming triangle meshes of the prism cross-section, built by
//! newest-vertex bisection against a corner-graded size function.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::PrismConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeTag {
    Sloshing,
    Wall,
}

impl EdgeTag {
    fn as_str(self) -> &'static str {
        match self {
            EdgeTag::Sloshing => "sloshing",
            EdgeTag::Wall => "wall",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleMesh {
    pub vertices: Vec<[f64; 2]>,
    /// Counter-clockwise vertex triples.
    pub cells: Vec<[usize; 3]>,
    pub boundary_edges: Vec<(usize, usize, EdgeTag)>,
    pub h: f64,
    pub grading: f64,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn dist(p: [f64; 2], q: [f64; 2]) -> f64 {
    (p[0] - q[0]).hypot(p[1] - q[1])
}

fn signed_area(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> f64 {
    0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]))
}

/// Target element size: `h / grading` within `L/10` of a corner, `h`
/// beyond `2L/10`, linear in between.
struct SizeField {
    corners: [[f64; 2]; 3],
    inner: f64,
    outer: f64,
    h: f64,
    grading: f64,
}

impl SizeField {
    fn at(&self, p: [f64; 2]) -> f64 {
        let d = self
            .corners
            .iter()
            .map(|&c| dist(c, p))
            .fold(f64::INFINITY, f64::min);
        let fine = self.h / self.grading;
        if d <= self.inner {
            fine
        } else if d >= self.outer {
            self.h
        } else {
            fine + (self.h - fine) * (d - self.inner) / (self.outer - self.inner)
        }
    }
}

fn diameter(v: &[[f64; 2]], c: &[usize; 3]) -> f64 {
    dist(v[c[0]], v[c[1]])
        .max(dist(v[c[1]], v[c[2]]))
        .max(dist(v[c[2]], v[c[0]]))
}

/// Meshes the cross-section with element diameters at most `h`, and at
/// most `h / grading` next to each of the three corners.
pub fn generate_mesh(cfg: &PrismConfig, h: f64, grading: f64) -> Result<TriangleMesh> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("mesh size must be positive, got {h}")));
    }
    if !(grading >= 1.0 && grading.is_finite()) {
        return Err(Error::InvalidArgument(format!("grading must be at least 1, got {grading}")));
    }
    let l = cfg.length();
    let apex = cfg.apex();
    if !(apex.1 < 0.0 && apex.0.is_finite() && apex.1.is_finite()) {
        return Err(Error::DegenerateTriangle);
    }
    let mut vertices = vec![[0.0, 0.0], [l, 0.0], [apex.0, apex.1]];
    // newest vertex first; the refinement edge is the opposite side
    let sides = [dist(vertices[1], vertices[2]), dist(vertices[2], vertices[0]), dist(vertices[0], vertices[1])];
    let longest = (0..3).max_by(|&a, &b| sides[a].total_cmp(&sides[b])).unwrap();
    let mut cells = vec![[longest, (longest + 1) % 3, (longest + 2) % 3]];
    let size = SizeField {
        corners: [vertices[0], vertices[1], vertices[2]],
        inner: l / 10.0,
        outer: 2.0 * l / 10.0,
        h,
        grading,
    };
    let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();

    loop {
        let mut marked: HashSet<(usize, usize)> = cells
            .iter()
            .filter(|c| {
                let centroid = [
                    (vertices[c[0]][0] + vertices[c[1]][0] + vertices[c[2]][0]) / 3.0,
                    (vertices[c[0]][1] + vertices[c[1]][1] + vertices[c[2]][1]) / 3.0,
                ];
                diameter(&vertices, c) > size.at(centroid)
            })
            .map(|c| edge_key(c[1], c[2]))
            .collect();
        if marked.is_empty() {
            break;
        }
        // closure: a cell with any marked edge must split its refinement edge
        loop {
            let mut added = false;
            for c in &cells {
                let refine = edge_key(c[1], c[2]);
                if marked.contains(&refine) {
                    continue;
                }
                if marked.contains(&edge_key(c[0], c[1])) || marked.contains(&edge_key(c[2], c[0])) {
                    marked.insert(refine);
                    added = true;
                }
            }
            if !added {
                break;
            }
        }
        let mut stack = std::mem::take(&mut cells);
        while let Some(c) = stack.pop() {
            let key = edge_key(c[1], c[2]);
            if !marked.contains(&key) {
                cells.push(c);
                continue;
            }
            let m = *midpoints.entry(key).or_insert_with(|| {
                let (p, q) = (vertices[c[1]], vertices[c[2]]);
                vertices.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
                vertices.len() - 1
            });
            stack.push([m, c[0], c[1]]);
            stack.push([m, c[2], c[0]]);
        }
    }

    for c in &mut cells {
        if signed_area(vertices[c[0]], vertices[c[1]], vertices[c[2]]) < 0.0 {
            c.swap(1, 2);
        }
    }
    cells.sort_unstable();
    let boundary_edges = tag_boundary(&vertices, &cells);
    Ok(TriangleMesh {
        vertices,
        cells,
        boundary_edges,
        h,
        grading,
    })
}

fn tag_boundary(vertices: &[[f64; 2]], cells: &[[usize; 3]]) -> Vec<(usize, usize, EdgeTag)> {
    let mut count: HashMap<(usize, usize), (usize, usize, u32)> = HashMap::new();
    for c in cells {
        for k in 0..3 {
            let (a, b) = (c[k], c[(k + 1) % 3]);
            count.entry(edge_key(a, b)).or_insert((a, b, 0)).2 += 1;
        }
    }
    let mut edges: Vec<(usize, usize, EdgeTag)> = count
        .into_values()
        .filter(|e| e.2 == 1)
        .map(|(a, b, _)| {
            let tag = if vertices[a][1] == 0.0 && vertices[b][1] == 0.0 {
                EdgeTag::Sloshing
            } else {
                EdgeTag::Wall
            };
            (a, b, tag)
        })
        .collect();
    edges.sort_unstable_by_key(|e| (e.0, e.1));
    edges
}

impl TriangleMesh {
    pub fn cell_area(&self, c: usize) -> f64 {
        let t = self.cells[c];
        signed_area(self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]])
    }

    pub fn cell_diameter(&self, c: usize) -> f64 {
        diameter(&self.vertices, &self.cells[c])
    }

    /// Vertices on the sloshing side, sorted by `x`.
    pub fn sloshing_vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .boundary_edges
            .iter()
            .filter(|e| e.2 == EdgeTag::Sloshing)
            .flat_map(|e| [e.0, e.1])
            .collect();
        v.sort_unstable();
        v.dedup();
        v.sort_by(|&a, &b| self.vertices[a][0].total_cmp(&self.vertices[b][0]));
        v
    }

    /// Text form: a header `nv nc nb h grading`, then vertex lines `x y`,
    /// cell lines `a b c`, and boundary lines `i j tag`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} {} {} {:e} {:e}",
            self.vertices.len(),
            self.cells.len(),
            self.boundary_edges.len(),
            self.h,
            self.grading
        );
        for v in &self.vertices {
            let _ = writeln!(s, "{:e} {:e}", v[0], v[1]);
        }
        for c in &self.cells {
            let _ = writeln!(s, "{} {} {}", c[0], c[1], c[2]);
        }
        for e in &self.boundary_edges {
            let _ = writeln!(s, "{} {} {}", e.0, e.1, e.2.as_str());
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |what: &str| Error::MeshFormat(what.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<&str> = lines.next().ok_or_else(|| bad("empty input"))?.split_whitespace().collect();
        if header.len() != 5 {
            return Err(bad("header needs five fields"));
        }
        let parse_usize = |s: &str| s.parse::<usize>().map_err(|_| bad(&format!("bad integer {s:?}")));
        let parse_f64 = |s: &str| s.parse::<f64>().map_err(|_| bad(&format!("bad number {s:?}")));
        let (nv, nc, nb) = (parse_usize(header[0])?, parse_usize(header[1])?, parse_usize(header[2])?);
        let (h, grading) = (parse_f64(header[3])?, parse_f64(header[4])?);
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let f: Vec<&str> = lines.next().ok_or_else(|| bad("missing vertex"))?.split_whitespace().collect();
            if f.len() != 2 {
                return Err(bad("vertex line needs two fields"));
            }
            vertices.push([parse_f64(f[0])?, parse_f64(f[1])?]);
        }
        let mut cells = Vec::with_capacity(nc);
        for _ in 0..nc {
            let f: Vec<&str> = lines.next().ok_or_else(|| bad("missing cell"))?.split_whitespace().collect();
            if f.len() != 3 {
                return Err(bad("cell line needs three fields"));
            }
            let c = [parse_usize(f[0])?, parse_usize(f[1])?, parse_usize(f[2])?];
            if c.iter().any(|&i| i >= nv) {
                return Err(bad("cell references a missing vertex"));
            }
            cells.push(c);
        }
        let mut boundary_edges = Vec::with_capacity(nb);
        for _ in 0..nb {
            let f: Vec<&str> = lines.next().ok_or_else(|| bad("missing boundary edge"))?.split_whitespace().collect();
            if f.len() != 3 {
                return Err(bad("boundary line needs three fields"));
            }
            let tag = match f[2] {
                "sloshing" => EdgeTag::Sloshing,
                "wall" => EdgeTag::Wall,
                other => return Err(bad(&format!("unknown tag {other:?}"))),
            };
            boundary_edges.push((parse_usize(f[0])?, parse_usize(f[1])?, tag));
        }
        if lines.next().is_some() {
            return Err(bad("trailing content"));
        }
        Ok(Self {
            vertices,
            cells,
            boundary_edges,
            h,
            grading,
        })
    }
}
