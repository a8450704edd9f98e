//! Triangulated links: storage, validation, generators and OFF text I/O.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::{Error, Result};

/// A triangulated surface embedded in `R^dim`.
///
/// Vertex coordinates are stored flat, `dim` values per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    dim: usize,
    coords: Vec<f64>,
    triangles: Vec<[usize; 3]>,
}

impl TriMesh {
    /// Builds a mesh, checking index ranges and rejecting degenerate
    /// triangles (area below `1e-14 * scale^2`).
    pub fn new(dim: usize, coords: Vec<f64>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidMesh(format!("embedding dimension {dim} < 2")));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidMesh(format!(
                "{} coordinates is not a multiple of dimension {dim}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidMesh("non-finite vertex coordinate".into()));
        }
        let mesh = TriMesh { dim, coords, triangles };
        let nv = mesh.num_vertices();
        for (t, tri) in mesh.triangles.iter().enumerate() {
            if tri.iter().any(|&i| i >= nv) {
                return Err(Error::InvalidMesh(format!("triangle {t} has a vertex index out of range")));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::InvalidMesh(format!("triangle {t} repeats a vertex")));
            }
        }
        let scale = mesh.scale();
        for t in 0..mesh.triangles.len() {
            if mesh.triangle_area(t) <= 1e-14 * scale * scale {
                return Err(Error::InvalidMesh(format!("triangle {t} is degenerate")));
            }
        }
        Ok(mesh)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vertices(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Diagonal of the axis-aligned bounding box.
    pub fn scale(&self) -> f64 {
        let nv = self.num_vertices();
        if nv == 0 {
            return 0.0;
        }
        (0..self.dim)
            .map(|k| {
                let (lo, hi) = (0..nv).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
                    let x = self.coords[i * self.dim + k];
                    (lo.min(x), hi.max(x))
                });
                (hi - lo).powi(2)
            })
            .sum::<f64>()
            .sqrt()
    }

    pub(crate) fn edge_vector(&self, from: usize, to: usize) -> Vec<f64> {
        self.vertex(to)
            .iter()
            .zip(self.vertex(from))
            .map(|(b, a)| b - a)
            .collect()
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [i, j, k] = self.triangles[t];
        let a = self.edge_vector(i, j);
        let b = self.edge_vector(i, k);
        0.5 * cross_norm(&a, &b)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.num_triangles()).map(|t| self.triangle_area(t)).sum()
    }

    /// Unique undirected edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|&[a, b, c]| [(a, b), (b, c), (c, a)])
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    /// Checks that the mesh is a closed, consistently oriented surface:
    /// each edge is used by exactly two triangles, in opposite directions.
    pub fn validate_closed(&self) -> Result<()> {
        if self.triangles.is_empty() {
            return Err(Error::InvalidMesh("mesh has no triangles".into()));
        }
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for &[a, b, c] in &self.triangles {
            for e in [(a, b), (b, c), (c, a)] {
                *directed.entry(e).or_insert(0) += 1;
            }
        }
        for (&(a, b), &n) in &directed {
            if n > 1 {
                return Err(Error::InvalidMesh(format!(
                    "edge ({a},{b}) is traversed {n} times in the same direction (non-manifold or inconsistent orientation)"
                )));
            }
            match directed.get(&(b, a)) {
                Some(1) => {}
                _ => {
                    return Err(Error::InvalidMesh(format!(
                        "edge ({a},{b}) is a boundary edge or not consistently oriented; the link must be closed"
                    )))
                }
            }
        }
        let used = {
            let mut used = vec![false; self.num_vertices()];
            for tri in &self.triangles {
                for &i in tri {
                    used[i] = true;
                }
            }
            used
        };
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::InvalidMesh(format!("vertex {i} belongs to no triangle")));
        }
        Ok(())
    }

    /// Number of connected components of the vertex-edge graph.
    pub fn components(&self) -> usize {
        let n = self.num_vertices();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (a, b) in self.edges() {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        (0..n).filter(|&i| find(&mut parent, i) == i).count()
    }

    /// Disjoint union of two meshes in the same ambient dimension.
    pub fn disjoint_union(&self, other: &TriMesh) -> Result<TriMesh> {
        if self.dim != other.dim {
            return Err(Error::InvalidMesh("cannot join meshes of different ambient dimension".into()));
        }
        let offset = self.num_vertices();
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        let mut triangles = self.triangles.clone();
        triangles.extend(other.triangles.iter().map(|t| t.map(|i| i + offset)));
        TriMesh::new(self.dim, coords, triangles)
    }

    /// Applies `f` to every vertex, keeping connectivity.
    pub fn map_vertices(&self, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> Result<TriMesh> {
        let mut coords = Vec::with_capacity(self.coords.len());
        let mut dim = None;
        for i in 0..self.num_vertices() {
            let p = f(self.vertex(i));
            match dim {
                None => dim = Some(p.len()),
                Some(d) if d != p.len() => {
                    return Err(Error::InvalidMesh("vertex map changed dimension between vertices".into()))
                }
                _ => {}
            }
            coords.extend(p);
        }
        TriMesh::new(dim.unwrap_or(self.dim), coords, self.triangles.clone())
    }

    /// Subdivided icosahedron projected onto the unit sphere in `R^3`.
    /// Level `l` has `10 * 4^l + 2` vertices.
    pub fn icosphere(level: usize) -> TriMesh {
        let t = (1.0 + 5f64.sqrt()) / 2.0;
        let mut verts: Vec<[f64; 3]> = [
            [-1.0, t, 0.0],
            [1.0, t, 0.0],
            [-1.0, -t, 0.0],
            [1.0, -t, 0.0],
            [0.0, -1.0, t],
            [0.0, 1.0, t],
            [0.0, -1.0, -t],
            [0.0, 1.0, -t],
            [t, 0.0, -1.0],
            [t, 0.0, 1.0],
            [-t, 0.0, -1.0],
            [-t, 0.0, 1.0],
        ]
        .iter()
        .map(|v| normalize3(*v))
        .collect();
        let mut faces: Vec<[usize; 3]> = vec![
            [0, 11, 5],
            [0, 5, 1],
            [0, 1, 7],
            [0, 7, 10],
            [0, 10, 11],
            [1, 5, 9],
            [5, 11, 4],
            [11, 10, 2],
            [10, 7, 6],
            [7, 1, 8],
            [3, 9, 4],
            [3, 4, 2],
            [3, 2, 6],
            [3, 6, 8],
            [3, 8, 9],
            [4, 9, 5],
            [2, 4, 11],
            [6, 2, 10],
            [8, 6, 7],
            [9, 8, 1],
        ];
        for _ in 0..level {
            let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
            let mut mid = |a: usize, b: usize, verts: &mut Vec<[f64; 3]>| -> usize {
                let key = (a.min(b), a.max(b));
                *midpoint.entry(key).or_insert_with(|| {
                    let (p, q) = (verts[a], verts[b]);
                    verts.push(normalize3([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                    verts.len() - 1
                })
            };
            let mut next = Vec::with_capacity(faces.len() * 4);
            for &[a, b, c] in &faces {
                let ab = mid(a, b, &mut verts);
                let bc = mid(b, c, &mut verts);
                let ca = mid(c, a, &mut verts);
                next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
            }
            faces = next;
        }
        let coords = verts.into_iter().flatten().collect();
        TriMesh::new(3, coords, faces).expect("icosphere construction is valid")
    }

    /// The flat torus `R^2 / (lx Z x ly Z)` sampled on an `nx x ny` grid and
    /// embedded isometrically (up to chord error) in `R^4` as a product of
    /// two circles.
    pub fn rectangular_torus(lx: f64, ly: f64, nx: usize, ny: usize) -> Result<TriMesh> {
        if nx < 3 || ny < 3 {
            return Err(Error::InvalidMesh("torus grid needs at least 3 cells per direction".into()));
        }
        if !(lx > 0.0 && ly > 0.0) {
            return Err(Error::InvalidMesh("torus periods must be positive".into()));
        }
        let (rx, ry) = (lx / (2.0 * PI), ly / (2.0 * PI));
        let mut coords = Vec::with_capacity(nx * ny * 4);
        for j in 0..ny {
            for i in 0..nx {
                let (a, b) = (2.0 * PI * i as f64 / nx as f64, 2.0 * PI * j as f64 / ny as f64);
                coords.extend([rx * a.cos(), rx * a.sin(), ry * b.cos(), ry * b.sin()]);
            }
        }
        TriMesh::new(4, coords, periodic_grid_triangles(nx, ny))
    }

    /// The Clifford torus link of the cone in `C^3`:
    /// `3^{-1/2} (e^{i t1}, e^{i t2}, e^{-i(t1+t2)})`, sampled on an `n x n`
    /// grid of `(t1, t2)`, embedded in `R^6`. The grid triangles are
    /// equilateral in the induced metric.
    pub fn clifford_torus(n: usize) -> Result<TriMesh> {
        if n < 3 {
            return Err(Error::InvalidMesh("Clifford torus grid needs n >= 3".into()));
        }
        let s = 1.0 / 3f64.sqrt();
        let mut coords = Vec::with_capacity(n * n * 6);
        for j in 0..n {
            for i in 0..n {
                let t1 = 2.0 * PI * i as f64 / n as f64;
                let t2 = 2.0 * PI * j as f64 / n as f64;
                let t3 = -(t1 + t2);
                for t in [t1, t2, t3] {
                    coords.extend([s * t.cos(), s * t.sin()]);
                }
            }
        }
        TriMesh::new(6, coords, periodic_grid_triangles(n, n))
    }

    /// Parses OFF text: an `OFF` header (optionally followed by the counts on
    /// the same line), a counts line `V F E`, `V` vertex lines of `d` floats
    /// and `F` face lines `3 i j k`. Blank lines and `#` comments are skipped.
    pub fn from_off_str(text: &str) -> Result<TriMesh> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty OFF input".into()))?;
        let mut head = header.split_whitespace();
        if head.next() != Some("OFF") {
            return Err(Error::Parse(format!("expected OFF header, found {header:?}")));
        }
        let rest: Vec<&str> = head.collect();
        let counts: Vec<&str> = if rest.is_empty() {
            lines
                .next()
                .ok_or_else(|| Error::Parse("missing OFF counts line".into()))?
                .split_whitespace()
                .collect()
        } else {
            rest
        };
        if counts.len() < 2 {
            return Err(Error::Parse("OFF counts line needs vertex and face counts".into()));
        }
        let nv: usize = parse_token(counts[0])?;
        let nf: usize = parse_token(counts[1])?;
        let mut dim = None;
        let mut coords = Vec::new();
        for v in 0..nv {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing vertex line {v}")))?;
            let xs: Vec<f64> = line.split_whitespace().map(parse_token).collect::<Result<_>>()?;
            match dim {
                None => dim = Some(xs.len()),
                Some(d) if d != xs.len() => {
                    return Err(Error::Parse(format!("vertex {v} has {} coordinates, expected {d}", xs.len())))
                }
                _ => {}
            }
            coords.extend(xs);
        }
        let mut triangles = Vec::with_capacity(nf);
        for f in 0..nf {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing face line {f}")))?;
            let idx: Vec<usize> = line.split_whitespace().map(parse_token).collect::<Result<_>>()?;
            if idx.len() != 4 || idx[0] != 3 {
                return Err(Error::Parse(format!("face {f} is not a triangle line \"3 i j k\"")));
            }
            triangles.push([idx[1], idx[2], idx[3]]);
        }
        TriMesh::new(dim.unwrap_or(3), coords, triangles)
    }

    pub fn to_off_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "OFF");
        let _ = writeln!(out, "{} {} 0", self.num_vertices(), self.num_triangles());
        for i in 0..self.num_vertices() {
            let line: Vec<String> = self.vertex(i).iter().map(|x| format!("{x:?}")).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        for [a, b, c] in &self.triangles {
            let _ = writeln!(out, "3 {a} {b} {c}");
        }
        out
    }
}

fn parse_token<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("cannot parse token {s:?}")))
}

fn periodic_grid_triangles(nx: usize, ny: usize) -> Vec<[usize; 3]> {
    let id = |i: usize, j: usize| (j % ny) * nx + (i % nx);
    let mut tris = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i, j + 1), id(i + 1, j + 1));
            tris.push([a, b, c]);
            tris.push([b, d, c]);
        }
    }
    tris
}

fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `|a x b|` in any dimension, via the Gram determinant.
pub(crate) fn cross_norm(a: &[f64], b: &[f64]) -> f64 {
    let (aa, bb, ab) = (dot(a, a), dot(b, b), dot(a, b));
    (aa * bb - ab * ab).max(0.0).sqrt()
}

pub(crate) fn dot_product(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b)
}
