//! Triangulations of a 2D parameter domain with a global oriented edge list.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::elements::REF_EDGES;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Boundary condition attached to a boundary edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryMarker {
    Clamped,
    Free,
    /// Symmetry plane with the given Cartesian normal.
    Symmetry(Axis),
}

impl FromStr for BoundaryMarker {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clamped" => Ok(Self::Clamped),
            "free" => Ok(Self::Free),
            "symmetry_x" => Ok(Self::Symmetry(Axis::X)),
            "symmetry_y" => Ok(Self::Symmetry(Axis::Y)),
            "symmetry_z" => Ok(Self::Symmetry(Axis::Z)),
            other => Err(Error::Config(format!("unknown boundary marker `{other}`"))),
        }
    }
}

impl fmt::Display for BoundaryMarker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Clamped => f.write_str("clamped"),
            Self::Free => f.write_str("free"),
            Self::Symmetry(Axis::X) => f.write_str("symmetry_x"),
            Self::Symmetry(Axis::Y) => f.write_str("symmetry_y"),
            Self::Symmetry(Axis::Z) => f.write_str("symmetry_z"),
        }
    }
}

/// `(#T, #E, #V, #V_B, #V_I)`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntityCounts {
    pub triangles: usize,
    pub edges: usize,
    pub vertices: usize,
    pub boundary_vertices: usize,
    pub interior_vertices: usize,
}

impl EntityCounts {
    /// `3 + #E == 2 #V + #V_I`, valid for triangulations of a disk.
    pub fn euler_relation_holds(&self) -> bool {
        3 + self.edges == 2 * self.vertices + self.interior_vertices
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    /// (low, high) global vertex indices
    edges: Vec<[usize; 2]>,
    /// Local edges E12, E13, E23 of each triangle.
    triangle_edges: Vec<[usize; 3]>,
    /// +1 when the local edge runs from the lower to the higher global vertex.
    triangle_edge_signs: Vec<[i8; 3]>,
    edge_triangles: Vec<Vec<usize>>,
    markers: Vec<Option<BoundaryMarker>>,
}

impl Mesh {
    /// Builds a mesh; clockwise triangles are reoriented, zero-area ones rejected.
    pub fn new(vertices: Vec<[f64; 2]>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let mut tris = triangles;
        for (t, tri) in tris.iter_mut().enumerate() {
            if tri.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::Structural(format!("triangle {t} references a missing vertex")));
            }
            let [a, b, c] = tri.map(|v| vertices[v]);
            let area2 = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
            if area2.abs() <= 1e-14 * (1.0 + a[0].abs() + a[1].abs()) {
                return Err(Error::Structural(format!("triangle {t} has zero area")));
            }
            if area2 < 0.0 {
                tri.swap(1, 2);
            }
        }
        let mut mesh = Self {
            vertices,
            triangles: tris,
            edges: Vec::new(),
            triangle_edges: Vec::new(),
            triangle_edge_signs: Vec::new(),
            edge_triangles: Vec::new(),
            markers: Vec::new(),
        };
        mesh.build_edges()?;
        Ok(mesh)
    }

    /// Populates the global edge list and triangle-edge incidence.
    pub fn build_edges(&mut self) -> Result<()> {
        let mut lookup: HashMap<[usize; 2], usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut edge_triangles: Vec<Vec<usize>> = Vec::new();
        let mut triangle_edges = Vec::with_capacity(self.triangles.len());
        let mut signs = Vec::with_capacity(self.triangles.len());
        for (t, tri) in self.triangles.iter().enumerate() {
            let mut te = [0; 3];
            let mut ts = [0; 3];
            for (le, [i, j]) in REF_EDGES.iter().enumerate() {
                let (a, b) = (tri[*i], tri[*j]);
                if a == b {
                    return Err(Error::Structural(format!("triangle {t} repeats vertex {a}")));
                }
                let key = [a.min(b), a.max(b)];
                let id = *lookup.entry(key).or_insert_with(|| {
                    edges.push(key);
                    edge_triangles.push(Vec::new());
                    edges.len() - 1
                });
                edge_triangles[id].push(t);
                if edge_triangles[id].len() > 2 {
                    return Err(Error::Structural(format!(
                        "edge ({}, {}) shared by more than two triangles",
                        key[0], key[1]
                    )));
                }
                te[le] = id;
                ts[le] = if a < b { 1 } else { -1 };
            }
            triangle_edges.push(te);
            signs.push(ts);
        }
        let mut markers = vec![None; edges.len()];
        // keep markers that were already attached
        for (old, marker) in self.edges.iter().zip(&self.markers) {
            if let (Some(m), Some(&id)) = (marker, lookup.get(old)) {
                markers[id] = Some(*m);
            }
        }
        self.edges = edges;
        self.edge_triangles = edge_triangles;
        self.triangle_edges = triangle_edges;
        self.triangle_edge_signs = signs;
        self.markers = markers;
        Ok(())
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.triangle_edges[t]
    }

    pub fn triangle_edge_signs(&self, t: usize) -> [i8; 3] {
        self.triangle_edge_signs[t]
    }

    pub fn edge_triangles(&self, e: usize) -> &[usize] {
        &self.edge_triangles[e]
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edge_triangles[e].len() == 1
    }

    pub fn marker(&self, e: usize) -> Option<BoundaryMarker> {
        self.markers[e]
    }

    pub fn find_edge(&self, a: usize, b: usize) -> Option<usize> {
        let key = [a.min(b), a.max(b)];
        self.edges.iter().position(|e| *e == key)
    }

    pub fn set_marker(&mut self, a: usize, b: usize, marker: BoundaryMarker) -> Result<()> {
        let e = self
            .find_edge(a, b)
            .ok_or_else(|| Error::Structural(format!("no edge ({a}, {b}) to mark")))?;
        if !self.is_boundary_edge(e) {
            return Err(Error::Structural(format!("edge ({a}, {b}) is not on the boundary")));
        }
        self.markers[e] = Some(marker);
        Ok(())
    }

    /// Marks each boundary edge by a rule evaluated at its two endpoints.
    pub fn mark_boundary_by<F>(&mut self, rule: F)
    where
        F: Fn([f64; 2], [f64; 2]) -> Option<BoundaryMarker>,
    {
        for e in 0..self.edges.len() {
            if self.is_boundary_edge(e) {
                let [a, b] = self.edges[e];
                if let Some(m) = rule(self.vertices[a], self.vertices[b]) {
                    self.markers[e] = Some(m);
                }
            }
        }
    }

    /// Splits every triangle into four through its edge midpoints.
    pub fn refine_uniform(&self) -> Mesh {
        let nv = self.vertices.len();
        let mut vertices = self.vertices.clone();
        for [a, b] in &self.edges {
            let (p, q) = (self.vertices[*a], self.vertices[*b]);
            vertices.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
        }
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for (t, tri) in self.triangles.iter().enumerate() {
            let [e12, e13, e23] = self.triangle_edges[t].map(|e| nv + e);
            let [a, b, c] = *tri;
            triangles.push([a, e12, e13]);
            triangles.push([e12, b, e23]);
            triangles.push([e13, e23, c]);
            triangles.push([e12, e23, e13]);
        }
        let mut fine = Mesh::new(vertices, triangles).expect("refinement of a valid mesh is valid");
        for (e, marker) in self.markers.iter().enumerate() {
            if let Some(m) = marker {
                let [a, b] = self.edges[e];
                let mid = nv + e;
                for end in [a, b] {
                    let fe = fine.find_edge(end, mid).expect("child edge exists");
                    fine.markers[fe] = Some(*m);
                }
            }
        }
        fine
    }

    pub fn counts(&self) -> EntityCounts {
        let mut on_boundary = vec![false; self.vertices.len()];
        for (e, [a, b]) in self.edges.iter().enumerate() {
            if self.is_boundary_edge(e) {
                on_boundary[*a] = true;
                on_boundary[*b] = true;
            }
        }
        let nb = on_boundary.iter().filter(|b| **b).count();
        EntityCounts {
            triangles: self.triangles.len(),
            edges: self.edges.len(),
            vertices: self.vertices.len(),
            boundary_vertices: nb,
            interior_vertices: self.vertices.len() - nb,
        }
    }

    /// Structured mesh of `[x0,x1]×[y0,y1]` with `nx×ny` cells, each cut along
    /// its lower-left to upper-right diagonal.
    pub fn structured_rectangle(x: [f64; 2], y: [f64; 2], nx: usize, ny: usize) -> Result<Mesh> {
        if nx == 0 || ny == 0 {
            return Err(Error::Config("structured mesh needs at least one cell per direction".into()));
        }
        let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            for i in 0..=nx {
                vertices.push([
                    x[0] + (x[1] - x[0]) * i as f64 / nx as f64,
                    y[0] + (y[1] - y[0]) * j as f64 / ny as f64,
                ]);
            }
        }
        let id = |i: usize, j: usize| j * (nx + 1) + i;
        let mut triangles = Vec::with_capacity(2 * nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                triangles.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                triangles.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        Mesh::new(vertices, triangles)
    }

    /// Parses the plain-text mesh format:
    ///
    /// ```text
    /// #V #T
    /// x y            (#V lines)
    /// i j k          (#T lines, 0-based)
    /// edge i j name  (optional boundary markers)
    /// ```
    pub fn parse(text: &str) -> Result<Mesh> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let bad = |what: &str| Error::Config(format!("malformed mesh file: {what}"));
        let header = lines.next().ok_or_else(|| bad("missing header"))?;
        let counts: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("header must be `#V #T`")))
            .collect::<Result<_>>()?;
        let [nv, nt] = counts[..] else {
            return Err(bad("header must be `#V #T`"));
        };
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let line = lines.next().ok_or_else(|| bad("too few vertex lines"))?;
            let v: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad("vertex line must be `x y`")))
                .collect::<Result<_>>()?;
            let [x, y] = v[..] else {
                return Err(bad("vertex line must be `x y`"));
            };
            vertices.push([x, y]);
        }
        let mut triangles = Vec::with_capacity(nt);
        for _ in 0..nt {
            let line = lines.next().ok_or_else(|| bad("too few triangle lines"))?;
            let v: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad("triangle line must be `i j k`")))
                .collect::<Result<_>>()?;
            let [a, b, c] = v[..] else {
                return Err(bad("triangle line must be `i j k`"));
            };
            triangles.push([a, b, c]);
        }
        let mut mesh = Mesh::new(vertices, triangles)?;
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts[..] {
                ["edge", i, j, name] => {
                    let i: usize = i.parse().map_err(|_| bad("edge index"))?;
                    let j: usize = j.parse().map_err(|_| bad("edge index"))?;
                    mesh.set_marker(i, j, name.parse()?)?;
                }
                _ => return Err(bad(&format!("unexpected line `{line}`"))),
            }
        }
        Ok(mesh)
    }

    pub fn read(path: &Path) -> Result<Mesh> {
        Mesh::parse(&std::fs::read_to_string(path)?)
    }

    /// Serializes into the import format (markers included).
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.vertices.len(), self.triangles.len());
        for [x, y] in &self.vertices {
            s.push_str(&format!("{x} {y}\n"));
        }
        for [a, b, c] in &self.triangles {
            s.push_str(&format!("{a} {b} {c}\n"));
        }
        for (e, m) in self.markers.iter().enumerate() {
            if let Some(m) = m {
                let [a, b] = self.edges[e];
                s.push_str(&format!("edge {a} {b} {m}\n"));
            }
        }
        s
    }
}

pub fn build_edges(mut mesh: Mesh) -> Result<Mesh> {
    mesh.build_edges()?;
    Ok(mesh)
}

pub fn refine_uniform(mesh: &Mesh) -> Mesh {
    mesh.refine_uniform()
}

pub fn count_entities(mesh: &Mesh) -> EntityCounts {
    mesh.counts()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_with_diagonals() -> Mesh {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]];
        let t = vec![[0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]];
        Mesh::new(v, t).unwrap()
    }

    #[test]
    fn edge_counts() {
        assert_eq!(square_with_diagonals().edges().len(), 8);
        let one = Mesh::new(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], vec![[0, 1, 2]]).unwrap();
        assert_eq!(one.edges().len(), 3);
        assert_eq!(
            one.counts(),
            EntityCounts { triangles: 1, edges: 3, vertices: 3, boundary_vertices: 3, interior_vertices: 0 }
        );
        let two = Mesh::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]], vec![[0, 1, 2], [0, 2, 3]]).unwrap();
        assert_eq!(two.edges().len(), 5);
    }

    #[test]
    fn euler_on_square() {
        let c = square_with_diagonals().counts();
        assert_eq!((c.triangles, c.edges, c.vertices, c.boundary_vertices, c.interior_vertices), (4, 8, 5, 4, 1));
        assert!(c.euler_relation_holds());
    }

    #[test]
    fn refinement_counts_and_ratio() {
        let mut m = square_with_diagonals();
        for _ in 0..4 {
            let c = m.counts();
            let f = m.refine_uniform();
            let cf = f.counts();
            assert_eq!(cf.triangles, 4 * c.triangles);
            assert_eq!(cf.vertices, c.vertices + c.edges);
            assert!(cf.euler_relation_holds());
            m = f;
        }
        let c = m.counts();
        let ratio = c.edges as f64 / c.triangles as f64;
        assert!((ratio - 1.5).abs() < 0.05, "{ratio}");
    }

    #[test]
    fn non_manifold_rejected() {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [0.5, 1.0], [0.5, -1.0], [1.5, 1.0]];
        let t = vec![[0, 1, 2], [1, 0, 3], [0, 1, 4]];
        assert!(matches!(Mesh::new(v, t), Err(Error::Structural(_))));
    }

    #[test]
    fn edge_signs_follow_global_order() {
        let m = square_with_diagonals();
        for (t, tri) in m.triangles().iter().enumerate() {
            for (le, [i, j]) in REF_EDGES.iter().enumerate() {
                let s = m.triangle_edge_signs(t)[le];
                assert_eq!(s == 1, tri[*i] < tri[*j]);
            }
        }
    }

    #[test]
    fn markers_survive_refinement_and_io() {
        let mut m = Mesh::structured_rectangle([0.0, 2.0], [0.0, 1.0], 2, 1).unwrap();
        m.mark_boundary_by(|a, b| (a[1] == 0.0 && b[1] == 0.0).then_some(BoundaryMarker::Clamped));
        let f = m.refine_uniform();
        let clamped = (0..f.edges().len()).filter(|&e| f.marker(e) == Some(BoundaryMarker::Clamped)).count();
        assert_eq!(clamped, 4);
        let back = Mesh::parse(&f.to_text()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn parse_errors() {
        assert!(Mesh::parse("").is_err());
        assert!(Mesh::parse("3 1\n0 0\n1 0\n0 1\n0 1 2\nedge 0 1 bogus\n").is_err());
        assert!(Mesh::parse("3 1\n0 0\n1 0\n0 1\n0 1 5\n").is_err());
        let m = Mesh::parse("3 1\n0 0\n1 0\n0 1\n0 1 2\nedge 0 1 clamped\n").unwrap();
        assert_eq!(m.marker(m.find_edge(0, 1).unwrap()), Some(BoundaryMarker::Clamped));
    }
}
