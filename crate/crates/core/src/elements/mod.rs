//! Shape functions on the reference triangle and the maps that carry them
//! to physical (flat or surface) elements.
//!
//! Reference triangle: `V1 = (-1,0)`, `V2 = (1,0)`, `V3 = (0,1)`, area 1.
//! Local edges are ordered `E12, E13, E23`; each is parameterized by
//! `s ∈ [-1, 1]` running from its first to its second vertex.

pub mod lagrange;
pub mod pullback;
pub mod regge;

use nalgebra::Vector2;

pub use lagrange::{lagrange_shapes_eval, LagrangeBasis, NodeKind};
pub use pullback::{covariant_pullback, covariant_pullback_surface, dual_pullback_edge, dual_pullback_interior, pseudo_inverse};
pub use regge::{regge_shapes_eval, ReggeBasis};

pub const REF_VERTICES: [[f64; 2]; 3] = [[-1.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

/// Local vertex pairs of the three edges.
pub const REF_EDGES: [[usize; 2]; 3] = [[0, 1], [0, 2], [1, 2]];

/// Gradients of the barycentric coordinates, constant on the reference triangle.
pub const BARY_GRADS: [[f64; 2]; 3] = [[-0.5, -0.5], [0.5, -0.5], [0.0, 1.0]];

pub fn barycentric(p: [f64; 2]) -> [f64; 3] {
    let [x, y] = p;
    [0.5 * (1.0 - x - y), 0.5 * (1.0 + x - y), y]
}

pub fn bary_grad(i: usize) -> Vector2<f64> {
    Vector2::new(BARY_GRADS[i][0], BARY_GRADS[i][1])
}

/// Point on local edge `e` at parameter `s ∈ [-1, 1]`.
pub fn edge_point(e: usize, s: f64) -> [f64; 2] {
    let [i, j] = REF_EDGES[e];
    let (a, b) = (REF_VERTICES[i], REF_VERTICES[j]);
    let h = 0.5 * (s + 1.0);
    [a[0] + h * (b[0] - a[0]), a[1] + h * (b[1] - a[1])]
}

/// Un-normalized edge vector `V_j - V_i`.
pub fn edge_vector(e: usize) -> Vector2<f64> {
    let [i, j] = REF_EDGES[e];
    Vector2::new(REF_VERTICES[j][0] - REF_VERTICES[i][0], REF_VERTICES[j][1] - REF_VERTICES[i][1])
}

pub fn edge_length(e: usize) -> f64 {
    edge_vector(e).norm()
}

/// Unit tangent of local edge `e`.
pub fn edge_tangent(e: usize) -> Vector2<f64> {
    edge_vector(e).normalize()
}

/// True if `p` lies in the closed reference triangle (with tolerance).
pub fn in_reference_triangle(p: [f64; 2], tol: f64) -> bool {
    barycentric(p).iter().all(|l| *l >= -tol)
}
