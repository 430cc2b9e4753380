//! Nodal H1 basis of order k on the reference triangle.

use nalgebra::DMatrix;

use super::{barycentric, REF_EDGES, REF_VERTICES};
use crate::error::{Error, Result};

/// Topological association of a Lagrange node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Vertex(usize),
    /// `index` counts from the edge's first vertex (1-based along the edge).
    Edge { edge: usize, index: usize },
    Interior(usize),
}

/// Equispaced nodal basis; nodes ordered vertices, edge nodes (E12, E13, E23,
/// each from first to second vertex), interior nodes.
#[derive(Debug, Clone)]
pub struct LagrangeBasis {
    order: usize,
    nodes: Vec<[f64; 2]>,
    kinds: Vec<NodeKind>,
    exponents: Vec<(i32, i32)>,
    /// Column i holds the monomial coefficients of shape i.
    coeffs: DMatrix<f64>,
}

const Y_SHIFT: f64 = 1.0 / 3.0;

impl LagrangeBasis {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::Domain("Lagrange order must be >= 1".into()));
        }
        let k = order as f64;
        let mut nodes = Vec::new();
        let mut kinds = Vec::new();
        for (v, p) in REF_VERTICES.iter().enumerate() {
            nodes.push(*p);
            kinds.push(NodeKind::Vertex(v));
        }
        for (e, [i, j]) in REF_EDGES.iter().enumerate() {
            for m in 1..order {
                let h = m as f64 / k;
                let (a, b) = (REF_VERTICES[*i], REF_VERTICES[*j]);
                nodes.push([a[0] + h * (b[0] - a[0]), a[1] + h * (b[1] - a[1])]);
                kinds.push(NodeKind::Edge { edge: e, index: m });
            }
        }
        let mut count = 0;
        for a in 1..order {
            for b in 1..order - a {
                let c = order - a - b;
                let (l1, l2, l3) = (a as f64 / k, b as f64 / k, c as f64 / k);
                let x = l1 * REF_VERTICES[0][0] + l2 * REF_VERTICES[1][0] + l3 * REF_VERTICES[2][0];
                let y = l1 * REF_VERTICES[0][1] + l2 * REF_VERTICES[1][1] + l3 * REF_VERTICES[2][1];
                nodes.push([x, y]);
                kinds.push(NodeKind::Interior(count));
                count += 1;
            }
        }
        let mut exponents = Vec::new();
        for total in 0..=order as i32 {
            for b in 0..=total {
                exponents.push((total - b, b));
            }
        }
        let n = nodes.len();
        debug_assert_eq!(n, exponents.len());
        let vand = DMatrix::from_fn(n, n, |i, j| {
            let (a, b) = exponents[j];
            nodes[i][0].powi(a) * (nodes[i][1] - Y_SHIFT).powi(b)
        });
        let coeffs = vand
            .try_inverse()
            .ok_or_else(|| Error::Degenerate(format!("singular Lagrange Vandermonde for order {order}")))?;
        Ok(Self {
            order,
            nodes,
            kinds,
            exponents,
            coeffs,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn kinds(&self) -> &[NodeKind] {
        &self.kinds
    }

    /// Shape values at `p`.
    pub fn eval(&self, p: [f64; 2]) -> Vec<f64> {
        let mut vals = vec![0.0; self.len()];
        let mut grads = vec![[0.0; 2]; self.len()];
        self.eval_with_grad(p, &mut vals, &mut grads);
        vals
    }

    /// Shape values and reference gradients at `p`.
    pub fn eval_with_grad(&self, p: [f64; 2], vals: &mut [f64], grads: &mut [[f64; 2]]) {
        let x = p[0];
        let y = p[1] - Y_SHIFT;
        let n = self.len();
        let mono: Vec<(f64, f64, f64)> = self
            .exponents
            .iter()
            .map(|&(a, b)| {
                let v = x.powi(a) * y.powi(b);
                let dx = if a > 0 { a as f64 * x.powi(a - 1) * y.powi(b) } else { 0.0 };
                let dy = if b > 0 { b as f64 * x.powi(a) * y.powi(b - 1) } else { 0.0 };
                (v, dx, dy)
            })
            .collect();
        for i in 0..n {
            let (mut v, mut gx, mut gy) = (0.0, 0.0, 0.0);
            for (j, (m, mx, my)) in mono.iter().enumerate() {
                let c = self.coeffs[(j, i)];
                v += c * m;
                gx += c * mx;
                gy += c * my;
            }
            vals[i] = v;
            grads[i] = [gx, gy];
        }
    }

    /// Barycentric coordinates of node `i`; handy for building nodes on a mapped triangle.
    pub fn node_barycentric(&self, i: usize) -> [f64; 3] {
        barycentric(self.nodes[i])
    }
}

/// Values of all order-k nodal shapes at `point`.
pub fn lagrange_shapes_eval(k: usize, point: [f64; 2]) -> Result<Vec<f64>> {
    Ok(LagrangeBasis::new(k)?.eval(point))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_and_counts() {
        let vals = lagrange_shapes_eval(1, [1.0, 0.0]).unwrap();
        assert_eq!(vals.len(), 3);
        for (v, want) in vals.iter().zip([0.0, 1.0, 0.0]) {
            assert!((v - want).abs() < 1e-14);
        }
        for k in 1..=5 {
            let basis = LagrangeBasis::new(k).unwrap();
            assert_eq!(basis.len(), (k + 1) * (k + 2) / 2);
            for (l, node) in basis.nodes().iter().enumerate() {
                let vals = basis.eval(*node);
                for (i, v) in vals.iter().enumerate() {
                    let want = if i == l { 1.0 } else { 0.0 };
                    assert!((v - want).abs() < 1e-11, "k={k}");
                }
            }
        }
        assert_eq!(lagrange_shapes_eval(2, [0.1, 0.2]).unwrap().len(), 6);
    }

    #[test]
    fn partition_of_unity_and_gradients() {
        for k in 1..=4 {
            let basis = LagrangeBasis::new(k).unwrap();
            let n = basis.len();
            let mut vals = vec![0.0; n];
            let mut grads = vec![[0.0; 2]; n];
            for p in [[0.1, 0.2], [-0.4, 0.3], [0.0, 0.9]] {
                basis.eval_with_grad(p, &mut vals, &mut grads);
                assert!((vals.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                let gx: f64 = grads.iter().map(|g| g[0]).sum();
                let gy: f64 = grads.iter().map(|g| g[1]).sum();
                assert!(gx.abs() < 1e-11 && gy.abs() < 1e-11);
                // reproduces x exactly: sum x_i grad N_i = e_x
                let dxx: f64 = basis.nodes().iter().zip(&grads).map(|(q, g)| q[0] * g[0]).sum();
                assert!((dxx - 1.0).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn order_zero_rejected() {
        assert!(LagrangeBasis::new(0).is_err());
    }
}
