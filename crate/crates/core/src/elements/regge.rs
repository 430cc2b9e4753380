//! Regge shape functions of order k on the reference triangle.
//!
//! Edge shapes (edge-major, moment index l = 0..=k):
//!
//! ```text
//! φ_{E_ij,l} = p̂_l((λ_i - λ_j)/(λ_i + λ_j)) (λ_i + λ_j)^l  ∇λ_i ⊙ ∇λ_j
//! ```
//!
//! Interior shapes for l1 + l2 <= k - 1, with (i, j, m) cycling through
//! (1,2,3), (2,3,1), (3,1,2):
//!
//! ```text
//! φ_{T^i,l1,l2} = w^{(l1,l2)} λ_i  ∇λ_j ⊙ ∇λ_m
//! ```
//!
//! Dual functionals: edge moments of the tt-trace against Legendre
//! polynomials `P_l(s)`, `l <= k`, and interior moments against
//! `w^{(l1,l2)} ∇λ_j ⊙ ∇λ_m`, `l1 + l2 <= k - 1`.

use super::{barycentric, bary_grad, REF_EDGES};
use crate::polynomials::{dubiner, scaled_integrated_jacobi_all, scaled_jacobi_all};
use crate::tensor::SymMatrix2;

const INTERIOR_CYCLE: [[usize; 3]; 3] = [[0, 1, 2], [1, 2, 0], [2, 0, 1]];

#[derive(Debug, Clone)]
pub struct ReggeBasis {
    order: usize,
    /// (l1, l2) pairs with l1 + l2 <= order - 1
    dubiner_index: Vec<(usize, usize)>,
    edge_dyads: [SymMatrix2; 3],
    interior_dyads: [SymMatrix2; 3],
}

impl ReggeBasis {
    pub fn new(order: usize) -> Self {
        let mut dubiner_index = Vec::new();
        for total in 0..order {
            for l2 in 0..=total {
                dubiner_index.push((total - l2, l2));
            }
        }
        let edge_dyads = REF_EDGES.map(|[i, j]| SymMatrix2::sym_dyad(&bary_grad(i), &bary_grad(j)));
        let interior_dyads = INTERIOR_CYCLE.map(|[_, j, m]| SymMatrix2::sym_dyad(&bary_grad(j), &bary_grad(m)));
        Self {
            order,
            dubiner_index,
            edge_dyads,
            interior_dyads,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `3 (k+1)(k+2) / 2`
    pub fn dim(&self) -> usize {
        self.n_edge() + self.n_interior()
    }

    pub fn n_edge(&self) -> usize {
        3 * (self.order + 1)
    }

    pub fn n_interior(&self) -> usize {
        3 * self.dubiner_index.len()
    }

    /// Edge shapes per edge (`k + 1`).
    pub fn n_per_edge(&self) -> usize {
        self.order + 1
    }

    pub fn eval(&self, p: [f64; 2]) -> Vec<SymMatrix2> {
        let mut out = Vec::with_capacity(self.dim());
        self.eval_into(p, &mut out);
        out
    }

    pub fn eval_into(&self, p: [f64; 2], out: &mut Vec<SymMatrix2>) {
        out.clear();
        let lam = barycentric(p);
        let mut ph = vec![0.0; self.order + 1];
        for (e, [i, j]) in REF_EDGES.iter().enumerate() {
            scaled_integrated_jacobi_all(0.0, lam[*i] - lam[*j], lam[*i] + lam[*j], &mut ph);
            for v in &ph {
                out.push(self.edge_dyads[e] * *v);
            }
        }
        if self.order == 0 {
            return;
        }
        let w: Vec<f64> = self.dubiner_index.iter().map(|&(l1, l2)| dubiner(l1, l2, p[0], p[1])).collect();
        for (c, [i, _, _]) in INTERIOR_CYCLE.iter().enumerate() {
            for wv in &w {
                out.push(self.interior_dyads[c] * (wv * lam[*i]));
            }
        }
    }

    /// Legendre edge test polynomials `P_l(s)`, `l = 0..=k`.
    pub fn edge_tests(&self, s: f64, out: &mut [f64]) {
        scaled_jacobi_all(0.0, s, 1.0, &mut out[..self.order + 1]);
    }

    /// Interior test tensors spanning `[Π^{k-1}]_sym`, same ordering as the interior shapes.
    pub fn interior_tests(&self, p: [f64; 2]) -> Vec<SymMatrix2> {
        let w: Vec<f64> = self.dubiner_index.iter().map(|&(l1, l2)| dubiner(l1, l2, p[0], p[1])).collect();
        let mut out = Vec::with_capacity(self.n_interior());
        for dyad in &self.interior_dyads {
            for wv in &w {
                out.push(*dyad * *wv);
            }
        }
        out
    }
}

/// All `3(k+1)(k+2)/2` Regge shapes of order `k` at `point`, edge-major then interior.
pub fn regge_shapes_eval(k: usize, point: [f64; 2]) -> Vec<SymMatrix2> {
    ReggeBasis::new(k).eval(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::{edge_point, edge_tangent};
    use crate::quadrature::{segment_rule, triangle_rule};
    use nalgebra::DMatrix;

    #[test]
    fn lowest_order_shapes() {
        let shapes = regge_shapes_eval(0, [0.1, 0.3]);
        assert_eq!(shapes.len(), 3);
        // E12: ∇λ1 ⊙ ∇λ2 with λ1 = (1-x-y)/2, λ2 = (1+x-y)/2
        let e12 = shapes[0];
        assert!((e12.a11 + 0.25).abs() < 1e-15 && e12.a12.abs() < 1e-15 && (e12.a22 - 0.25).abs() < 1e-15);
        assert_eq!(regge_shapes_eval(1, [0.0, 0.2]).len(), 9);
        // E12 shape has no tt-trace along E13
        let t13 = edge_tangent(1);
        assert!(e12.tt(&t13).abs() < 1e-15);
    }

    #[test]
    fn dimension_formula() {
        for k in 0..=6 {
            let b = ReggeBasis::new(k);
            assert_eq!(b.dim(), 3 * (k + 1) * (k + 2) / 2);
            assert_eq!(b.eval([0.0, 0.3]).len(), b.dim());
        }
    }

    #[test]
    fn edge_and_interior_tt_locality() {
        let rule = segment_rule(12);
        for k in 0..=4 {
            let b = ReggeBasis::new(k);
            for e in 0..3 {
                let t = edge_tangent(e);
                for (s, _) in rule.iter() {
                    let shapes = b.eval(edge_point(e, s[0]));
                    for (idx, phi) in shapes.iter().enumerate() {
                        let own_edge = if idx < b.n_edge() { Some(idx / b.n_per_edge()) } else { None };
                        if own_edge != Some(e) {
                            assert!(phi.tt(&t).abs() < 1e-13, "k={k} edge={e} shape={idx}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gram_matrix_full_rank() {
        let rule = triangle_rule(12);
        for k in 0..=4 {
            let b = ReggeBasis::new(k);
            let n = b.dim();
            let mut gram = DMatrix::<f64>::zeros(n, n);
            for (p, w) in rule.iter() {
                let s = b.eval(*p);
                for i in 0..n {
                    for j in 0..n {
                        gram[(i, j)] += w * s[i].frobenius(&s[j]);
                    }
                }
            }
            let sv = gram.singular_values();
            let smax = sv.max();
            let smin = sv.min();
            assert!(smin > 1e-10 * smax, "k={k}: smin={smin} smax={smax}");
        }
    }
}
