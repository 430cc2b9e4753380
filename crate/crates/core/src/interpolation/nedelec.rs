//! Tangential-moment interpolation of 1-forms into the full polynomial space
//! `[Π^m]²` (Nédélec second kind), `m >= 1`.
//!
//! Degrees of freedom: tangential edge moments against `P_l`, `l <= m`, and
//! interior moments against `[Π^{m-2}]² ⊕ x Π̃^{m-2}`. For `m = 0`, where the
//! second-kind space does not exist, the lowest-order first-kind space
//! `{a + b x^⊥}` with its three edge moments is used.

use nalgebra::{DMatrix, DVector, Vector2};

use super::dual_mass::checked_lu;
use crate::elements::{edge_length, edge_point, edge_tangent};
use crate::error::{Error, Result};
use crate::polynomials::scaled_jacobi_all;
use crate::quadrature::{segment_rule, triangle_rule, TriangleRule};

const Y_SHIFT: f64 = 1.0 / 3.0;

fn monomials(max_degree: usize) -> Vec<(i32, i32)> {
    let mut out = Vec::new();
    for total in 0..=max_degree as i32 {
        for b in 0..=total {
            out.push((total - b, b));
        }
    }
    out
}

fn mono(p: [f64; 2], (a, b): (i32, i32)) -> f64 {
    p[0].powi(a) * (p[1] - Y_SHIFT).powi(b)
}

fn shapes(m: usize, p: [f64; 2]) -> Vec<Vector2<f64>> {
    if m == 0 {
        return vec![Vector2::new(1.0, 0.0), Vector2::new(0.0, 1.0), Vector2::new(Y_SHIFT - p[1], p[0])];
    }
    shapes_full(m, p)
}

fn shapes_full(m: usize, p: [f64; 2]) -> Vec<Vector2<f64>> {
    let mut out = Vec::new();
    for e in monomials(m) {
        let v = mono(p, e);
        out.push(Vector2::new(v, 0.0));
        out.push(Vector2::new(0.0, v));
    }
    out
}

fn interior_tests(m: usize, p: [f64; 2]) -> Vec<Vector2<f64>> {
    if m < 2 {
        return Vec::new();
    }
    let mut out = shapes_full(m - 2, p);
    let xs = Vector2::new(p[0], p[1] - Y_SHIFT);
    for b in 0..=(m - 2) as i32 {
        out.push(xs * mono(p, (m as i32 - 2 - b, b)));
    }
    out
}

fn space_dim(m: usize) -> usize {
    if m == 0 {
        3
    } else {
        (m + 1) * (m + 2)
    }
}

/// Interpolation of reference covariant vector fields (`γ̂ = Fᵀ γ`).
#[derive(Debug, Clone)]
pub struct TangentialInterpolator {
    order: usize,
    sample_points: Vec<[f64; 2]>,
    eval_points: Vec<[f64; 2]>,
    coeff_map: DMatrix<f64>,
    apply: DMatrix<f64>,
}

impl TangentialInterpolator {
    pub fn new(order: usize, functional_degree: usize, eval_rule: &TriangleRule) -> Result<Self> {
        let n = space_dim(order);
        let np = order + 1;
        let n_edge = 3 * np;
        // reference dual matrix, exact with degree-2m rules
        let mut dual = DMatrix::zeros(n, n);
        let mut legendre = vec![0.0; np];
        let seg = segment_rule(2 * order);
        for e in 0..3 {
            let t = edge_tangent(e);
            let half = 0.5 * edge_length(e);
            for (s, w) in seg.iter() {
                scaled_jacobi_all(0.0, s[0], 1.0, &mut legendre);
                for (j, phi) in shapes(order, edge_point(e, s[0])).iter().enumerate() {
                    for (l, q) in legendre.iter().enumerate() {
                        dual[(e * np + l, j)] += w * half * q * phi.dot(&t);
                    }
                }
            }
        }
        for (p, w) in triangle_rule(2 * order).iter() {
            let sh = shapes(order, *p);
            for (i, r) in interior_tests(order, *p).iter().enumerate() {
                for (j, phi) in sh.iter().enumerate() {
                    dual[(n_edge + i, j)] += w * r.dot(phi);
                }
            }
        }
        let lu = checked_lu(dual, "tangential dual matrix")?;

        let seg = segment_rule(functional_degree);
        let tri = triangle_rule(functional_degree);
        let mut sample_points = Vec::new();
        for e in 0..3 {
            sample_points.extend(seg.points.iter().map(|s| edge_point(e, s[0])));
        }
        sample_points.extend(tri.points.iter().copied());
        let mut functional = DMatrix::zeros(n, 2 * sample_points.len());
        let mut p = 0;
        for e in 0..3 {
            let t = edge_tangent(e);
            let half = 0.5 * edge_length(e);
            for (s, w) in seg.iter() {
                scaled_jacobi_all(0.0, s[0], 1.0, &mut legendre);
                for (l, q) in legendre.iter().enumerate() {
                    functional[(e * np + l, 2 * p)] = w * half * q * t.x;
                    functional[(e * np + l, 2 * p + 1)] = w * half * q * t.y;
                }
                p += 1;
            }
        }
        for (pt, w) in tri.iter() {
            for (i, r) in interior_tests(order, *pt).iter().enumerate() {
                functional[(n_edge + i, 2 * p)] = w * r.x;
                functional[(n_edge + i, 2 * p + 1)] = w * r.y;
            }
            p += 1;
        }
        let coeff_map = lu.solve(&functional).expect("factor checked");
        let eval_points = eval_rule.points.clone();
        let mut table = DMatrix::zeros(2 * eval_points.len(), n);
        for (q, pt) in eval_points.iter().enumerate() {
            for (j, phi) in shapes(order, *pt).iter().enumerate() {
                table[(2 * q, j)] = phi.x;
                table[(2 * q + 1, j)] = phi.y;
            }
        }
        let apply = table * &coeff_map;
        Ok(Self {
            order,
            sample_points,
            eval_points,
            coeff_map,
            apply,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        space_dim(self.order)
    }

    pub fn sample_points(&self) -> &[[f64; 2]] {
        &self.sample_points
    }

    pub fn eval_points(&self) -> &[[f64; 2]] {
        &self.eval_points
    }

    /// (2 · eval points) × (2 · samples).
    pub fn apply_matrix(&self) -> &DMatrix<f64> {
        &self.apply
    }

    pub fn apply(&self, samples: &[Vector2<f64>]) -> Result<Vec<Vector2<f64>>> {
        if samples.len() != self.sample_points.len() {
            return Err(Error::Config(format!(
                "expected {} samples, got {}",
                self.sample_points.len(),
                samples.len()
            )));
        }
        let s = DVector::from_iterator(2 * samples.len(), samples.iter().flat_map(|v| [v.x, v.y]));
        let out = &self.apply * s;
        Ok((0..self.eval_points.len()).map(|q| Vector2::new(out[2 * q], out[2 * q + 1])).collect())
    }

    /// Coefficients in the monomial basis (for diagnostics).
    pub fn coefficients(&self, samples: &[Vector2<f64>]) -> DVector<f64> {
        let s = DVector::from_iterator(2 * samples.len(), samples.iter().flat_map(|v| [v.x, v.y]));
        &self.coeff_map * s
    }
}
