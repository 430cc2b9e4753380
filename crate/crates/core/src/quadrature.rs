//! Gauss rules on the reference segment [-1, 1] and on the reference
//! triangle with vertices (-1,0), (1,0), (0,1).
//!
//! Triangle rules are collapsed tensor rules: Gauss-Legendre in the
//! collapsed direction times Gauss-Jacobi (alpha = 1) in `y`, which absorbs
//! the Jacobian of the Duffy map.

use nalgebra::{DMatrix, SymmetricEigen};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<const D: usize> {
    pub points: Vec<[f64; D]>,
    pub weights: Vec<f64>,
    /// Polynomial degree integrated exactly.
    pub exactness: usize,
}

pub type SegmentRule = QuadratureRule<1>;
pub type TriangleRule = QuadratureRule<2>;

impl<const D: usize> QuadratureRule<D> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64; D], f64)> + '_ {
        self.points.iter().zip(self.weights.iter().copied())
    }
}

/// Gauss-Jacobi nodes and weights for the weight `(1 - x)^alpha` on [-1, 1]
/// (Golub-Welsch).
fn gauss_jacobi(n: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let a = alpha;
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let k = i as f64;
        let c = 2.0 * k + a;
        jm[(i, i)] = if i == 0 { -a / (a + 2.0) } else { -a * a / (c * (c + 2.0)) };
        if i + 1 < n {
            let k1 = k + 1.0;
            let c1 = 2.0 * k1 + a;
            let b = (4.0 * k1 * (k1 + a) * k1 * (k1 + a) / (c1 * c1 * (c1 + 1.0) * (c1 - 1.0))).sqrt();
            jm[(i, i + 1)] = b;
            jm[(i + 1, i)] = b;
        }
    }
    let mu0 = 2f64.powf(a + 1.0) / (a + 1.0);
    let eig = SymmetricEigen::new(jm);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    // symmetrize the Legendre case to kill eigen-solver noise
    if a == 0.0 {
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let x = 0.5 * (pairs[j].0 - pairs[i].0);
            let w = 0.5 * (pairs[i].1 + pairs[j].1);
            pairs[i] = (-x, w);
            pairs[j] = (x, w);
        }
        if n % 2 == 1 {
            pairs[n / 2].0 = 0.0;
        }
    }
    pairs.into_iter().unzip()
}

/// Gauss-Legendre rule exact to degree `>= d` on [-1, 1].
pub fn segment_rule(d: usize) -> SegmentRule {
    let n = d / 2 + 1;
    let (x, w) = gauss_jacobi(n, 0.0);
    SegmentRule {
        points: x.into_iter().map(|v| [v]).collect(),
        weights: w,
        exactness: 2 * n - 1,
    }
}

/// Collapsed Gauss rule exact to degree `>= d` on the reference triangle.
pub fn triangle_rule(d: usize) -> TriangleRule {
    // total degree d in (x, y) becomes degree d in xi and d+1 in eta after the collapse
    let n = d / 2 + 1;
    let (xi, wx) = gauss_jacobi(n, 0.0);
    let (eta, wy) = gauss_jacobi(n, 1.0);
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for (e, we) in eta.iter().zip(&wy) {
        let y = 0.5 * (1.0 + e);
        for (xv, wxv) in xi.iter().zip(&wx) {
            points.push([xv * (1.0 - y), y]);
            weights.push(0.25 * wxv * we);
        }
    }
    TriangleRule {
        points,
        weights,
        exactness: 2 * n - 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ∫ over the reference triangle of x^a y^b, from the closed form
    /// ∫_0^1 y^b (1-y)^{a+1} [1 - (-1)^{a+1}] / (a+1) dy.
    fn triangle_monomial(a: u32, b: u32) -> f64 {
        if a % 2 == 1 {
            return 0.0;
        }
        // Beta(b+1, a+2) = b! (a+1)! / (a+b+2)!
        let fact = |n: u32| (1..=n).map(|k| k as f64).product::<f64>();
        2.0 / (a as f64 + 1.0) * fact(b) * fact(a + 1) / fact(a + b + 2)
    }

    #[test]
    fn segment_examples() {
        let r = segment_rule(1);
        assert_eq!(r.len(), 1);
        let s: f64 = r.iter().map(|(p, w)| w * p[0]).sum();
        assert!(s.abs() < 1e-15);
        let r = segment_rule(3);
        assert_eq!(r.len(), 2);
        let x3: f64 = r.iter().map(|(p, w)| w * p[0].powi(3)).sum();
        let x2: f64 = r.iter().map(|(p, w)| w * p[0].powi(2)).sum();
        assert!(x3.abs() < 1e-15);
        assert!((x2 - 2.0 / 3.0).abs() < 1e-15);
        for d in 0..30 {
            let total: f64 = segment_rule(d).weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn segment_exactness() {
        for d in 0..=30 {
            let r = segment_rule(d);
            assert!(r.exactness >= d);
            assert!(r.weights.iter().all(|w| *w > 0.0));
            for m in 0..=d {
                let got: f64 = r.iter().map(|(p, w)| w * p[0].powi(m as i32)).sum();
                let want = if m % 2 == 1 { 0.0 } else { 2.0 / (m as f64 + 1.0) };
                assert!((got - want).abs() < 1e-13, "d={d} m={m}");
            }
        }
    }

    #[test]
    fn triangle_examples() {
        let r = triangle_rule(2);
        let area: f64 = r.weights.iter().sum();
        let mx: f64 = r.iter().map(|(p, w)| w * p[0]).sum();
        let my: f64 = r.iter().map(|(p, w)| w * p[1]).sum();
        assert!((area - 1.0).abs() < 1e-15);
        assert!(mx.abs() < 1e-15);
        assert!((my - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn triangle_exactness() {
        for d in 0..=24 {
            let r = triangle_rule(d);
            assert!(r.exactness >= d);
            assert!(r.weights.iter().all(|w| *w > 0.0));
            for a in 0..=d as u32 {
                for b in 0..=(d as u32 - a) {
                    let got: f64 = r.iter().map(|(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32)).sum();
                    let want = triangle_monomial(a, b);
                    assert!((got - want).abs() < 1e-13, "d={d} a={a} b={b}: {got} vs {want}");
                }
            }
        }
    }
}
