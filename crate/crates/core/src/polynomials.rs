//! Jacobi, integrated Jacobi, Legendre and Dubiner polynomials.
//!
//! Only the `beta = 0` family is needed. Everything is evaluated with
//! three-term recurrences; the scaled ("homogeneous") variants take a pair
//! `(x, s)` and return `s^n p_n(x / s)`, which stays polynomial in `(x, s)`
//! and is therefore finite at `s = 0`.

use crate::error::{Error, Result};

const X_SLACK: f64 = 1e-12;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("Jacobi parameter alpha = {alpha} must be > -1")));
    }
    Ok(())
}

fn check_x(x: f64) -> Result<()> {
    if !x.is_finite() || x.abs() > 1.0 + X_SLACK {
        return Err(Error::Domain(format!("abscissa x = {x} outside [-1, 1]")));
    }
    Ok(())
}

/// `p_n^{(alpha,0)}(x)`.
pub fn eval_jacobi(n: usize, alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_x(x)?;
    let mut vals = vec![0.0; n + 1];
    scaled_jacobi_all(alpha, x, 1.0, &mut vals);
    Ok(vals[n])
}

/// `p̂_n^{(alpha,0)}(x) = ∫_{-1}^x p_{n-1}^{(alpha,0)}`, with `p̂_0 = 1`.
pub fn eval_integrated_jacobi(n: usize, alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_x(x)?;
    let mut vals = vec![0.0; n + 1];
    scaled_integrated_jacobi_all(alpha, x, 1.0, &mut vals);
    Ok(vals[n])
}

/// Dubiner polynomial `w^{(l1,l2)}(x, y) = p_{l1}^0(x/(1-y)) (1-y)^{l1} p_{l2}^{2 l1 + 1}(2y - 1)`
/// on the triangle with vertices (-1,0), (1,0), (0,1).
pub fn eval_dubiner(l1: usize, l2: usize, x: f64, y: f64) -> Result<f64> {
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::Domain(format!("non-finite point ({x}, {y})")));
    }
    Ok(dubiner(l1, l2, x, y))
}

/// Unchecked Dubiner evaluation used by the basis tables.
pub(crate) fn dubiner(l1: usize, l2: usize, x: f64, y: f64) -> f64 {
    let mut leg = vec![0.0; l1 + 1];
    scaled_jacobi_all(0.0, x, 1.0 - y, &mut leg);
    let mut jac = vec![0.0; l2 + 1];
    scaled_jacobi_all((2 * l1 + 1) as f64, 2.0 * y - 1.0, 1.0, &mut jac);
    leg[l1] * jac[l2]
}

/// Fills `out[n] = s^n p_n^{(alpha,0)}(x/s)` for `n = 0..out.len()`.
pub(crate) fn scaled_jacobi_all(alpha: f64, x: f64, s: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = 0.5 * ((alpha + 2.0) * x + alpha * s);
    let a = alpha;
    for n in 2..out.len() {
        let nf = n as f64;
        let c = 2.0 * nf + a;
        let denom = 2.0 * nf * (nf + a) * (c - 2.0);
        let b1 = (c - 1.0) * (c * (c - 2.0) * x + a * a * s);
        let b2 = 2.0 * (nf + a - 1.0) * (nf - 1.0) * c * s * s;
        out[n] = (b1 * out[n - 1] - b2 * out[n - 2]) / denom;
    }
}

/// Fills `out[n] = s^n p̂_n^{(alpha,0)}(x/s)` for `n = 0..out.len()`.
///
/// Uses the three-term representation of the integrated Jacobi polynomial
/// in terms of `p_n, p_{n-1}, p_{n-2}` (all with the same `alpha`).
pub(crate) fn scaled_integrated_jacobi_all(alpha: f64, x: f64, s: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = x + s;
    let mut p = vec![0.0; out.len()];
    scaled_jacobi_all(alpha, x, s, &mut p);
    let a = alpha;
    for n in 2..out.len() {
        let nf = n as f64;
        let c = 2.0 * nf + a;
        let t0 = 2.0 * (nf + a) / ((c - 1.0) * c);
        let t1 = 2.0 * a / ((c - 2.0) * c);
        let t2 = 2.0 * (nf - 1.0) / ((c - 1.0) * (c - 2.0));
        out[n] = t0 * p[n] + t1 * s * p[n - 1] - t2 * s * s * p[n - 2];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::segment_rule;
    use approx::assert_abs_diff_eq;

    /// Polynomial in monomial coefficients (lowest degree first).
    fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; a.len() + b.len() - 1];
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                out[i + j] += ai * bj;
            }
        }
        out
    }

    fn poly_eval(a: &[f64], x: f64) -> f64 {
        a.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// Rodrigues formula for integer alpha, beta = 0, done with exact polynomial algebra:
    /// p_n = (-1)^n... with the (x^2-1)^n convention of the definition.
    fn rodrigues(n: usize, alpha: usize) -> Vec<f64> {
        let one_minus_x = [1.0, -1.0];
        let x2_minus_1 = [-1.0, 0.0, 1.0];
        let mut w = vec![1.0];
        for _ in 0..alpha {
            w = poly_mul(&w, &one_minus_x);
        }
        for _ in 0..n {
            w = poly_mul(&w, &x2_minus_1);
        }
        for _ in 0..n {
            w = w.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
        }
        // synthetic division by (1 - x)^alpha
        for _ in 0..alpha {
            // divide by (1 - x) = -(x - 1): Horner division by (x - 1), then negate
            let deg = w.len() - 1;
            let mut q = vec![0.0; deg];
            let mut carry = 0.0;
            for i in (0..=deg).rev() {
                let v = w[i] + carry;
                if i == 0 {
                    assert!(v.abs() < 1e-6 * (1.0 + w.iter().map(|c| c.abs()).sum::<f64>()));
                } else {
                    q[i - 1] = v;
                    carry = v;
                }
            }
            w = q.into_iter().map(|c| -c).collect();
        }
        let scale = 1.0 / (2f64.powi(n as i32) * (1..=n).map(|k| k as f64).product::<f64>());
        w.into_iter().map(|c| c * scale).collect()
    }

    #[test]
    fn degree_zero_is_one() {
        for alpha in [0.0, 1.0, 2.5, -0.5] {
            assert_eq!(eval_jacobi(0, alpha, 0.3).unwrap(), 1.0);
            assert_eq!(eval_integrated_jacobi(0, alpha, 0.3).unwrap(), 1.0);
        }
    }

    #[test]
    fn small_degree_values() {
        assert_abs_diff_eq!(eval_jacobi(1, 0.0, 0.5).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(eval_jacobi(1, 2.0, 0.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eval_integrated_jacobi(1, 0.0, 0.37).unwrap(), 1.37, epsilon = 1e-15);
        assert_abs_diff_eq!(eval_integrated_jacobi(2, 0.0, 1.0).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn matches_rodrigues_oracle() {
        for alpha in [0usize, 1, 2, 5] {
            for n in 0..=8 {
                let coeffs = rodrigues(n, alpha);
                for i in 0..=20 {
                    let x = -1.0 + 0.1 * i as f64;
                    let want = poly_eval(&coeffs, x);
                    let got = eval_jacobi(n, alpha as f64, x).unwrap();
                    assert!(
                        (want - got).abs() <= 1e-11 * (1.0 + want.abs()),
                        "n={n} alpha={alpha} x={x}: {want} vs {got}"
                    );
                }
            }
        }
    }

    #[test]
    fn legendre_reduction() {
        // Bonnet recurrence, written independently of the Jacobi code path.
        for i in 0..=40 {
            let x = -1.0 + 0.05 * i as f64;
            let (mut p0, mut p1) = (1.0, x);
            for n in 0..=10 {
                let want = if n == 0 { p0 } else { p1 };
                let got = eval_jacobi(n, 0.0, x).unwrap();
                assert!((want - got).abs() < 1e-13 * want.abs().max(1.0), "n={n} x={x}");
                if n >= 1 {
                    let p2 = ((2 * n + 1) as f64 * x * p1 - n as f64 * p0) / (n + 1) as f64;
                    p0 = p1;
                    p1 = p2;
                }
            }
        }
    }

    #[test]
    fn integrated_jacobi_matches_quadrature() {
        let rule = segment_rule(30);
        for alpha in [0.0, 1.0, 2.0, 3.0, 5.0, 0.5] {
            for n in 1..=8 {
                for i in 0..=10 {
                    let x = -1.0 + 0.2 * i as f64;
                    // ∫_{-1}^x p_{n-1} via the affine map of [-1, 1] onto [-1, x]
                    let h = 0.5 * (x + 1.0);
                    let want: f64 = rule
                        .iter()
                        .map(|(p, w)| w * h * eval_jacobi(n - 1, alpha, -1.0 + h * (p[0] + 1.0)).unwrap())
                        .sum();
                    let got = eval_integrated_jacobi(n, alpha, x).unwrap();
                    assert!((want - got).abs() < 1e-13 * want.abs().max(1.0), "n={n} alpha={alpha} x={x}: {want} vs {got}");
                }
            }
        }
    }

    #[test]
    fn scaled_variants_are_homogeneous() {
        let (x, s) = (0.3, 0.6);
        let mut a = [0.0; 7];
        let mut b = [0.0; 7];
        scaled_jacobi_all(2.0, x, s, &mut a);
        scaled_jacobi_all(2.0, x / s, 1.0, &mut b);
        for n in 0..7 {
            assert_abs_diff_eq!(a[n], s.powi(n as i32) * b[n], epsilon = 1e-14);
        }
        scaled_integrated_jacobi_all(0.0, x, s, &mut a);
        scaled_integrated_jacobi_all(0.0, x / s, 1.0, &mut b);
        for n in 0..7 {
            assert_abs_diff_eq!(a[n], s.powi(n as i32) * b[n], epsilon = 1e-14);
        }
        // finite at s = 0
        scaled_jacobi_all(0.0, 0.0, 0.0, &mut a);
        assert!(a.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn dubiner_values() {
        assert_eq!(eval_dubiner(0, 0, 0.2, 0.3).unwrap(), 1.0);
        assert_abs_diff_eq!(eval_dubiner(1, 0, 0.0, 0.5).unwrap(), 0.0, epsilon = 1e-15);
        let want = eval_jacobi(1, 1.0, -1.0).unwrap();
        assert_abs_diff_eq!(eval_dubiner(0, 1, 0.0, 0.0).unwrap(), want, epsilon = 1e-15);
        // apex y = 1 is finite
        assert!(eval_dubiner(3, 2, 0.0, 1.0).unwrap().is_finite());
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(eval_jacobi(2, -1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(eval_jacobi(2, -3.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(eval_integrated_jacobi(2, 0.0, 1.5), Err(Error::Domain(_))));
        assert!(matches!(eval_dubiner(1, 1, f64::NAN, 0.0), Err(Error::Domain(_))));
    }
}
