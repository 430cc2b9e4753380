//! Pointwise membrane strains of a displacement field on one element, in
//! reference covariant components.

use nalgebra::{Matrix3x2, Vector2, Vector3};

use crate::elements::LagrangeBasis;
use crate::error::{Error, Result};
use crate::geometry::ElementMap;
use crate::tensor::SymMatrix2;

/// Order `k` of the nodal basis with `n = (k+1)(k+2)/2` nodes.
pub fn order_from_node_count(n: usize) -> Result<usize> {
    (1..=16)
        .find(|k| (k + 1) * (k + 2) / 2 == n)
        .ok_or_else(|| Error::Config(format!("{n} coefficients do not form a complete Lagrange element")))
}

fn displacement_gradient(u: &[Vector3<f64>], point: [f64; 2]) -> Result<Matrix3x2<f64>> {
    let basis = LagrangeBasis::new(order_from_node_count(u.len())?)?;
    let mut vals = vec![0.0; basis.len()];
    let mut grads = vec![[0.0; 2]; basis.len()];
    basis.eval_with_grad(point, &mut vals, &mut grads);
    Ok(u.iter().zip(&grads).fold(Matrix3x2::zeros(), |acc, (ua, g)| {
        acc + ua * Vector2::new(g[0], g[1]).transpose()
    }))
}

/// `E = ½ (F_defᵀ F_def - F_refᵀ F_ref)` with `F_def = F_ref + ∇u`.
pub fn green_strain(element: &ElementMap, u: &[Vector3<f64>], point: [f64; 2]) -> Result<SymMatrix2> {
    let f = element.eval(point)?.f;
    let fd = f + displacement_gradient(u, point)?;
    Ok(SymMatrix2::from_matrix(&(0.5 * (fd.transpose() * fd - f.transpose() * f))))
}

/// Linearization at `u = 0`: `sym(F_refᵀ ∇u)`.
pub fn linearized_membrane_strain(element: &ElementMap, u: &[Vector3<f64>], point: [f64; 2]) -> Result<SymMatrix2> {
    let f = element.eval(point)?.f;
    Ok(SymMatrix2::from_matrix(&(f.transpose() * displacement_gradient(u, point)?)))
}
