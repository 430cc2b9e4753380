//! Covariant transformations of symmetric tensors and the matching
//! transformations of the dual test functions.
//!
//! For a surface map with gradient `F ∈ R^{3×2}` the shape functions are
//! mapped with the Moore-Penrose pseudo-inverse, `σ = F†ᵀ σ̂ F†`. Edge test
//! functions are scaled by `J_b = |F t̂|` and interior ones by
//! `F q̂ Fᵀ / J`; with these choices every dual pairing equals its
//! reference-element counterpart.

use nalgebra::{Matrix2, Matrix2x3, Matrix3, Matrix3x2};

use crate::error::{Error, Result};
use crate::tensor::SymMatrix2;

const RANK_TOL: f64 = 1e-14;

/// `F† = (FᵀF)⁻¹ Fᵀ` for a rank-2 `F ∈ R^{3×2}`, computed as `R⁻¹Qᵀ` from a
/// thin QR factorization so the conditioning of `F` is not squared.
pub fn pseudo_inverse(f: &Matrix3x2<f64>) -> Result<Matrix2x3<f64>> {
    let g = f.transpose() * f;
    let scale = g.norm_squared().max(f64::MIN_POSITIVE);
    let det = g.determinant();
    if !(det > RANK_TOL * scale) {
        return Err(Error::Geometry(format!("rank-deficient surface gradient (det FᵀF = {det:.3e})")));
    }
    let qr = f.qr();
    let rinv = qr.r().try_inverse().ok_or_else(|| Error::Geometry("singular metric".into()))?;
    Ok(rinv * qr.q().transpose())
}

/// Flat case: `σ = F⁻ᵀ σ̂ F⁻¹`.
pub fn covariant_pullback(f: &Matrix2<f64>, sigma_ref: &SymMatrix2) -> Result<SymMatrix2> {
    let det = f.determinant();
    if !(det.abs() > RANK_TOL * f.norm_squared().max(f64::MIN_POSITIVE)) {
        return Err(Error::Geometry(format!("singular element map (det F = {det:.3e})")));
    }
    let finv = f.try_inverse().ok_or_else(|| Error::Geometry("singular element map".into()))?;
    Ok(SymMatrix2::from_matrix(&(finv.transpose() * sigma_ref.to_matrix() * finv)))
}

/// Surface case: `σ = (F†)ᵀ σ̂ F†`, a tangential symmetric 3×3 tensor.
pub fn covariant_pullback_surface(f: &Matrix3x2<f64>, sigma_ref: &SymMatrix2) -> Result<Matrix3<f64>> {
    let fp = pseudo_inverse(f)?;
    let s = fp.transpose() * sigma_ref.to_matrix() * fp;
    Ok(0.5 * (s + s.transpose()))
}

/// Edge dual test function: `q ∘ Φ = J_b q̂`.
pub fn dual_pullback_edge(j_b: f64, q_ref: f64) -> f64 {
    j_b * q_ref
}

/// Interior dual test function: `q ∘ Φ = F q̂ Fᵀ / J`.
pub fn dual_pullback_interior(f: &Matrix3x2<f64>, j: f64, q_ref: &SymMatrix2) -> Result<Matrix3<f64>> {
    if !(j > 0.0) {
        return Err(Error::Geometry(format!("non-positive surface determinant {j:.3e}")));
    }
    Ok(f * q_ref.to_matrix() * f.transpose() / j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_scaling() {
        let s = SymMatrix2::new(1.0, 0.3, -2.0);
        assert_eq!(covariant_pullback(&Matrix2::identity(), &s).unwrap(), s);
        let quarter = covariant_pullback(&(2.0 * Matrix2::identity()), &SymMatrix2::identity()).unwrap();
        assert_eq!(quarter, SymMatrix2::new(0.25, 0.0, 0.25));
        assert!(covariant_pullback(&Matrix2::new(1.0, 2.0, 2.0, 4.0), &s).is_err());
    }

    #[test]
    fn pseudo_inverse_left_inverse() {
        let f = Matrix3x2::new(1.0, 0.2, -0.3, 1.5, 0.7, 0.1);
        let fp = pseudo_inverse(&f).unwrap();
        assert!((fp * f - Matrix2::identity()).norm() < 1e-14);
        let flat = Matrix3x2::new(2.0, 0.0, 0.0, 2.0, 0.0, 0.0);
        let fp = pseudo_inverse(&flat).unwrap();
        assert!((fp.fixed_view::<2, 2>(0, 0) - Matrix2::identity() * 0.5).norm() < 1e-15);
        let rank1 = Matrix3x2::new(1.0, 2.0, 1.0, 2.0, 1.0, 2.0);
        assert!(pseudo_inverse(&rank1).is_err());
    }

    #[test]
    fn interior_pairing_is_geometry_free() {
        let f: Matrix3x2<f64> = Matrix3x2::new(1.0, 0.2, -0.3, 1.5, 0.7, 0.1);
        let j: f64 = (f.transpose() * f).determinant().sqrt();
        let sig = SymMatrix2::new(0.4, -1.0, 2.0);
        let q = SymMatrix2::new(-0.7, 0.25, 1.1);
        let phys_sigma = covariant_pullback_surface(&f, &sig).unwrap();
        let phys_q = dual_pullback_interior(&f, j, &q).unwrap();
        let paired = phys_sigma.component_mul(&phys_q).sum() * j;
        assert!((paired - sig.frobenius(&q)).abs() < 1e-13);
        assert_eq!(dual_pullback_edge(1.0, 0.3), 0.3);
    }
}
