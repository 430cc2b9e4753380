use nalgebra::{Matrix2, Matrix3};

use crate::error::{Error, Result};
use crate::tensor::SymMatrix2;

/// Isotropic linear material.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
}

impl MaterialParams {
    pub fn new(youngs_modulus: f64, poisson_ratio: f64) -> Result<Self> {
        if !(youngs_modulus > 0.0) || !youngs_modulus.is_finite() {
            return Err(Error::Config(format!("Young's modulus must be positive, got {youngs_modulus}")));
        }
        if !(0.0..0.5).contains(&poisson_ratio) {
            return Err(Error::Config(format!("Poisson ratio must lie in [0, 0.5), got {poisson_ratio}")));
        }
        Ok(Self {
            youngs_modulus,
            poisson_ratio,
        })
    }

    /// `E / (1 - ν²)`
    pub fn plate_modulus(&self) -> f64 {
        self.youngs_modulus / (1.0 - self.poisson_ratio * self.poisson_ratio)
    }

    /// `E / (2 (1 + ν))`
    pub fn shear_modulus(&self) -> f64 {
        0.5 * self.youngs_modulus / (1.0 + self.poisson_ratio)
    }

    /// Voigt matrix `D` with `vᵀ D v = ‖E‖²_M` for reference covariant
    /// components `v = [E11, E22, E12]` and inverse metric `h = G⁻¹`.
    pub fn voigt_matrix(&self, h: &Matrix2<f64>) -> Matrix3<f64> {
        let c = self.plate_modulus();
        let nu = self.poisson_ratio;
        let basis = [
            Matrix2::new(1.0, 0.0, 0.0, 0.0),
            Matrix2::new(0.0, 0.0, 0.0, 1.0),
            Matrix2::new(0.0, 1.0, 1.0, 0.0),
        ];
        let he: Vec<Matrix2<f64>> = basis.iter().map(|e| h * e).collect();
        Matrix3::from_fn(|i, j| c * (nu * he[i].trace() * he[j].trace() + (1.0 - nu) * (he[i] * he[j]).trace()))
    }
}

/// `‖E‖²_M = Ē/(1-ν̄²) (ν̄ tr(E)² + (1-ν̄) tr(E²))` for a strain in an
/// orthonormal tangent frame.
pub fn material_norm_sq(material: &MaterialParams, strain: &SymMatrix2) -> f64 {
    let m = strain.to_matrix();
    let nu = material.poisson_ratio;
    material.plate_modulus() * (nu * m.trace().powi(2) + (1.0 - nu) * (m * m).trace())
}

#[cfg(test)]
fn voigt(s: &SymMatrix2) -> nalgebra::Vector3<f64> {
    let v = s.to_voigt();
    nalgebra::Vector3::new(v[0], v[1], v[2])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_examples() {
        let unit = MaterialParams::new(1.0, 0.0).unwrap();
        assert_eq!(material_norm_sq(&unit, &SymMatrix2::identity()), 2.0);
        assert_eq!(material_norm_sq(&unit, &SymMatrix2::zero()), 0.0);
        let m = MaterialParams::new(3e4, 0.3).unwrap();
        let v = material_norm_sq(&m, &SymMatrix2::new(1.0, 0.0, 0.0));
        assert!((v - 3e4 / 0.91).abs() < 1e-9);
        assert!(MaterialParams::new(1.0, 0.5).is_err());
        assert!(MaterialParams::new(-1.0, 0.2).is_err());
    }

    #[test]
    fn voigt_matrix_matches_norm() {
        let m = MaterialParams::new(2.0, 0.25).unwrap();
        let s = SymMatrix2::new(0.3, -0.7, 1.1);
        let v = voigt(&s);
        assert!(((v.transpose() * m.voigt_matrix(&Matrix2::identity()) * v)[0] - material_norm_sq(&m, &s)).abs() < 1e-13);
        // covariant components of the same physical strain under a stretched metric
        let f = Matrix2::new(2.0, 0.3, 0.0, 0.5);
        let cov = SymMatrix2::from_matrix(&(f.transpose() * s.to_matrix() * f));
        let h = (f.transpose() * f).try_inverse().unwrap();
        let vc = voigt(&cov);
        let got = (vc.transpose() * m.voigt_matrix(&h) * vc)[0];
        assert!((got - material_norm_sq(&m, &s)).abs() < 1e-12);
    }
}
