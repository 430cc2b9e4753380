//! Local blocks of the three-field form
//! `L(u, R, Q) = Rᵀ A_RR R + Qᵀ (M R - a(u))`,
//! where `a(u)` collects the dual functionals of the strain of `u`.

use nalgebra::{DMatrix, DVector, Matrix3};

use super::{DualMassMatrix, InterpolationOperator};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ThreeFieldBlocks {
    /// Material-norm mass of the Regge shapes, `Σ_q Φ_qᵀ W_q Φ_q`.
    pub a_rr: DMatrix<f64>,
    /// Dual mass `M`.
    pub dual: DMatrix<f64>,
    /// `∂a/∂u` for a linear strain map.
    pub a_u: DMatrix<f64>,
}

/// Material-norm mass `Σ_q Φ_qᵀ W_q Φ_q` on the operator's evaluation points.
pub fn material_mass(operator: &InterpolationOperator, weights: &[Matrix3<f64>]) -> Result<DMatrix<f64>> {
    let phi = operator.shape_table();
    if weights.len() != operator.eval_points().len() {
        return Err(Error::Config("one material weight per evaluation point is required".into()));
    }
    let n = phi.ncols();
    let mut out = DMatrix::zeros(n, n);
    for (q, w) in weights.iter().enumerate() {
        let pq = phi.rows(3 * q, 3);
        out += pq.transpose() * w * pq;
    }
    Ok(0.5 * (&out + out.transpose()))
}

/// Blocks for a strain that depends linearly on the element dofs: the
/// samples of the strain at [`InterpolationOperator::sample_points`] are
/// `strain_jacobian · u` (Voigt-stacked), and `weights[q]` is the
/// quadrature-weighted material matrix at evaluation point `q`.
pub fn three_field_blocks(
    operator: &InterpolationOperator,
    weights: &[Matrix3<f64>],
    strain_jacobian: &DMatrix<f64>,
) -> Result<ThreeFieldBlocks> {
    if strain_jacobian.nrows() != 3 * operator.sample_points().len() {
        return Err(Error::Config("strain Jacobian rows must match the operator samples".into()));
    }
    Ok(ThreeFieldBlocks {
        a_rr: material_mass(operator, weights)?,
        dual: operator.dual_mass().full().clone(),
        a_u: operator.functional_matrix() * strain_jacobian,
    })
}

impl ThreeFieldBlocks {
    pub fn n_regge(&self) -> usize {
        self.dual.nrows()
    }

    pub fn n_u(&self) -> usize {
        self.a_u.ncols()
    }

    pub fn lagrangian(&self, u: &DVector<f64>, r: &DVector<f64>, q: &DVector<f64>) -> f64 {
        r.dot(&(&self.a_rr * r)) + q.dot(&(&self.dual * r - &self.a_u * u))
    }

    /// Hessian of `L` in the ordering `(u, R, Q)`.
    pub fn saddle_matrix(&self) -> DMatrix<f64> {
        let (nu, nr) = (self.n_u(), self.n_regge());
        let mut m = DMatrix::zeros(nu + 2 * nr, nu + 2 * nr);
        m.view_mut((nu, nu), (nr, nr)).copy_from(&(2.0 * &self.a_rr));
        m.view_mut((nu, nu + nr), (nr, nr)).copy_from(&self.dual.transpose());
        m.view_mut((nu + nr, nu), (nr, nr)).copy_from(&self.dual);
        m.view_mut((nu + nr, 0), (nr, nu)).copy_from(&(-&self.a_u));
        m.view_mut((0, nu + nr), (nu, nr)).copy_from(&(-self.a_u.transpose()));
        m
    }

    /// Stationary `(R, Q)` for given `u`: `M R = a_u u`, `2 A_RR R + Mᵀ Q = 0`.
    pub fn eliminate(&self, dual: &DualMassMatrix, u: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
        let r = dual.solve(&(&self.a_u * u));
        let q = -dual.solve_transpose(&(2.0 * &self.a_rr * &r));
        (r, q)
    }

    /// Element matrix after eliminating `(R, Q)`: `a_uᵀ M⁻ᵀ A_RR M⁻¹ a_u`.
    pub fn condensed(&self, dual: &DualMassMatrix) -> DMatrix<f64> {
        let x = dual.solve_matrix(&self.a_u);
        let k = x.transpose() * &self.a_rr * &x;
        0.5 * (&k + k.transpose())
    }
}
