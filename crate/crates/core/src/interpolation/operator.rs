//! Element-local Regge interpolation of sampled symmetric tensor fields.

use nalgebra::{DMatrix, DVector};

use super::dual_mass::DualMassMatrix;
use crate::elements::{edge_length, edge_point, edge_tangent, ReggeBasis};
use crate::error::{Error, Result};
use crate::quadrature::{segment_rule, triangle_rule, TriangleRule};
use crate::tensor::SymMatrix2;

/// Regge interpolant `I_R^m` on the reference element, acting on fields given
/// in reference covariant components (`σ̂ = Fᵀ σ F`).
///
/// The field is sampled at fixed points (edge Gauss points, then triangle
/// Gauss points); the map from samples to interpolant values at a set of
/// evaluation points is a dense matrix built once.
#[derive(Debug, Clone)]
pub struct InterpolationOperator {
    basis: ReggeBasis,
    dual: DualMassMatrix,
    sample_points: Vec<[f64; 2]>,
    /// `f = A s`, with `s` the Voigt-stacked samples
    functional: DMatrix<f64>,
    eval_points: Vec<[f64; 2]>,
    /// Voigt-stacked shape values at the evaluation points
    shape_table: DMatrix<f64>,
    apply: DMatrix<f64>,
}

impl InterpolationOperator {
    /// `order` is the Regge order of the target space; the functionals use
    /// Gauss rules of degree `functional_degree`.
    pub fn new(order: usize, functional_degree: usize, eval_rule: &TriangleRule) -> Result<Self> {
        let basis = ReggeBasis::new(order);
        let dual = DualMassMatrix::reference(order)?;
        let n = basis.dim();
        let np = basis.n_per_edge();
        let seg = segment_rule(functional_degree);
        let tri = triangle_rule(functional_degree);
        let mut sample_points = Vec::new();
        for e in 0..3 {
            sample_points.extend(seg.points.iter().map(|s| edge_point(e, s[0])));
        }
        sample_points.extend(tri.points.iter().copied());
        let mut functional = DMatrix::zeros(n, 3 * sample_points.len());
        let mut tests = vec![0.0; np];
        let mut p = 0;
        for e in 0..3 {
            let t = edge_tangent(e);
            let coef = [t.x * t.x, t.y * t.y, 2.0 * t.x * t.y];
            let half = 0.5 * edge_length(e);
            for (s, w) in seg.iter() {
                basis.edge_tests(s[0], &mut tests);
                for (l, q) in tests.iter().enumerate() {
                    for c in 0..3 {
                        functional[(e * np + l, 3 * p + c)] = w * half * q * coef[c];
                    }
                }
                p += 1;
            }
        }
        for (pt, w) in tri.iter() {
            for (i, q) in basis.interior_tests(*pt).iter().enumerate() {
                let coef = [q.a11, q.a22, 2.0 * q.a12];
                for c in 0..3 {
                    functional[(basis.n_edge() + i, 3 * p + c)] = w * coef[c];
                }
            }
            p += 1;
        }
        let eval_points = eval_rule.points.clone();
        let mut shape_table = DMatrix::zeros(3 * eval_points.len(), n);
        for (q, pt) in eval_points.iter().enumerate() {
            for (j, phi) in basis.eval(*pt).iter().enumerate() {
                for (c, v) in phi.to_voigt().iter().enumerate() {
                    shape_table[(3 * q + c, j)] = *v;
                }
            }
        }
        let apply = &shape_table * dual.solve_matrix(&functional);
        Ok(Self {
            basis,
            dual,
            sample_points,
            functional,
            eval_points,
            shape_table,
            apply,
        })
    }

    pub fn order(&self) -> usize {
        self.basis.order()
    }

    pub fn basis(&self) -> &ReggeBasis {
        &self.basis
    }

    pub fn dual_mass(&self) -> &DualMassMatrix {
        &self.dual
    }

    pub fn sample_points(&self) -> &[[f64; 2]] {
        &self.sample_points
    }

    pub fn eval_points(&self) -> &[[f64; 2]] {
        &self.eval_points
    }

    /// `A`: dofs × (3 · samples).
    pub fn functional_matrix(&self) -> &DMatrix<f64> {
        &self.functional
    }

    /// `Φ`: (3 · eval points) × dofs.
    pub fn shape_table(&self) -> &DMatrix<f64> {
        &self.shape_table
    }

    /// `Φ M⁻¹ A`: (3 · eval points) × (3 · samples).
    pub fn apply_matrix(&self) -> &DMatrix<f64> {
        &self.apply
    }

    fn stack(&self, samples: &[SymMatrix2]) -> Result<DVector<f64>> {
        if samples.len() != self.sample_points.len() {
            return Err(Error::Config(format!(
                "expected {} samples, got {}",
                self.sample_points.len(),
                samples.len()
            )));
        }
        Ok(DVector::from_iterator(3 * samples.len(), samples.iter().flat_map(|s| s.to_voigt())))
    }

    /// Dual functional values `f_i = ψ_i(σ)`.
    pub fn functionals(&self, samples: &[SymMatrix2]) -> Result<DVector<f64>> {
        Ok(&self.functional * self.stack(samples)?)
    }

    /// Interpolant coefficients from samples taken at [`Self::sample_points`].
    pub fn coefficients(&self, samples: &[SymMatrix2]) -> Result<DVector<f64>> {
        Ok(self.dual.solve(&self.functionals(samples)?))
    }

    /// Interpolant values at the evaluation points.
    pub fn apply(&self, samples: &[SymMatrix2]) -> Result<Vec<SymMatrix2>> {
        let v = &self.apply * self.stack(samples)?;
        Ok((0..self.eval_points.len()).map(|q| SymMatrix2::from_voigt([v[3 * q], v[3 * q + 1], v[3 * q + 2]])).collect())
    }

    /// Evaluates a coefficient vector at an arbitrary reference point.
    pub fn evaluate(&self, coeffs: &DVector<f64>, p: [f64; 2]) -> SymMatrix2 {
        self.basis
            .eval(p)
            .iter()
            .zip(coeffs.iter())
            .fold(SymMatrix2::zero(), |acc, (phi, a)| acc + *phi * *a)
    }
}

/// Interpolates a pointwise-evaluable reference field.
pub fn interpolate_element<F>(operator: &InterpolationOperator, sampler: F) -> Result<DVector<f64>>
where
    F: Fn([f64; 2]) -> SymMatrix2,
{
    let samples: Vec<SymMatrix2> = operator.sample_points().iter().map(|p| sampler(*p)).collect();
    operator.coefficients(&samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_are_reproduced() {
        for order in 0..=3 {
            let rule = triangle_rule(6);
            let op = InterpolationOperator::new(order, 2 * order + 4, &rule).unwrap();
            let samples = vec![SymMatrix2::identity(); op.sample_points().len()];
            for v in op.apply(&samples).unwrap() {
                assert!((v - SymMatrix2::identity()).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sample_count_mismatch_is_an_error() {
        let op = InterpolationOperator::new(1, 4, &triangle_rule(2)).unwrap();
        assert!(op.apply(&[SymMatrix2::zero()]).is_err());
    }
}
