//! The element dual mass matrix `M_ij = ψ_i(φ_j)` of the Regge space.

use nalgebra::{DMatrix, DVector, Dyn, Matrix3, LU};

use crate::elements::{
    covariant_pullback_surface, dual_pullback_edge, dual_pullback_interior, edge_length, edge_point, edge_tangent,
    ReggeBasis,
};
use crate::error::{Error, Result};
use crate::geometry::ElementMap;
use crate::quadrature::{segment_rule, triangle_rule};

/// Dual mass matrix split into its edge/interior blocks.
///
/// Row `i` is functional `ψ_i`, column `j` shape `φ_j`. Edge functionals
/// vanish on interior shapes, so the edge-interior block `M_ET` is zero and
/// the system is solved by block forward substitution.
#[derive(Debug, Clone)]
pub struct DualMassMatrix {
    order: usize,
    n_edge: usize,
    full: DMatrix<f64>,
    ee: LU<f64, Dyn, Dyn>,
    tt: Option<LU<f64, Dyn, Dyn>>,
    ee_t: LU<f64, Dyn, Dyn>,
    tt_t: Option<LU<f64, Dyn, Dyn>>,
}

const PIVOT_TOL: f64 = 1e-13;

pub(crate) fn checked_lu(m: DMatrix<f64>, what: &str) -> Result<LU<f64, Dyn, Dyn>> {
    let lu = m.lu();
    let d = lu.u().diagonal().abs();
    let (lo, hi) = (d.min(), d.max());
    if !(lo > PIVOT_TOL * hi) {
        return Err(Error::Degenerate(format!("{what} is singular (pivot ratio {:.3e})", lo / hi)));
    }
    Ok(lu)
}

impl DualMassMatrix {
    /// Factors the blocks of a full dual mass matrix of Regge order `order`.
    pub fn from_full(order: usize, full: DMatrix<f64>) -> Result<Self> {
        let n_edge = 3 * (order + 1);
        let n = 3 * (order + 1) * (order + 2) / 2;
        if full.nrows() != n || full.ncols() != n {
            return Err(Error::Config(format!("dual mass of order {order} must be {n}×{n}")));
        }
        let ee_block = full.view((0, 0), (n_edge, n_edge)).into_owned();
        let ee_t = checked_lu(ee_block.transpose(), "edge block M_EE")?;
        let ee = checked_lu(ee_block, "edge block M_EE")?;
        let (tt, tt_t) = if n > n_edge {
            let block = full.view((n_edge, n_edge), (n - n_edge, n - n_edge)).into_owned();
            let tt_t = checked_lu(block.transpose(), "interior block M_TT")?;
            (Some(checked_lu(block, "interior block M_TT")?), Some(tt_t))
        } else {
            (None, None)
        };
        Ok(Self {
            order,
            n_edge,
            full,
            ee,
            tt,
            ee_t,
            tt_t,
        })
    }

    /// Reference-element matrix; by the geometry-free transforms it is the
    /// matrix of every element.
    pub fn reference(order: usize) -> Result<Self> {
        let basis = ReggeBasis::new(order);
        let n = basis.dim();
        let np = basis.n_per_edge();
        let mut full = DMatrix::zeros(n, n);
        let seg = segment_rule(2 * order);
        let mut tests = vec![0.0; np];
        for e in 0..3 {
            let t = edge_tangent(e);
            let half = 0.5 * edge_length(e);
            for (s, w) in seg.iter() {
                let shapes = basis.eval(edge_point(e, s[0]));
                basis.edge_tests(s[0], &mut tests);
                for (j, phi) in shapes.iter().enumerate() {
                    let tt = phi.tt(&t) * w * half;
                    for (l, q) in tests.iter().enumerate() {
                        full[(e * np + l, j)] += q * tt;
                    }
                }
            }
        }
        let tri = triangle_rule(2 * order);
        for (p, w) in tri.iter() {
            let shapes = basis.eval(*p);
            let tests = basis.interior_tests(*p);
            for (i, q) in tests.iter().enumerate() {
                for (j, phi) in shapes.iter().enumerate() {
                    full[(basis.n_edge() + i, j)] += w * q.frobenius(phi);
                }
            }
        }
        Self::from_full(order, full)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.full.nrows()
    }

    pub fn n_edge(&self) -> usize {
        self.n_edge
    }

    pub fn full(&self) -> &DMatrix<f64> {
        &self.full
    }

    pub fn m_ee(&self) -> DMatrix<f64> {
        self.full.view((0, 0), (self.n_edge, self.n_edge)).into_owned()
    }

    pub fn m_et(&self) -> DMatrix<f64> {
        let ni = self.dim() - self.n_edge;
        self.full.view((0, self.n_edge), (self.n_edge, ni)).into_owned()
    }

    pub fn m_te(&self) -> DMatrix<f64> {
        let ni = self.dim() - self.n_edge;
        self.full.view((self.n_edge, 0), (ni, self.n_edge)).into_owned()
    }

    pub fn m_tt(&self) -> DMatrix<f64> {
        let ni = self.dim() - self.n_edge;
        self.full.view((self.n_edge, self.n_edge), (ni, ni)).into_owned()
    }

    /// `α_E = M_EE⁻¹ f_E`, then `α_T = M_TT⁻¹ (f_T - M_TE α_E)`.
    pub fn solve(&self, f: &DVector<f64>) -> DVector<f64> {
        let ne = self.n_edge;
        let n = self.dim();
        let mut out = DVector::zeros(n);
        let ae = self.ee.solve(&f.rows(0, ne).into_owned()).expect("factor checked at construction");
        out.rows_mut(0, ne).copy_from(&ae);
        if let Some(tt) = &self.tt {
            let rhs = f.rows(ne, n - ne) - self.full.view((ne, 0), (n - ne, ne)) * &ae;
            let at = tt.solve(&rhs).expect("factor checked at construction");
            out.rows_mut(ne, n - ne).copy_from(&at);
        }
        out
    }

    /// Solves `Mᵀ x = g` (block backward substitution).
    pub fn solve_transpose(&self, g: &DVector<f64>) -> DVector<f64> {
        let ne = self.n_edge;
        let n = self.dim();
        let mut out = DVector::zeros(n);
        let mut rhs_e = g.rows(0, ne).into_owned();
        if let Some(tt_t) = &self.tt_t {
            let xt = tt_t.solve(&g.rows(ne, n - ne).into_owned()).expect("factor checked at construction");
            rhs_e -= self.full.view((ne, 0), (n - ne, ne)).transpose() * &xt;
            out.rows_mut(ne, n - ne).copy_from(&xt);
        }
        let xe = self.ee_t.solve(&rhs_e).expect("factor checked at construction");
        out.rows_mut(0, ne).copy_from(&xe);
        out
    }

    /// `M⁻¹ A` column by column.
    pub fn solve_matrix(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.dim(), a.ncols());
        for c in 0..a.ncols() {
            out.set_column(c, &self.solve(&a.column(c).into_owned()));
        }
        out
    }
}

/// Dual mass matrix of a mapped element computed in physical space: shapes
/// pushed forward covariantly, test functions with the dual transforms, and
/// integrals taken with the physical measures.
pub fn assemble_dual_mass(element: &ElementMap, k: usize) -> Result<DualMassMatrix> {
    let basis = ReggeBasis::new(k);
    let n = basis.dim();
    let np = basis.n_per_edge();
    let g = element.order();
    let degree = 2 * k + 2 * (g - 1) + 2;
    let mut full = DMatrix::zeros(n, n);
    let seg = segment_rule(degree);
    let mut tests = vec![0.0; np];
    for e in 0..3 {
        let half = 0.5 * edge_length(e);
        let t_ref = edge_tangent(e);
        for (s, w) in seg.iter() {
            let p = edge_point(e, s[0]);
            let m = element.eval(p)?;
            let jb = m.boundary_det(e);
            let t = m.f * t_ref / jb;
            let ds = w * half * jb;
            basis.edge_tests(s[0], &mut tests);
            for (j, phi) in basis.eval(p).iter().enumerate() {
                let sigma = covariant_pullback_surface(&m.f, phi)?;
                let tt = t.dot(&(sigma * t));
                for (l, q) in tests.iter().enumerate() {
                    full[(e * np + l, j)] += dual_pullback_edge(jb, *q) * tt * ds;
                }
            }
        }
    }
    for (p, w) in triangle_rule(degree).iter() {
        let m = element.eval(*p)?;
        let sigmas: Vec<Matrix3<f64>> =
            basis.eval(*p).iter().map(|phi| covariant_pullback_surface(&m.f, phi)).collect::<Result<_>>()?;
        for (i, q) in basis.interior_tests(*p).iter().enumerate() {
            let qp = dual_pullback_interior(&m.f, m.j, q)?;
            for (j, s) in sigmas.iter().enumerate() {
                full[(basis.n_edge() + i, j)] += w * m.j * s.component_mul(&qp).sum();
            }
        }
    }
    DualMassMatrix::from_full(k, full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector3;

    #[test]
    fn lowest_order_reference() {
        let m = DualMassMatrix::reference(0).unwrap();
        let h = std::f64::consts::SQRT_2 / 2.0;
        let want = DMatrix::from_diagonal(&DVector::from_vec(vec![-0.5, -h, -h]));
        assert!((m.full() - want).norm() < 1e-14, "{}", m.full());
    }

    #[test]
    fn block_lower_triangular() {
        for k in 1..=4 {
            let m = DualMassMatrix::reference(k).unwrap();
            assert!(m.m_et().norm() < 1e-14, "k={k}: {}", m.m_et().norm());
        }
    }

    #[test]
    fn solves_match_dense() {
        let m = DualMassMatrix::reference(3).unwrap();
        let f = DVector::from_fn(m.dim(), |i, _| (i as f64 * 0.37).sin());
        let x = m.solve(&f);
        assert!((m.full() * &x - &f).norm() < 1e-12);
        let y = m.solve_transpose(&f);
        assert!((m.full().transpose() * &y - &f).norm() < 1e-12);
    }

    #[test]
    fn degenerate_blocks_rejected() {
        let z = DMatrix::zeros(3, 3);
        assert!(matches!(DualMassMatrix::from_full(0, z), Err(Error::Degenerate(_))));
    }

    #[test]
    fn affine_surface_element_matches_reference() {
        let control = vec![
            Vector3::new(0.2, -0.1, 0.3),
            Vector3::new(1.7, 0.4, -0.2),
            Vector3::new(0.5, 1.3, 0.9),
        ];
        let el = ElementMap::from_control_points(1, control, false).unwrap();
        for k in 0..=3 {
            let phys = assemble_dual_mass(&el, k).unwrap();
            let refm = DualMassMatrix::reference(k).unwrap();
            assert!((phys.full() - refm.full()).norm() < 1e-12, "k={k}");
        }
    }
}
