//! Degree-g isoparametric maps of single triangles.

use nalgebra::{Matrix2, Matrix2x3, Matrix3, Matrix3x2, Vector2, Vector3};

use super::{ChartGeometry, Mesh};
use crate::elements::{barycentric, edge_vector, pseudo_inverse, LagrangeBasis};
use crate::error::{Error, Result};

/// Nodal interpolant of a chart on one triangle.
#[derive(Debug, Clone)]
pub struct ElementMap {
    basis: LagrangeBasis,
    control: Vec<Vector3<f64>>,
    planar: bool,
}

/// Map quantities at one reference point.
#[derive(Debug, Clone, PartialEq)]
pub struct MapEval {
    pub position: Vector3<f64>,
    /// `F = ∂x/∂x̂`
    pub f: Matrix3x2<f64>,
    pub f_pinv: Matrix2x3<f64>,
    /// `sqrt(det FᵀF)`, or the signed `det F` for planar maps
    pub j: f64,
    pub normal: Vector3<f64>,
    /// `I - ν⊗ν`
    pub p_tau: Matrix3<f64>,
}

impl MapEval {
    /// `J_b = |F t̂|` for local edge `e`.
    pub fn boundary_det(&self, e: usize) -> f64 {
        (self.f * edge_vector(e).normalize()).norm()
    }

    /// In-plane 2×2 block of `F` (meaningful for planar maps).
    pub fn f_planar(&self) -> Matrix2<f64> {
        self.f.fixed_view::<2, 2>(0, 0).into_owned()
    }

    /// `FᵀF`
    pub fn metric(&self) -> Matrix2<f64> {
        self.f.transpose() * self.f
    }
}

impl ElementMap {
    /// Interpolates `chart` on triangle `tri` of `mesh` at the order-`g` nodes.
    pub fn from_chart(mesh: &Mesh, chart: &ChartGeometry, tri: usize, g: usize) -> Result<Self> {
        let basis = LagrangeBasis::new(g)?;
        let verts = mesh.triangles()[tri].map(|v| mesh.vertices()[v]);
        let control = (0..basis.len())
            .map(|i| chart.position(param_point(&verts, basis.node_barycentric(i))))
            .collect();
        Ok(Self {
            basis,
            control,
            planar: chart.is_planar(),
        })
    }

    /// Map given directly by nodal control points (ordering of [`LagrangeBasis`]).
    pub fn from_control_points(g: usize, control: Vec<Vector3<f64>>, planar: bool) -> Result<Self> {
        let basis = LagrangeBasis::new(g)?;
        if control.len() != basis.len() {
            return Err(Error::Config(format!(
                "degree-{g} map needs {} control points, got {}",
                basis.len(),
                control.len()
            )));
        }
        Ok(Self { basis, control, planar })
    }

    pub fn order(&self) -> usize {
        self.basis.order()
    }

    pub fn control_points(&self) -> &[Vector3<f64>] {
        &self.control
    }

    pub fn eval(&self, p: [f64; 2]) -> Result<MapEval> {
        let n = self.basis.len();
        let mut vals = vec![0.0; n];
        let mut grads = vec![[0.0; 2]; n];
        self.basis.eval_with_grad(p, &mut vals, &mut grads);
        let mut position = Vector3::zeros();
        let mut f = Matrix3x2::zeros();
        for ((x, v), g) in self.control.iter().zip(&vals).zip(&grads) {
            position += x * *v;
            f += x * Vector2::new(g[0], g[1]).transpose();
        }
        map_eval_from(position, f, self.planar)
    }
}

pub(crate) fn map_eval_from(position: Vector3<f64>, f: Matrix3x2<f64>, planar: bool) -> Result<MapEval> {
    let (j, normal) = if planar {
        let det = f[(0, 0)] * f[(1, 1)] - f[(0, 1)] * f[(1, 0)];
        if !(det > 0.0) {
            return Err(Error::Geometry(format!("non-positive Jacobian determinant {det:.3e}")));
        }
        (det, Vector3::z())
    } else {
        let c = f.column(0).cross(&f.column(1));
        let j = c.norm();
        if !(j > 0.0) {
            return Err(Error::Geometry("rank-deficient surface gradient".into()));
        }
        (j, c / j)
    };
    let f_pinv = pseudo_inverse(&f)?;
    let p_tau = Matrix3::identity() - normal * normal.transpose();
    Ok(MapEval {
        position,
        f,
        f_pinv,
        j,
        normal,
        p_tau,
    })
}

/// Parameter-space point with barycentric coordinates `lam` in a triangle.
pub(crate) fn param_point(verts: &[[f64; 2]; 3], lam: [f64; 3]) -> [f64; 2] {
    let mut p = [0.0; 2];
    for (v, l) in verts.iter().zip(lam) {
        p[0] += l * v[0];
        p[1] += l * v[1];
    }
    p
}

/// Parameter-space image of a reference point.
pub fn reference_to_param(mesh: &Mesh, tri: usize, point: [f64; 2]) -> [f64; 2] {
    let verts = mesh.triangles()[tri].map(|v| mesh.vertices()[v]);
    param_point(&verts, barycentric(point))
}

pub fn element_map_at(mesh: &Mesh, geometry: &ChartGeometry, tri: usize, g: usize, point: [f64; 2]) -> Result<MapEval> {
    if tri >= mesh.triangles().len() {
        return Err(Error::Config(format!("triangle {tri} out of range")));
    }
    ElementMap::from_chart(mesh, geometry, tri, g)?.eval(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ChartKind;

    fn ref_triangle(scale: f64) -> Mesh {
        Mesh::new(vec![[-scale, 0.0], [scale, 0.0], [0.0, scale]], vec![[0, 1, 2]]).unwrap()
    }

    #[test]
    fn flat_identity_and_scaled() {
        let plane = ChartGeometry::new(ChartKind::Plane);
        let m = element_map_at(&ref_triangle(1.0), &plane, 0, 1, [0.1, 0.2]).unwrap();
        assert!((m.f_planar() - Matrix2::identity()).norm() < 1e-14);
        assert!((m.j - 1.0).abs() < 1e-14);
        let m2 = element_map_at(&ref_triangle(2.0), &plane, 0, 1, [0.1, 0.2]).unwrap();
        assert!((m2.j - 4.0).abs() < 1e-13);
        assert!((m2.f_planar().try_inverse().unwrap() - m2.f_pinv.fixed_view::<2, 2>(0, 0)).norm() < 1e-14);
        assert!((m2.boundary_det(0) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn inverted_planar_rejected() {
        let plane = ChartGeometry::new(ChartKind::Plane);
        let control = vec![Vector3::new(1.0, 0.0, 0.0), Vector3::new(-1.0, 0.0, 0.0), Vector3::new(0.0, 1.0, 0.0)];
        let m = ElementMap::from_control_points(1, control, plane.is_planar()).unwrap();
        assert!(matches!(m.eval([0.0, 0.3]), Err(Error::Geometry(_))));
    }

    #[test]
    fn cylinder_pinv_and_projector() {
        let chart = ChartGeometry::new(ChartKind::Cylinder { radius: 1.0 });
        let mesh = Mesh::structured_rectangle([0.0, std::f64::consts::FRAC_PI_2], [0.0, 1.0], 2, 2).unwrap();
        for t in 0..mesh.triangles().len() {
            let m = element_map_at(&mesh, &chart, t, 2, [0.1, 0.3]).unwrap();
            assert!((m.f_pinv * m.f - Matrix2::identity()).norm() < 1e-12);
            assert!((m.normal.norm() - 1.0).abs() < 1e-14);
            assert!((m.p_tau * m.p_tau - m.p_tau).norm() < 1e-12);
            let gram = m.metric();
            assert!((gram.determinant().sqrt() - m.j).abs() < 1e-12 * m.j);
        }
    }

    #[test]
    fn isoparametric_map_converges_to_chart() {
        let chart = ChartGeometry::new(ChartKind::Sphere { radius: 10.0 });
        let mesh = Mesh::structured_rectangle([0.0, 0.6], [0.0, 0.6], 1, 1).unwrap();
        let p = [0.2, 0.3];
        let exact = chart.position(reference_to_param(&mesh, 0, p));
        let mut errs = Vec::new();
        for g in 1..=4 {
            let m = element_map_at(&mesh, &chart, 0, g, p).unwrap();
            errs.push((m.position - exact).norm());
        }
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
        assert!(errs[3] < 1e-3 * errs[0], "{errs:?}");
    }
}
