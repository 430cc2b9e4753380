//! Per-element geometric tables and local energy contributions.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix3, Matrix3x2, Vector2, Vector3};

use super::dofs::DOFS_PER_NODE;
use super::material::MaterialParams;
use crate::elements::LagrangeBasis;
use crate::error::Result;
use crate::geometry::{ChartGeometry, ElementMap};

/// Geometry and shape data at one reference point.
#[derive(Debug, Clone)]
pub(crate) struct PointGeom {
    pub n: Vec<f64>,
    pub dn: Vec<Vector2<f64>>,
    pub f: Matrix3x2<f64>,
    pub director: Vector3<f64>,
    pub grad_director: Matrix3x2<f64>,
    /// `G⁻¹`
    pub h: Matrix2<f64>,
    pub j: f64,
    pub param: [f64; 2],
    pub position: Vector3<f64>,
}

#[derive(Debug, Clone)]
pub(crate) struct ElementData {
    pub dofs: Vec<usize>,
    /// Nodal tangent frames `[T1, T2]`.
    pub frames: Vec<[Vector3<f64>; 2]>,
    pub energy_points: Vec<PointGeom>,
    /// `w J D_M(G⁻¹)` at each energy point.
    pub material_weights: Vec<Matrix3<f64>>,
    /// `w J G⁻¹` at each energy point.
    pub shear_weights: Vec<Matrix2<f64>>,
    pub membrane_samples: Option<Vec<PointGeom>>,
    pub shear_samples: Option<Vec<PointGeom>>,
    pub surface_load: DVector<f64>,
}

pub(crate) struct ElementSetup<'a> {
    pub basis: &'a LagrangeBasis,
    pub chart: &'a ChartGeometry,
    pub material: &'a MaterialParams,
    pub energy_points: &'a [[f64; 2]],
    pub energy_weights: &'a [f64],
    pub membrane_samples: Option<&'a [[f64; 2]]>,
    pub shear_samples: Option<&'a [[f64; 2]]>,
}

fn param_of(verts: &[[f64; 2]; 3], p: [f64; 2]) -> [f64; 2] {
    let lam = crate::elements::barycentric(p);
    [
        lam[0] * verts[0][0] + lam[1] * verts[1][0] + lam[2] * verts[2][0],
        lam[0] * verts[0][1] + lam[1] * verts[1][1] + lam[2] * verts[2][1],
    ]
}

pub(crate) fn point_geom(
    basis: &LagrangeBasis,
    map: &ElementMap,
    normals: &[Vector3<f64>],
    verts: &[[f64; 2]; 3],
    p: [f64; 2],
) -> Result<PointGeom> {
    let m = map.eval(p)?;
    let nn = basis.len();
    let mut n = vec![0.0; nn];
    let mut g = vec![[0.0; 2]; nn];
    basis.eval_with_grad(p, &mut n, &mut g);
    let dn: Vec<Vector2<f64>> = g.iter().map(|v| Vector2::new(v[0], v[1])).collect();
    let mut director = Vector3::zeros();
    let mut grad_director = Matrix3x2::zeros();
    for a in 0..nn {
        director += normals[a] * n[a];
        grad_director += normals[a] * dn[a].transpose();
    }
    let metric = m.f.transpose() * m.f;
    let h = metric.try_inverse().expect("metric checked by the element map");
    Ok(PointGeom {
        n,
        dn,
        f: m.f,
        director,
        grad_director,
        h,
        j: m.j,
        param: param_of(verts, p),
        position: m.position,
    })
}

impl ElementData {
    pub fn build(setup: &ElementSetup<'_>, map: &ElementMap, verts: [[f64; 2]; 3], dofs: Vec<usize>, node_params: &[[f64; 2]]) -> Result<Self> {
        let normals: Vec<Vector3<f64>> = node_params.iter().map(|p| setup.chart.normal(*p)).collect();
        let frames = node_params.iter().map(|p| setup.chart.tangent_frame(*p)).collect();
        let geom = |pts: &[[f64; 2]]| -> Result<Vec<PointGeom>> {
            pts.iter().map(|p| point_geom(setup.basis, map, &normals, &verts, *p)).collect()
        };
        let energy_points = geom(setup.energy_points)?;
        let material_weights = energy_points
            .iter()
            .zip(setup.energy_weights)
            .map(|(pg, w)| setup.material.voigt_matrix(&pg.h) * (w * pg.j))
            .collect();
        let shear_weights = energy_points.iter().zip(setup.energy_weights).map(|(pg, w)| pg.h * (w * pg.j)).collect();
        let membrane_samples = setup.membrane_samples.map(geom).transpose()?;
        let shear_samples = setup.shear_samples.map(geom).transpose()?;
        let n_loc = DOFS_PER_NODE * setup.basis.len();
        Ok(Self {
            dofs,
            frames,
            energy_points,
            material_weights,
            shear_weights,
            membrane_samples,
            shear_samples,
            surface_load: DVector::zeros(n_loc),
        })
    }

    pub fn n_loc(&self) -> usize {
        self.dofs.len()
    }

    pub fn add_surface_load(&mut self, weights: &[f64], load: &dyn Fn([f64; 2], Vector3<f64>, Vector3<f64>) -> Vector3<f64>, chart: &ChartGeometry) {
        for (pg, w) in self.energy_points.iter().zip(weights) {
            let force = load(pg.param, pg.position, chart.normal(pg.param)) * (w * pg.j);
            for (a, na) in pg.n.iter().enumerate() {
                for c in 0..3 {
                    self.surface_load[DOFS_PER_NODE * a + c] += na * force[c];
                }
            }
        }
    }
}

pub(crate) fn grad_u(pg: &PointGeom, u: &[f64]) -> Matrix3x2<f64> {
    let mut g = Matrix3x2::zeros();
    for (a, dn) in pg.dn.iter().enumerate() {
        let ua = Vector3::new(u[DOFS_PER_NODE * a], u[DOFS_PER_NODE * a + 1], u[DOFS_PER_NODE * a + 2]);
        g += ua * dn.transpose();
    }
    g
}

/// Membrane strain `sym(Fᵀ∇u) [+ ½∇uᵀ∇u]` and its Jacobian (3 × n_loc).
pub(crate) fn membrane_strain(pg: &PointGeom, u: &[f64], green: bool, n_loc: usize) -> (Vector3<f64>, DMatrix<f64>) {
    let gu = grad_u(pg, u);
    let mut e = pg.f.transpose() * gu;
    let fd = if green {
        e += 0.5 * gu.transpose() * gu;
        pg.f + gu
    } else {
        pg.f
    };
    let v = Vector3::new(e[(0, 0)], e[(1, 1)], 0.5 * (e[(0, 1)] + e[(1, 0)]));
    let mut b = DMatrix::zeros(3, n_loc);
    for (a, dn) in pg.dn.iter().enumerate() {
        for c in 0..3 {
            let col = DOFS_PER_NODE * a + c;
            b[(0, col)] = fd[(c, 0)] * dn.x;
            b[(1, col)] = fd[(c, 1)] * dn.y;
            b[(2, col)] = 0.5 * (fd[(c, 0)] * dn.y + fd[(c, 1)] * dn.x);
        }
    }
    (v, b)
}

/// Bending strain Jacobian (3 × n_loc); the strain is linear in the dofs.
pub(crate) fn bending_jacobian(pg: &PointGeom, frames: &[[Vector3<f64>; 2]], n_loc: usize) -> DMatrix<f64> {
    let dd = &pg.grad_director;
    let mut b = DMatrix::zeros(3, n_loc);
    for (a, dn) in pg.dn.iter().enumerate() {
        for c in 0..3 {
            let col = DOFS_PER_NODE * a + c;
            b[(0, col)] = dn.x * dd[(c, 0)];
            b[(1, col)] = dn.y * dd[(c, 1)];
            b[(2, col)] = 0.5 * (dn.x * dd[(c, 1)] + dn.y * dd[(c, 0)]);
        }
        for (i, t) in frames[a].iter().enumerate() {
            let col = DOFS_PER_NODE * a + 3 + i;
            let p1 = pg.f.column(0).dot(t);
            let p2 = pg.f.column(1).dot(t);
            b[(0, col)] = -p1 * dn.x;
            b[(1, col)] = -p2 * dn.y;
            b[(2, col)] = -0.5 * (p1 * dn.y + p2 * dn.x);
        }
    }
    b
}

/// Shear strain Jacobian (2 × n_loc); linear in the dofs.
pub(crate) fn shear_jacobian(pg: &PointGeom, frames: &[[Vector3<f64>; 2]], n_loc: usize) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(2, n_loc);
    for (a, (dn, na)) in pg.dn.iter().zip(&pg.n).enumerate() {
        for c in 0..3 {
            let col = DOFS_PER_NODE * a + c;
            b[(0, col)] = dn.x * pg.director[c];
            b[(1, col)] = dn.y * pg.director[c];
        }
        for (i, t) in frames[a].iter().enumerate() {
            let col = DOFS_PER_NODE * a + 3 + i;
            b[(0, col)] = -na * pg.f.column(0).dot(t);
            b[(1, col)] = -na * pg.f.column(1).dot(t);
        }
    }
    b
}

/// Adds the second derivative of `Σ_s σ_s · ½∇uᵀ∇u(x_s)`.
pub(crate) fn add_geometric_hessian(hess: &mut DMatrix<f64>, samples: &[PointGeom], stress: &DVector<f64>) {
    for (s, pg) in samples.iter().enumerate() {
        let (s1, s2, s3) = (stress[3 * s], stress[3 * s + 1], stress[3 * s + 2]);
        for (a, da) in pg.dn.iter().enumerate() {
            for (b, db) in pg.dn.iter().enumerate() {
                let v = s1 * da.x * db.x + s2 * da.y * db.y + 0.5 * s3 * (da.x * db.y + da.y * db.x);
                for c in 0..3 {
                    hess[(DOFS_PER_NODE * a + c, DOFS_PER_NODE * b + c)] += v;
                }
            }
        }
    }
}

/// What a local evaluation must produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Need {
    Energy,
    Gradient,
    Hessian,
}

pub(crate) struct Local {
    pub energy: f64,
    pub grad: DVector<f64>,
    pub hess: Option<DMatrix<f64>>,
    /// `∂energy/∂(sample strains)`
    pub sample_stress: DVector<f64>,
}

/// `τ Σ_q r_qᵀ W_q r_q` with `r = C e_S` (or `r = e_S` without reduction),
/// where `e_S` are strain samples with Jacobian `b_s`.
pub(crate) fn quadratic_term(
    nc: usize,
    tau: f64,
    samples: &DVector<f64>,
    b_s: &DMatrix<f64>,
    apply: Option<&DMatrix<f64>>,
    weights: &[DMatrix<f64>],
    need: Need,
) -> Local {
    let r = apply.map_or_else(|| samples.clone(), |c| c * samples);
    let nq = weights.len();
    let mut wr = DVector::zeros(nc * nq);
    let mut energy = 0.0;
    for (q, w) in weights.iter().enumerate() {
        let rq = r.rows(nc * q, nc);
        let wrq = w * rq;
        energy += rq.dot(&wrq);
        wr.rows_mut(nc * q, nc).copy_from(&wrq);
    }
    energy *= tau;
    let n_loc = b_s.ncols();
    if need == Need::Energy {
        return Local {
            energy,
            grad: DVector::zeros(n_loc),
            hess: None,
            sample_stress: DVector::zeros(0),
        };
    }
    let sigma = 2.0 * tau * wr;
    let sample_stress = apply.map_or_else(|| sigma.clone(), |c| c.transpose() * &sigma);
    let grad = b_s.transpose() * &sample_stress;
    let hess = (need == Need::Hessian).then(|| {
        let cb = apply.map_or_else(|| b_s.clone(), |c| c * b_s);
        let mut wcb = DMatrix::zeros(cb.nrows(), n_loc);
        for (q, w) in weights.iter().enumerate() {
            wcb.rows_mut(nc * q, nc).copy_from(&(w * cb.rows(nc * q, nc)));
        }
        let k = 2.0 * tau * cb.transpose() * wcb;
        0.5 * (&k + k.transpose())
    });
    Local {
        energy,
        grad,
        hess,
        sample_stress,
    }
}
