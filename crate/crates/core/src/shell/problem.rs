//! Global shell problem: dof layout, boundary conditions, energies and the
//! Newton solvers.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use rayon::prelude::*;

use super::dofs::{NodeMap, DOFS_PER_NODE};
use super::element::{
    add_geometric_hessian, bending_jacobian, membrane_strain, quadratic_term, shear_jacobian, ElementData,
    ElementSetup, Local, Need,
};
use super::load::LoadSpec;
use super::material::MaterialParams;
use super::{MembraneReduction, ShearReduction, ShellConfig, StrainModel, SHEAR_CORRECTION};
use crate::elements::{edge_length, edge_point, edge_tangent, LagrangeBasis, REF_VERTICES};
use crate::error::{Error, Result};
use crate::geometry::{BoundaryMarker, ChartGeometry, ElementMap, Mesh};
use crate::interpolation::{material_mass, InterpolationOperator, TangentialInterpolator};
use crate::quadrature::{segment_rule, triangle_rule, TriangleRule};
use crate::sparse::{assemble, factor_solve, DofElimination, SparseSymMatrix};

pub const MAX_NEWTON_ITERATIONS: usize = 20;
pub const RELATIVE_TOLERANCE: f64 = 1e-10;
pub const ABSOLUTE_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    Membrane,
    Bending,
    Shear,
    /// `-f(u)`
    External,
}

impl Term {
    pub const ALL: [Term; 4] = [Term::Membrane, Term::Bending, Term::Shear, Term::External];
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyTerms {
    pub membrane: f64,
    pub bending: f64,
    pub shear: f64,
    pub external: f64,
}

impl EnergyTerms {
    pub fn total(&self) -> f64 {
        self.membrane + self.bending + self.shear + self.external
    }
}

/// Global dof vector `[u_x, u_y, u_z, θ_1, θ_2]` per node, plus the element
/// fields `(R, Q)` of the three-field form when that solver produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellState {
    pub dofs: Vec<f64>,
    pub regge_fields: Option<(Vec<DVector<f64>>, Vec<DVector<f64>>)>,
}

impl ShellState {
    pub fn zeros(n_dofs: usize) -> Self {
        Self {
            dofs: vec![0.0; n_dofs],
            regge_fields: None,
        }
    }

    pub fn displacement(&self, node: usize) -> Vector3<f64> {
        let b = DOFS_PER_NODE * node;
        Vector3::new(self.dofs[b], self.dofs[b + 1], self.dofs[b + 2])
    }

    pub fn rotation(&self, node: usize) -> [f64; 2] {
        let b = DOFS_PER_NODE * node;
        [self.dofs[b + 3], self.dofs[b + 4]]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub state: ShellState,
    /// Number of linear solves performed.
    pub iterations: usize,
    pub relative_residual: f64,
    pub absolute_residual: f64,
}

pub struct ShellProblem {
    mesh: Mesh,
    chart: ChartGeometry,
    material: MaterialParams,
    config: ShellConfig,
    basis: LagrangeBasis,
    nodes: NodeMap,
    elements: Vec<ElementData>,
    regge: Option<InterpolationOperator>,
    tangential: Option<TangentialInterpolator>,
    fixed: Vec<bool>,
    elimination: DofElimination,
    load: Vec<f64>,
}

fn to_dyn3(m: &Matrix3<f64>) -> DMatrix<f64> {
    DMatrix::from_column_slice(3, 3, m.as_slice())
}

fn to_dyn2(m: &nalgebra::Matrix2<f64>) -> DMatrix<f64> {
    DMatrix::from_column_slice(2, 2, m.as_slice())
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl ShellProblem {
    pub fn new(mesh: Mesh, chart: ChartGeometry, material: MaterialParams, config: ShellConfig, load: LoadSpec) -> Result<Self> {
        config.validate()?;
        let k = config.order;
        let g = config.geometry_order;
        let basis = LagrangeBasis::new(k)?;
        let nodes = NodeMap::new(&mesh, &basis);
        let energy_rule: TriangleRule = triangle_rule(config.energy_degree());
        let fdeg = config.functional_degree();
        let regge = match config.membrane {
            MembraneReduction::Regge => Some(InterpolationOperator::new(k - 1, fdeg, &energy_rule)?),
            MembraneReduction::None => None,
        };
        let tangential = match config.shear {
            ShearReduction::EdgeTangential => Some(TangentialInterpolator::new(k - 1, fdeg, &energy_rule)?),
            ShearReduction::None => None,
        };
        let setup = ElementSetup {
            basis: &basis,
            chart: &chart,
            material: &material,
            energy_points: &energy_rule.points,
            energy_weights: &energy_rule.weights,
            membrane_samples: regge.as_ref().map(|op| op.sample_points()),
            shear_samples: tangential.as_ref().map(|op| op.sample_points()),
        };
        let mut elements: Vec<ElementData> = (0..mesh.triangles().len())
            .into_par_iter()
            .map(|t| {
                let map = ElementMap::from_chart(&mesh, &chart, t, g)?;
                let verts = mesh.triangles()[t].map(|v| mesh.vertices()[v]);
                let node_params: Vec<[f64; 2]> = nodes.element_nodes(t).iter().map(|n| nodes.position(*n)).collect();
                let mut el = ElementData::build(&setup, &map, verts, nodes.element_dofs(t), &node_params)?;
                if let Some(f) = &load.surface {
                    el.add_surface_load(&energy_rule.weights, f.as_ref(), &chart);
                }
                Ok(el)
            })
            .collect::<Result<_>>()?;
        elements.shrink_to_fit();

        let n_dofs = nodes.n_dofs();
        let mut global_load = vec![0.0; n_dofs];
        for el in &elements {
            for (a, ga) in el.dofs.iter().enumerate() {
                global_load[*ga] += el.surface_load[a];
            }
        }
        for moment in &load.edge_moments {
            add_edge_moment(&mesh, &chart, &basis, &nodes, g, moment, &mut global_load)?;
        }
        let fixed = boundary_mask(&mesh, &chart, &nodes)?;
        let elimination = DofElimination::from_fixed(&fixed);
        Ok(Self {
            mesh,
            chart,
            material,
            config,
            basis,
            nodes,
            elements,
            regge,
            tangential,
            fixed,
            elimination,
            load: global_load,
        })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn chart(&self) -> &ChartGeometry {
        &self.chart
    }

    pub fn config(&self) -> &ShellConfig {
        &self.config
    }

    pub fn material(&self) -> &MaterialParams {
        &self.material
    }

    pub fn nodes(&self) -> &NodeMap {
        &self.nodes
    }

    pub fn n_dofs(&self) -> usize {
        self.nodes.n_dofs()
    }

    pub fn n_free_dofs(&self) -> usize {
        self.elimination.n_free()
    }

    pub fn fixed_mask(&self) -> &[bool] {
        &self.fixed
    }

    pub fn external_load(&self) -> &[f64] {
        &self.load
    }

    pub fn zero_state(&self) -> ShellState {
        ShellState::zeros(self.n_dofs())
    }

    pub fn regge_operator(&self) -> Option<&InterpolationOperator> {
        self.regge.as_ref()
    }

    fn local_dofs(&self, el: &ElementData, state: &ShellState) -> Vec<f64> {
        el.dofs.iter().map(|g| state.dofs[*g]).collect()
    }

    fn membrane_local(&self, el: &ElementData, u: &[f64], need: Need) -> Local {
        let tau = 0.5 * self.config.thickness;
        let green = self.config.model == StrainModel::FullGreen;
        let n_loc = el.n_loc();
        let samples = el.membrane_samples.as_ref().unwrap_or(&el.energy_points);
        let (e, b) = stack_strains(samples, |pg| membrane_strain(pg, u, green, n_loc), 3, n_loc);
        let weights: Vec<DMatrix<f64>> = el.material_weights.iter().map(to_dyn3).collect();
        let mut local = quadratic_term(3, tau, &e, &b, self.regge.as_ref().map(|op| op.apply_matrix()), &weights, need);
        if green {
            if let Some(h) = local.hess.as_mut() {
                add_geometric_hessian(h, samples, &local.sample_stress);
            }
        }
        local
    }

    fn bending_local(&self, el: &ElementData, u: &[f64], need: Need) -> Local {
        let tau = self.config.thickness.powi(3) / 24.0;
        let n_loc = el.n_loc();
        let b = stack_rows(&el.energy_points, |pg| bending_jacobian(pg, &el.frames, n_loc), 3, n_loc);
        let e = &b * DVector::from_column_slice(u);
        let weights: Vec<DMatrix<f64>> = el.material_weights.iter().map(to_dyn3).collect();
        quadratic_term(3, tau, &e, &b, None, &weights, need)
    }

    fn shear_local(&self, el: &ElementData, u: &[f64], need: Need) -> Local {
        let tau = 0.5 * self.config.thickness * SHEAR_CORRECTION * self.material.shear_modulus();
        let n_loc = el.n_loc();
        let samples = el.shear_samples.as_ref().unwrap_or(&el.energy_points);
        let b = stack_rows(samples, |pg| shear_jacobian(pg, &el.frames, n_loc), 2, n_loc);
        let e = &b * DVector::from_column_slice(u);
        let weights: Vec<DMatrix<f64>> = el.shear_weights.iter().map(to_dyn2).collect();
        quadratic_term(2, tau, &e, &b, self.tangential.as_ref().map(|op| op.apply_matrix()), &weights, need)
    }

    fn external_local(&self, el: &ElementData, u: &[f64], need: Need) -> Local {
        // edge moments live only in the global load vector; handled in `energy`
        let f = &el.surface_load;
        let _ = need;
        Local {
            energy: -f.dot(&DVector::from_column_slice(u)),
            grad: -f.clone(),
            hess: Some(DMatrix::zeros(f.len(), f.len())),
            sample_stress: DVector::zeros(0),
        }
    }

    fn term_local(&self, el: &ElementData, term: Term, u: &[f64], need: Need) -> Local {
        match term {
            Term::Membrane => self.membrane_local(el, u, need),
            Term::Bending => self.bending_local(el, u, need),
            Term::Shear => self.shear_local(el, u, need),
            Term::External => self.external_local(el, u, need),
        }
    }

    fn check_state(&self, state: &ShellState) -> Result<()> {
        if state.dofs.len() != self.n_dofs() {
            return Err(Error::Config(format!(
                "state has {} dofs, problem has {}",
                state.dofs.len(),
                self.n_dofs()
            )));
        }
        Ok(())
    }

    /// Value of one energy term.
    pub fn energy(&self, state: &ShellState, term: Term) -> Result<f64> {
        self.check_state(state)?;
        if term == Term::External {
            return Ok(-self.load.iter().zip(&state.dofs).map(|(f, u)| f * u).sum::<f64>());
        }
        let parts: Vec<f64> = self
            .elements
            .par_iter()
            .map(|el| self.term_local(el, term, &self.local_dofs(el, state), Need::Energy).energy)
            .collect();
        Ok(parts.iter().sum())
    }

    pub fn energies(&self, state: &ShellState) -> Result<EnergyTerms> {
        Ok(EnergyTerms {
            membrane: self.energy(state, Term::Membrane)?,
            bending: self.energy(state, Term::Bending)?,
            shear: self.energy(state, Term::Shear)?,
            external: self.energy(state, Term::External)?,
        })
    }

    /// Gradient of one term (or of the total energy when `term` is `None`),
    /// over all global dofs.
    pub fn gradient(&self, state: &ShellState, term: Option<Term>) -> Result<Vec<f64>> {
        self.check_state(state)?;
        let internal: Vec<Term> = match term {
            Some(Term::External) => Vec::new(),
            Some(t) => vec![t],
            None => vec![Term::Membrane, Term::Bending, Term::Shear],
        };
        let locals: Vec<DVector<f64>> = self
            .elements
            .par_iter()
            .map(|el| {
                let u = self.local_dofs(el, state);
                internal
                    .iter()
                    .fold(DVector::zeros(el.n_loc()), |acc, t| acc + self.term_local(el, *t, &u, Need::Gradient).grad)
            })
            .collect();
        let mut g = vec![0.0; self.n_dofs()];
        for (el, lg) in self.elements.iter().zip(&locals) {
            for (a, ga) in el.dofs.iter().enumerate() {
                g[*ga] += lg[a];
            }
        }
        if matches!(term, None | Some(Term::External)) {
            for (gi, fi) in g.iter_mut().zip(&self.load) {
                *gi -= fi;
            }
        }
        Ok(g)
    }

    fn local_hessians(&self, state: &ShellState, terms: &[Term]) -> Vec<DMatrix<f64>> {
        self.elements
            .par_iter()
            .map(|el| {
                let u = self.local_dofs(el, state);
                terms.iter().fold(DMatrix::zeros(el.n_loc(), el.n_loc()), |acc, t| {
                    acc + self.term_local(el, *t, &u, Need::Hessian).hess.expect("hessian requested")
                })
            })
            .collect()
    }

    /// Hessian of one term (or of the total energy) over all global dofs,
    /// without boundary elimination.
    pub fn hessian(&self, state: &ShellState, term: Option<Term>) -> Result<SparseSymMatrix> {
        self.check_state(state)?;
        let terms: Vec<Term> = term.map_or_else(|| vec![Term::Membrane, Term::Bending, Term::Shear], |t| vec![t]);
        let locals = self.local_hessians(state, &terms);
        assemble(
            &DofElimination::identity(self.n_dofs()),
            self.elements.iter().zip(&locals).map(|(el, h)| (el.dofs.as_slice(), h)),
        )
    }

    fn converged(&self, g_free: &[f64], f_norm: f64) -> (bool, f64, f64) {
        let abs = norm(g_free);
        let rel = if f_norm > 0.0 { abs / f_norm } else { f64::INFINITY };
        (rel <= RELATIVE_TOLERANCE || abs <= ABSOLUTE_TOLERANCE, rel, abs)
    }

    /// Newton's method on the total energy, starting from `initial`.
    /// Constrained dofs are held at their initial values.
    pub fn solve(&self, initial: ShellState) -> Result<SolveReport> {
        self.check_state(&initial)?;
        let mut state = initial;
        state.regge_fields = None;
        let f_norm = norm(&self.elimination.restrict(&self.load));
        let mut iterations = 0;
        loop {
            let g = self.elimination.restrict(&self.gradient(&state, None)?);
            let (ok, rel, abs) = self.converged(&g, f_norm);
            if iterations > 0 && ok {
                return Ok(SolveReport {
                    state,
                    iterations,
                    relative_residual: rel,
                    absolute_residual: abs,
                });
            }
            if iterations >= MAX_NEWTON_ITERATIONS {
                return Err(Error::NoConvergence {
                    iterations,
                    relative_residual: rel,
                    absolute_residual: abs,
                });
            }
            let locals = self.local_hessians(&state, &[Term::Membrane, Term::Bending, Term::Shear]);
            let k = assemble(
                &self.elimination,
                self.elements.iter().zip(&locals).map(|(el, h)| (el.dofs.as_slice(), h)),
            )?;
            let rhs: Vec<f64> = g.iter().map(|v| -v).collect();
            let du = self.elimination.extend(&factor_solve(&k, &rhs)?.solution);
            for (s, d) in state.dofs.iter_mut().zip(&du) {
                *s += d;
            }
            iterations += 1;
        }
    }

    /// Newton's method on the three-field form
    /// `t/2 (∫‖R‖²_M + ⟨R - e(u), Q⟩) + bending + shear - f(u)`, with the
    /// element fields `(R, Q)` eliminated locally in every step.
    pub fn solve_three_field(&self) -> Result<SolveReport> {
        let op = self
            .regge
            .as_ref()
            .ok_or_else(|| Error::Config("the three-field form requires Regge membrane reduction".into()))?;
        let dual = op.dual_mass();
        let a_f = op.functional_matrix();
        let tau = 0.5 * self.config.thickness;
        let green = self.config.model == StrainModel::FullGreen;
        let nr = dual.dim();
        let a_rr: Vec<DMatrix<f64>> = self
            .elements
            .par_iter()
            .map(|el| material_mass(op, &el.material_weights))
            .collect::<Result<_>>()?;
        let mut state = self.zero_state();
        let mut r_fields = vec![DVector::zeros(nr); self.elements.len()];
        let mut q_fields = vec![DVector::zeros(nr); self.elements.len()];
        let f_norm = norm(&self.elimination.restrict(&self.load));
        let mut iterations = 0;

        struct Step {
            a_prime: DMatrix<f64>,
            g_u: DVector<f64>,
            g_r: DVector<f64>,
            g_q: DVector<f64>,
            k: DMatrix<f64>,
            g_eff: DVector<f64>,
        }

        loop {
            let steps: Vec<Step> = self
                .elements
                .par_iter()
                .enumerate()
                .map(|(i, el)| {
                    let u = self.local_dofs(el, &state);
                    let n_loc = el.n_loc();
                    let samples = el.membrane_samples.as_ref().expect("Regge samples present");
                    let (e, b) = stack_strains(samples, |pg| membrane_strain(pg, &u, green, n_loc), 3, n_loc);
                    let a = a_f * &e;
                    let a_prime = a_f * &b;
                    let (r, q) = (&r_fields[i], &q_fields[i]);
                    let m = dual.full();
                    let g_r = tau * (2.0 * &a_rr[i] * r + m.transpose() * q);
                    let g_q = tau * (m * r - &a);
                    let x = dual.solve_matrix(&a_prime); // M⁻¹ a'
                    let mut k = 2.0 * tau * x.transpose() * &a_rr[i] * &x;
                    if green {
                        let stress = -tau * a_f.transpose() * q;
                        add_geometric_hessian(&mut k, samples, &stress);
                    }
                    let mut g_u = -tau * a_prime.transpose() * q;
                    let mut hb = DMatrix::zeros(n_loc, n_loc);
                    for t in [Term::Bending, Term::Shear] {
                        let l = self.term_local(el, t, &u, Need::Hessian);
                        g_u += l.grad;
                        hb += l.hess.expect("hessian requested");
                    }
                    let g_eff = &g_u + a_prime.transpose() * dual.solve_transpose(&g_r)
                        - 2.0 * x.transpose() * &a_rr[i] * dual.solve(&g_q);
                    Step {
                        a_prime,
                        g_u,
                        g_r,
                        g_q,
                        k: 0.5 * (&k + k.transpose()) + hb,
                        g_eff,
                    }
                })
                .collect();
            // residual of the full system
            let mut g_u = vec![0.0; self.n_dofs()];
            let mut local_sq = 0.0;
            for (el, s) in self.elements.iter().zip(&steps) {
                for (a, ga) in el.dofs.iter().enumerate() {
                    g_u[*ga] += s.g_u[a];
                }
                local_sq += s.g_r.norm_squared() + s.g_q.norm_squared();
            }
            for (gi, fi) in g_u.iter_mut().zip(&self.load) {
                *gi -= fi;
            }
            let gu_free = self.elimination.restrict(&g_u);
            let abs = (norm(&gu_free).powi(2) + local_sq).sqrt();
            let rel = if f_norm > 0.0 { abs / f_norm } else { f64::INFINITY };
            if iterations > 0 && (rel <= RELATIVE_TOLERANCE || abs <= ABSOLUTE_TOLERANCE) {
                state.regge_fields = Some((r_fields, q_fields));
                return Ok(SolveReport {
                    state,
                    iterations,
                    relative_residual: rel,
                    absolute_residual: abs,
                });
            }
            if iterations >= MAX_NEWTON_ITERATIONS {
                return Err(Error::NoConvergence {
                    iterations,
                    relative_residual: rel,
                    absolute_residual: abs,
                });
            }
            let k = assemble(
                &self.elimination,
                self.elements.iter().zip(&steps).map(|(el, s)| (el.dofs.as_slice(), &s.k)),
            )?;
            let mut rhs = vec![0.0; self.n_dofs()];
            for (el, s) in self.elements.iter().zip(&steps) {
                for (a, ga) in el.dofs.iter().enumerate() {
                    rhs[*ga] -= s.g_eff[a];
                }
            }
            for (ri, fi) in rhs.iter_mut().zip(&self.load) {
                *ri += fi;
            }
            let du = self.elimination.extend(&factor_solve(&k, &self.elimination.restrict(&rhs))?.solution);
            for (i, (el, s)) in self.elements.iter().zip(&steps).enumerate() {
                let du_loc = DVector::from_iterator(el.n_loc(), el.dofs.iter().map(|g| du[*g]));
                let dr = dual.solve(&(&s.a_prime * du_loc - &s.g_q / tau));
                let dq = -dual.solve_transpose(&(2.0 * &a_rr[i] * &dr + &s.g_r / tau));
                r_fields[i] += dr;
                q_fields[i] += dq;
            }
            for (s, d) in state.dofs.iter_mut().zip(&du) {
                *s += d;
            }
            iterations += 1;
        }
    }

    /// Displacement at a parameter-space point.
    pub fn displacement_at(&self, state: &ShellState, param: [f64; 2]) -> Result<Vector3<f64>> {
        let (t, lam) = self.locate(param)?;
        let p = [
            lam[0] * REF_VERTICES[0][0] + lam[1] * REF_VERTICES[1][0] + lam[2] * REF_VERTICES[2][0],
            lam[0] * REF_VERTICES[0][1] + lam[1] * REF_VERTICES[1][1] + lam[2] * REF_VERTICES[2][1],
        ];
        let n = self.basis.eval(p);
        Ok(self
            .nodes
            .element_nodes(t)
            .iter()
            .zip(&n)
            .fold(Vector3::zeros(), |acc, (node, na)| acc + state.displacement(*node) * *na))
    }

    fn locate(&self, param: [f64; 2]) -> Result<(usize, [f64; 3])> {
        let mut best: Option<(usize, [f64; 3], f64)> = None;
        for (t, tri) in self.mesh.triangles().iter().enumerate() {
            let [a, b, c] = tri.map(|v| self.mesh.vertices()[v]);
            let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
            let l1 = ((b[0] - param[0]) * (c[1] - param[1]) - (c[0] - param[0]) * (b[1] - param[1])) / det;
            let l2 = ((c[0] - param[0]) * (a[1] - param[1]) - (a[0] - param[0]) * (c[1] - param[1])) / det;
            let lam = [l1, l2, 1.0 - l1 - l2];
            let worst = lam.iter().cloned().fold(f64::INFINITY, f64::min);
            if best.as_ref().is_none_or(|b| worst > b.2) {
                best = Some((t, lam, worst));
            }
        }
        match best {
            Some((t, lam, worst)) if worst >= -1e-10 => Ok((t, lam)),
            _ => Err(Error::Config(format!("point {param:?} lies outside the mesh"))),
        }
    }
}

/// Values and Jacobians of a strain at sample points, stacked.
fn stack_strains<F>(samples: &[super::element::PointGeom], f: F, nc: usize, n_loc: usize) -> (DVector<f64>, DMatrix<f64>)
where
    F: Fn(&super::element::PointGeom) -> (Vector3<f64>, DMatrix<f64>),
{
    let mut e = DVector::zeros(nc * samples.len());
    let mut b = DMatrix::zeros(nc * samples.len(), n_loc);
    for (s, pg) in samples.iter().enumerate() {
        let (v, bs) = f(pg);
        e.rows_mut(nc * s, nc).copy_from(&v.rows(0, nc));
        b.rows_mut(nc * s, nc).copy_from(&bs);
    }
    (e, b)
}

fn stack_rows<F>(samples: &[super::element::PointGeom], f: F, nc: usize, n_loc: usize) -> DMatrix<f64>
where
    F: Fn(&super::element::PointGeom) -> DMatrix<f64>,
{
    let mut b = DMatrix::zeros(nc * samples.len(), n_loc);
    for (s, pg) in samples.iter().enumerate() {
        b.rows_mut(nc * s, nc).copy_from(&f(pg));
    }
    b
}

fn boundary_mask(mesh: &Mesh, chart: &ChartGeometry, nodes: &NodeMap) -> Result<Vec<bool>> {
    let mut fixed = vec![false; nodes.n_dofs()];
    for e in 0..mesh.edges().len() {
        let Some(marker) = mesh.marker(e) else { continue };
        for node in nodes.edge_nodes(mesh, e) {
            let base = DOFS_PER_NODE * node;
            match marker {
                BoundaryMarker::Free => {}
                BoundaryMarker::Clamped => fixed[base..base + DOFS_PER_NODE].fill(true),
                BoundaryMarker::Symmetry(axis) => {
                    let a = axis.index();
                    fixed[base + a] = true;
                    let frame = chart.tangent_frame(nodes.position(node));
                    let hit = frame.iter().position(|t| t[a].abs() > 1.0 - 1e-8);
                    match hit {
                        Some(i) => fixed[base + 3 + i] = true,
                        None => {
                            return Err(Error::Config(format!(
                                "symmetry plane {marker} is not aligned with the tangent frame at {:?}",
                                nodes.position(node)
                            )))
                        }
                    }
                }
            }
        }
    }
    Ok(fixed)
}

fn add_edge_moment(
    mesh: &Mesh,
    chart: &ChartGeometry,
    basis: &LagrangeBasis,
    nodes: &NodeMap,
    g: usize,
    moment: &super::load::EdgeMoment,
    load: &mut [f64],
) -> Result<()> {
    let rule = segment_rule(2 * basis.order() + 2 * g);
    for e in 0..mesh.edges().len() {
        if !mesh.is_boundary_edge(e) {
            continue;
        }
        let [a, b] = mesh.edges()[e];
        if !(moment.selector)(mesh.vertices()[a], mesh.vertices()[b]) {
            continue;
        }
        let t = mesh.edge_triangles(e)[0];
        let le = mesh.triangle_edges(t).iter().position(|x| *x == e).expect("edge belongs to its triangle");
        let map = ElementMap::from_chart(mesh, chart, t, g)?;
        let verts = mesh.triangles()[t].map(|v| mesh.vertices()[v]);
        let local_nodes = nodes.element_nodes(t);
        let frames: Vec<[Vector3<f64>; 2]> = local_nodes.iter().map(|n| chart.tangent_frame(nodes.position(*n))).collect();
        let half = 0.5 * edge_length(le);
        for (s, w) in rule.iter() {
            let p = edge_point(le, s[0]);
            let m = map.eval(p)?;
            let jb = (m.f * edge_tangent(le)).norm();
            let lam = crate::elements::barycentric(p);
            let param = [
                lam[0] * verts[0][0] + lam[1] * verts[1][0] + lam[2] * verts[2][0],
                lam[0] * verts[0][1] + lam[1] * verts[1][1] + lam[2] * verts[2][1],
            ];
            let t1 = chart.tangent_frame(param)[0];
            let ds = w * half * jb;
            for (i, na) in basis.eval(p).iter().enumerate() {
                for (c, tc) in frames[i].iter().enumerate() {
                    load[DOFS_PER_NODE * local_nodes[i] + 3 + c] += moment.moment_per_length * na * tc.dot(&t1) * ds;
                }
            }
        }
    }
    Ok(())
}

pub fn membrane_energy(problem: &ShellProblem, state: &ShellState) -> Result<f64> {
    problem.energy(state, Term::Membrane)
}

pub fn bending_energy(problem: &ShellProblem, state: &ShellState) -> Result<f64> {
    problem.energy(state, Term::Bending)
}

pub fn shear_energy(problem: &ShellProblem, state: &ShellState) -> Result<f64> {
    problem.energy(state, Term::Shear)
}

pub fn solve(problem: &ShellProblem) -> Result<SolveReport> {
    problem.solve(problem.zero_state())
}
