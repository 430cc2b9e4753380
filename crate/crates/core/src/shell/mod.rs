//! Naghdi shell with optional Regge reduction of the membrane strain and
//! tangential edge-element reduction of the shear strain.
//!
//! Kinematics (reference covariant components, `F = ∇X`):
//!
//! ```text
//! director    D = Σ N_a ν_a,      rotation field Θ = Σ N_a (θ1 T1_a + θ2 T2_a)
//! membrane    e = sym(Fᵀ∇u)  [+ ½ ∇uᵀ∇u for the Green model]
//! bending     χ = sym(∇uᵀ∇D - Fᵀ∇Θ)
//! shear       γ_α = u_,α·D - X_,α·Θ
//! ```
//!
//! Energy: `t/2 ∫‖e‖²_M + t³/24 ∫‖χ‖²_M + t/2 κ μ ∫ γ·G⁻¹γ - f(u)` with
//! `κ = 5/6`.

mod dofs;
mod element;
mod load;
mod material;
mod problem;
mod strain;

use std::fmt;
use std::str::FromStr;

pub use dofs::{NodeMap, DOFS_PER_NODE};
pub use load::{EdgeMoment, LoadSpec, SurfaceLoad};
pub use material::{material_norm_sq, MaterialParams};
pub use problem::{
    bending_energy, membrane_energy, shear_energy, solve, EnergyTerms, ShellProblem, ShellState, SolveReport, Term,
};
pub use strain::{green_strain, linearized_membrane_strain, order_from_node_count};

use crate::error::{Error, Result};

pub const SHEAR_CORRECTION: f64 = 5.0 / 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MembraneReduction {
    None,
    Regge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShearReduction {
    None,
    EdgeTangential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrainModel {
    LinearizedMembrane,
    FullGreen,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellConfig {
    pub thickness: f64,
    pub order: usize,
    pub geometry_order: usize,
    pub membrane: MembraneReduction,
    pub shear: ShearReduction,
    pub model: StrainModel,
}

impl ShellConfig {
    /// Isoparametric configuration with both reductions switched on.
    pub fn new(thickness: f64, order: usize) -> Self {
        Self {
            thickness,
            order,
            geometry_order: order,
            membrane: MembraneReduction::Regge,
            shear: ShearReduction::EdgeTangential,
            model: StrainModel::LinearizedMembrane,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.thickness > 0.0) || !self.thickness.is_finite() {
            return Err(Error::Config(format!("thickness must be positive, got {}", self.thickness)));
        }
        if self.order == 0 || self.geometry_order == 0 {
            return Err(Error::Config("displacement and geometry orders must be >= 1".into()));
        }
        if self.order > 6 || self.geometry_order > 6 {
            return Err(Error::Config("orders above 6 are not supported".into()));
        }
        Ok(())
    }

    /// Energy quadrature degree.
    pub fn energy_degree(&self) -> usize {
        let (k, g) = (self.order, self.geometry_order);
        match self.model {
            StrainModel::FullGreen => 4 * k + 2 * (g - 1),
            StrainModel::LinearizedMembrane => 2 * k + 2 * g,
        }
    }

    /// Degree of the edge/interior rules evaluating the interpolation functionals.
    pub fn functional_degree(&self) -> usize {
        2 * self.order + 2 * (self.geometry_order - 1) + 2
    }
}

macro_rules! on_off {
    ($t:ty, $off:path, $on:path) => {
        impl FromStr for $t {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    "on" => Ok($on),
                    "off" => Ok($off),
                    other => Err(Error::Config(format!("expected `on` or `off`, got `{other}`"))),
                }
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(if *self == $on { "on" } else { "off" })
            }
        }
    };
}

on_off!(MembraneReduction, MembraneReduction::None, MembraneReduction::Regge);
on_off!(ShearReduction, ShearReduction::None, ShearReduction::EdgeTangential);
