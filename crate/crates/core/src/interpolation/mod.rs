//! Element-local interpolation into Regge and tangential edge-element spaces.

pub mod dual_mass;
pub mod nedelec;
pub mod operator;
pub mod three_field;

pub use dual_mass::{assemble_dual_mass, DualMassMatrix};
pub use nedelec::TangentialInterpolator;
pub use operator::{interpolate_element, InterpolationOperator};
pub use three_field::{material_mass, three_field_blocks, ThreeFieldBlocks};
