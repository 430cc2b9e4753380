//! Regge finite elements, the canonical Regge interpolant and a Naghdi shell
//! model whose membrane strains are passed through that interpolant.

pub mod bench;
pub mod elements;
pub mod error;
pub mod geometry;
pub mod interpolation;
pub mod polynomials;
pub mod quadrature;
pub mod shell;
pub mod sparse;
pub mod tensor;

pub use error::{Error, Result};
