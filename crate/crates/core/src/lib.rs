//! Exact computation of bifurcation sets of rational functions `F = f/g` in
//! two complex variables.

pub mod error;
pub mod polyalg;
pub mod elimination;
pub mod roots;
pub mod local;
pub mod binfty;
pub mod euler;
pub mod bifurcation;
pub mod numeric;
pub mod parser;
pub mod report;

pub use error::{Error, Result};
