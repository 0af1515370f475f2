//! Numerical engine for the singularly perturbed Blaschke family
//! `z^3 (z - a) / (1 - conj(a) z) + lambda / z^2`.

pub mod error;
pub mod numerics;
pub mod raster;
pub mod structure;

pub use error::{Error, Result};
