//! Sculptures whose symmetry group is exactly the quaternion group Q8.
//!
//! A seed design drawn in the cube `[-1,1]^3` is placed in the eight cells of
//! the hypercube by right multiplication with `±1, ±i, ±j, ±k` on the unit
//! 3-sphere, then brought to R^3 by stereographic projection. The resulting
//! point sets can be checked by brute force against every signed
//! permutation of R^4.

pub mod blocks;
#[cfg(feature = "cli")]
pub mod cli;
pub mod error;
pub mod hypercube;
pub mod mesh;
pub mod pipeline;
pub mod projection;
pub mod quat;
pub mod seed;
pub mod symmetry;
pub mod vector;

pub use error::{Error, Result};
pub use quat::{Isometry4, Orientation, Q8Element, Quaternion, UnitQuaternion};
