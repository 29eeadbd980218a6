//! Grafting, bending and Thurston coordinates for CP1-structures on closed
//! surfaces.
//!
//! The forward direction builds a grafted structure from Fenchel-Nielsen data
//! and a weighted multicurve: the bending cocycle, the deformed holonomy, the
//! equivariant pleated surface and the developing map across grafting
//! cylinders. The inverse direction recovers maximal disks, cores, the
//! transverse measure and grafting weights.

// `!(x > 0.0)` rejects NaN along with the failing values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod grafting;
pub mod hyperbolic;
pub mod moebius;
pub mod surface;
pub mod thurston;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;
