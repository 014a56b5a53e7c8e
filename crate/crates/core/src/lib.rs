//! Single-photon routing through two spinning whispering-gallery resonators
//! side-coupled to two waveguides.
//!
//! All frequencies and rates are angular, in rad/s.

#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod refine;
pub mod scattering;
pub mod validation;

pub use error::{Error, Result};
pub use model::{PhysicalParams, ReducedParams, SpinConfig};
pub use scattering::{smatrix, Port, SMatrix, Transmission};
