//! Strichartz transform of radial functions on the Heisenberg group, and
//! numerical verification of weighted Fourier inequalities built on it.

pub mod conditions;
pub mod error;
pub mod geometry;
pub mod quad;
pub mod rearrange;
pub mod paley;
pub mod report;
pub mod specfn;
pub mod sublaplacian;
pub mod transform;

pub use error::{Error, Result};
