//! Laguerre, Bessel, Gamma and Macdonald functions.

mod bessel;
mod gamma;
mod laguerre;
mod macdonald;

pub use bessel::{bessel_first_zero, bessel_j, bessel_j_ratio, bessel_zero, BesselZero};
pub use gamma::{duplication_residual, gamma, gamma_ratio, log_beta, log_gamma};
pub(crate) use gamma::lgamma_pos;
pub use laguerre::{
    cnk, first_zero_lower_bound, laguerre_all, laguerre_first_zero, laguerre_fn, laguerre_poly, log_cnk,
    LaguerreIndex, LaguerreSweep,
};
pub use macdonald::{macdonald_bound, macdonald_k};
