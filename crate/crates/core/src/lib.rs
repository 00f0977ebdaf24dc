//! Pseudo-spectral solver for incompressible MHD with logarithmically
//! weakened Fourier-multiplier viscosity and no magnetic diffusion, plus a
//! Littlewood-Paley toolkit that measures the a priori estimates governing
//! its global regularity.

// NaN must fail range checks, so `!(x >= lo)` is intended throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod integrator;
pub mod littlewood_paley;
pub mod multiplier;
pub mod par;
pub mod spectral;

pub use error::{Error, Result};
