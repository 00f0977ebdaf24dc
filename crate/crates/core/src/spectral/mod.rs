//! Periodic-grid Fourier representation of scalar and vector fields.

mod fft;
mod field;
mod grid;
pub mod random;
pub mod snapshot;

pub use field::{Lp, SpectralField, VectorField};
pub use grid::Grid;
