//! Dissipation symbols, the catalog of weakening factors `g`, and the
//! Osgood-type divergence probe.

mod dissipation;
mod gfunc;
mod osgood;
pub mod quadrature;

pub use dissipation::DissipationSpec;
pub use gfunc::{parse_points, GFunction};
pub use osgood::{osgood_classify, osgood_primitive, Classification, OsgoodVerdict, UpperLimit};
