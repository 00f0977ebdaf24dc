//! Littlewood-Paley decomposition on the periodic grid, Besov norms, and
//! numerical probes of the Bernstein, commutator and `‖∇u‖_∞` splitting
//! inequalities.

mod bernstein;
mod commutator;
mod partition;
mod split;

pub use bernstein::{bernstein_fractional_ratio, bernstein_ratio, check_annulus_support};
pub use commutator::{commutator_ratio, CommutatorExponents};
pub use partition::{besov_norm, chi, phi, phi0, psi, BesovIndex, DyadicPartition};
pub use split::{grad_linf, grad_uinf_split, l_grad_norm_sq, GradSplit};

#[cfg(test)]
mod tests;
