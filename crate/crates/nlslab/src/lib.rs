//! Numerical laboratory for the selection of standing waves in the 1D cubic
//! nonlinear Schrödinger equation with a multi-well trapping potential.
//!
//! The pipeline: build a potential (directly or by inserting bound states
//! into a repulsive seed), compute its discrete and continuous spectral data,
//! factor the operator through a Darboux ladder, assemble the refined profile
//! and Fermi-golden-rule coefficients, evolve the PDE with a split-step
//! integrator, and monitor virial/dissipation functionals along the run.
//!
//! Modules follow the pipeline order:
//!
//! - [`grid`]: periodic grid, sampled fields, spectral calculus, weighted norms
//! - [`spectral`]: eigenpairs, resolvents, Jost solutions, distorted Fourier transform
//! - [`darboux`]: the ladder of factorizations and its inverse construction
//! - [`profile`]: multi-index combinatorics, refined profile, FGR data
//! - [`dynamics`]: split-step NLS, modulation decomposition, reduced ODEs
//! - [`virial`]: weight functions, transformed variables, virial monitors
//! - [`cli`]: configuration-driven commands tying everything together

pub mod cli;
pub mod darboux;
pub mod dynamics;
pub mod grid;
pub mod profile;
pub mod spectral;
pub mod virial;

pub(crate) mod solver;

pub use grid::scalar::Real;

/// Concrete scalar used by the pipeline stages.
pub type R = f64;
/// Complex scalar over [`R`].
pub type C64 = num_complex::Complex<f64>;
/// Grid at pipeline precision.
pub type Grid64 = grid::Grid<f64>;
/// Field at pipeline precision.
pub type Field64 = grid::Field<f64>;
/// Weight specification at pipeline precision.
pub type WeightSpec64 = grid::WeightSpec<f64>;
