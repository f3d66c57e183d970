//! Pseudospectral simulation and diagnostics for the cubic defocusing
//! nonlinear Schrödinger equation `i∂ₜu + Δu = |u|²u` on the waveguide
//! `R² × T`.
//!
//! The plane is truncated to a periodic box; the torus is `[0, 2π)`.
//! Modules:
//!
//! - [`spectral`]: grids, transforms, multipliers and mixed norms.
//! - [`solver`]: Strang split-step integrator, conservation laws, Galilean
//!   boosts and the forced-perturbation experiment.
//! - [`resonant`]: the cubic resonant system over torus modes.
//! - [`bridge`]: large-scale profiles approximated by rescaled resonant modes.
//! - [`morawetz`]: interaction Morawetz action and rigidity functional.
//! - [`profile`]: dyadic-cube scores and bubble extraction.
//! - [`experiment`]: config-driven runs with CSV/JSON artifacts.

pub mod bridge;
pub mod data;
pub mod error;
pub mod experiment;
pub mod morawetz;
pub mod profile;
pub mod resonant;
pub mod solver;
pub mod spectral;

#[cfg(test)]
pub(crate) mod testing;

pub use error::{Error, Result};

/// Default Sobolev loss `ε₀` in the `H_y^{1-ε₀}` norms.
pub const DEFAULT_EPS0: f64 = 0.25;
