//! Split-step time integration of the cubic waveguide equation.

mod config;
mod conserved;
mod evolve;
mod galilean;
mod perturbation;
mod strang;

pub use config::SolverConfig;
pub use conserved::{conserved, ConservedSet};
pub use evolve::{evolve, evolve_backward, evolve_two_sided, DiagnosticsRecord, Evolution, MASS_JUMP_LIMIT};
pub use galilean::{galilean_boost, Boosted};
pub use perturbation::{perturbation_experiment, PerturbationReport};
pub use strang::{run_steps, run_steps_backward, step_strang, step_strang_with, Stepper};
