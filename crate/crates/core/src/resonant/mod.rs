//! The cubic resonant system over torus modes
//! `i∂ₜv_j + Δₓv_j = Σ_{ℛ(j)} v_{j1} v̄_{j2} v_{j3}`, where `ℛ(j)` collects
//! the triples with `j1 - j2 + j3 = j` and `j1² - j2² + j3² = j²`.

mod evolve;
mod modes;
mod rhs;
mod sets;

pub use evolve::{evolve_resonant, ModeSlices, ResonantEvolution, ResonantRecord, ResonantStepper};
pub use modes::ModeVector;
pub use rhs::{resonant_rhs, resonant_rhs_bruteforce};
pub use sets::{nonresonant_set, resonant_set, ResonantTriple};
pub(crate) use sets::nonresonant_by_output;
