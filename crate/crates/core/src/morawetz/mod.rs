//! Interaction Morawetz action and the rigidity functional
//! `∫∫∫ ||∇ₓ|^{1/2}(|u|²)|² dx dy dt`.

mod action;
mod weight;

pub use action::{
    interaction_action, morawetz_series, rigidity_functional, rigidity_integrand, summarize,
    MorawetzKernel, MorawetzRecord, RigiditySummary, EDGE_MASS_LIMIT,
};
pub use weight::{weight_eval, MorawetzWeight, WeightValues};
