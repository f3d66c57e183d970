//! Config-driven experiment runs with CSV/JSON artifacts and a manifest.
//!
//! A run reads a TOML [`ExperimentConfig`], builds the grid and the initial
//! data, runs the named experiment and writes its tables plus
//! `manifest.json` into the output directory. Every CSV row starts with the
//! config hash; reals are written with 17 significant digits.

mod config;
mod output;
mod run;

pub use config::{
    ApproxScanParams, ExperimentConfig, ExperimentKind, GridParams, MorawetzParams, PerturbationParams,
    ProfilesParams, ResonantParams,
};
pub use output::{fmt_real, OutputEntry, Table};
pub use run::{columns_of, run, Manifest, RunOutcome, RunStatus, MANIFEST_FILE};
