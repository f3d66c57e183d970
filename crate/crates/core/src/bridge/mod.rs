//! Large-scale profiles: the waveguide solution from `(1/λ)φ(x/λ, y)`
//! compared against the rescaled resonant-mode approximation
//! `V_λ = Σ_j e^{-itj²} e^{ijy} (1/λ) v_j(t/λ², x/λ)`.

mod residual;
mod scaling;
mod scan;

pub use residual::{bump, residual_e_lambda, ModeField, Residual, RESIDUAL_SPLIT};
pub use scaling::{assemble_v, dilate_modes, rescale_initial};
pub use scan::{run_scale_scan, ScaleExperiment, ScaleReport, ScaleRow, MIN_CAPTURED_FRACTION};
