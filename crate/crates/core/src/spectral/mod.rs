//! Grids, transforms, multipliers, and norm evaluators.

mod field;
mod grid;
mod norms;
mod ops;
pub(crate) mod transform;

pub use field::{trapezoid_weights, Field, Representation, TimeSlices};
pub(crate) use field::{forward_in_place, inverse_in_place};
pub use grid::{make_grid, Grid, PlaneGrid, TORUS_LENGTH};
pub use norms::{
    edge_mass_fraction, norm_grad_x, norm_h1, norm_l2, norm_lx2_hy1, norm_lx2_hys,
    norm_lx2_hys_partial, strichartz_integrand, strichartz_norm, y_coefficients,
    y_sobolev_density,
};
pub use ops::{
    bracket, dealias, free_propagate, free_propagate_x, modulate_x, sobolev_y_multiplier,
    translate_x, translate_y,
};
pub(crate) use ops::{apply_symbol, dealias_in_place, is_aliased};
pub use transform::{bin_of, freq_index};
