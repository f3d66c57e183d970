//! Refined-Strichartz cube scores and a bubble extraction loop over
//! dyadic x-frequency cubes. Grids must have `box_length_x = 2π·2^p` so
//! that the frequency lattice is dyadic.

mod cube;
mod extract;
mod score;

pub use cube::{cube_restrict, DyadicCube, DyadicLattice};
pub use extract::{extract_bubbles, extract_bubbles_with, Bubble, Extraction, Frame, IterationReport, KAPPA, MAX_BUBBLES};
pub use score::{
    best_cube, best_cube_with, linear_l4_norm, refined_score, refined_score_with, TimeWindow,
    CUBE_WEIGHT, DEFAULT_TIME_SAMPLES, DEFAULT_WINDOW, SCORE_EXPONENT,
};
