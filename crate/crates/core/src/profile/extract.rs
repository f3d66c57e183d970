use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cube::{copy_cube, DyadicCube, DyadicLattice};
use super::score::{best_cube_with, cube_evolution, TimeWindow};
use crate::bridge::bump;
use crate::error::{Error, Result};
use crate::spectral::{
    bin_of, forward_in_place, inverse_in_place, norm_l2, norm_lx2_hy1, Field, Grid, Representation,
};

/// Width of the spatial window in units of the bubble scale.
pub const KAPPA: f64 = 8.0;
pub const MAX_BUBBLES: usize = 8;

/// Symmetry parameters attached to an extracted bubble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    /// Inverse side length of the selected cube.
    pub lambda: f64,
    pub t0: f64,
    pub x0: [f64; 2],
    /// Center of the selected cube.
    pub xi: [f64; 2],
    pub y0: f64,
}

#[derive(Clone, Debug)]
pub struct Bubble {
    pub frame: Frame,
    pub cube: DyadicCube,
    pub score: f64,
    pub profile: Field,
    /// `‖profile‖²_{L²} / ‖f‖²_{L²}`.
    pub captured_l2: f64,
    /// `‖profile‖²_{L²H¹} / ‖f‖²_{L²H¹}`.
    pub captured_l2h1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationReport {
    pub iteration: usize,
    pub cube: DyadicCube,
    pub frame: Frame,
    /// Best cube score of the remainder before this extraction.
    pub score: f64,
    pub captured_l2: f64,
    pub captured_l2h1: f64,
    pub remainder_l2: f64,
    pub remainder_l2h1: f64,
    /// `(‖r_before‖² - ‖profile‖² - ‖r_after‖²) / ‖f‖²` in `L²H¹`.
    pub decoupling_defect: f64,
}

#[derive(Clone, Debug)]
pub struct Extraction {
    pub bubbles: Vec<Bubble>,
    pub remainder: Field,
    pub iterations: Vec<IterationReport>,
    /// `true` if the loop ended because the score stopped improving.
    pub stopped_early: bool,
}

/// Location `(t*, x*, y*)` of the largest `|e^{itΔₓ} f_Q|` over the window.
fn locate(grid: &Grid, spectral: &[Complex64], range: [(i64, i64); 2], window: &TimeWindow) -> (f64, usize) {
    let mut best = (-1.0, 0.0, 0);
    cube_evolution(grid, spectral, range, window, |_, t, values| {
        for (i, v) in values.iter().enumerate() {
            let a = v.norm_sqr();
            if a > best.0 {
                best = (a, t, i);
            }
        }
    });
    (best.1, best.2)
}

fn propagate_cube(grid: &Grid, values: &mut [Complex64], range: [(i64, i64); 2], t: f64) {
    let (n, ny, dk) = (grid.nx(), grid.ny(), grid.dk());
    for m1 in range[0].0..range[0].1 {
        let k1 = m1 as f64 * dk;
        for m2 in range[1].0..range[1].1 {
            let k2 = m2 as f64 * dk;
            let phase = Complex64::from_polar(1.0, -t * (k1 * k1 + k2 * k2));
            let base = grid.index(bin_of(m1, n), bin_of(m2, n), 0);
            values[base..base + ny].iter_mut().for_each(|v| *v *= phase);
        }
    }
}

/// `Π_Q e^{-it*Δ} [χ(|x - x*| / κλ) e^{it*Δ} f_Q]` with the smooth cutoff
/// [`bump`], which is 1 up to `κλ` and vanishes beyond `2κλ`.
fn windowed_profile(
    grid: &Grid,
    spectral: &[Complex64],
    range: [(i64, i64); 2],
    t0: f64,
    x0: [f64; 2],
    width: f64,
) -> Vec<Complex64> {
    let mut h = vec![Complex64::default(); grid.len()];
    copy_cube(grid, spectral, &mut h, range, |v| v);
    propagate_cube(grid, &mut h, range, t0);
    inverse_in_place(grid, &mut h);
    let l = grid.box_length_x();
    let wrap = |d: f64| d - l * (d / l + 0.5).floor();
    let ny = grid.ny();
    for i1 in 0..grid.nx() {
        let d1 = wrap(grid.x_coord(i1) - x0[0]);
        for i2 in 0..grid.nx() {
            let d2 = wrap(grid.x_coord(i2) - x0[1]);
            let g = bump((d1 * d1 + d2 * d2).sqrt() / width);
            let base = grid.index(i1, i2, 0);
            h[base..base + ny].iter_mut().for_each(|v| *v *= g);
        }
    }
    forward_in_place(grid, &mut h);
    let mut out = vec![Complex64::default(); grid.len()];
    copy_cube(grid, &h, &mut out, range, |v| v);
    propagate_cube(grid, &mut out, range, -t0);
    out
}

/// Bubble extraction with window width [`KAPPA`] and
/// [`super::DEFAULT_TIME_SAMPLES`] samples.
pub fn extract_bubbles(f: &Field, max_bubbles: usize, window: f64) -> Result<Extraction> {
    extract_bubbles_with(f, max_bubbles, &TimeWindow::default_with(window)?, KAPPA)
}

/// Repeatedly selects the best cube, windows the cube restriction around
/// the point where its free evolution peaks, and subtracts the result.
/// Stops after `max_bubbles` extractions, on zero remainder, or after two
/// consecutive iterations whose best score fails to decrease.
pub fn extract_bubbles_with(
    f: &Field,
    max_bubbles: usize,
    window: &TimeWindow,
    kappa: f64,
) -> Result<Extraction> {
    if max_bubbles > MAX_BUBBLES {
        return Err(Error::config(format!("max_bubbles = {max_bubbles} exceeds {MAX_BUBBLES}")));
    }
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::config("kappa must be positive"));
    }
    let grid = f.grid().clone();
    let lattice = DyadicLattice::of(&grid)?;
    let repr = f.repr();
    let total_l2 = norm_l2(f).powi(2);
    let total_h1 = norm_lx2_hy1(f).powi(2);
    let mut remainder = f.clone().into_spectral();
    let mut bubbles = Vec::new();
    let mut iterations = Vec::new();
    let mut prev_score: Option<f64> = None;
    let mut stalled = 0;
    let mut stopped_early = false;

    for iteration in 0..max_bubbles {
        let Some((cube, score)) = best_cube_with(&remainder, window)? else {
            break;
        };
        if let Some(p) = prev_score {
            if score >= p * (1.0 - 1e-9) {
                stalled += 1;
            } else {
                stalled = 0;
            }
        }
        prev_score = Some(score);
        let range = lattice.index_range(&cube).expect("best cube lies in the lattice");
        let (t0, flat) = locate(&grid, remainder.values(), range, window);
        let ny = grid.ny();
        let (p, iy) = (flat / ny, flat % ny);
        let x0 = [grid.x_coord(p / grid.nx()), grid.x_coord(p % grid.nx())];
        let lambda = 1.0 / cube.side();
        let values = windowed_profile(&grid, remainder.values(), range, t0, x0, kappa * lambda);
        let profile = Field::from_values(&grid, values, Representation::Spectral)?;

        let before = norm_lx2_hy1(&remainder).powi(2);
        remainder = remainder.sub(&profile)?;
        let after = norm_lx2_hy1(&remainder).powi(2);
        let p_h1 = norm_lx2_hy1(&profile).powi(2);
        let p_l2 = norm_l2(&profile).powi(2);
        let frame = Frame { lambda, t0, x0, xi: cube.center(), y0: grid.y_coord(iy) };
        let captured_l2 = if total_l2 > 0.0 { p_l2 / total_l2 } else { 0.0 };
        let captured_l2h1 = if total_h1 > 0.0 { p_h1 / total_h1 } else { 0.0 };
        iterations.push(IterationReport {
            iteration,
            cube,
            frame: frame.clone(),
            score,
            captured_l2,
            captured_l2h1,
            remainder_l2: norm_l2(&remainder),
            remainder_l2h1: after.sqrt(),
            decoupling_defect: (before - p_h1 - after) / total_h1,
        });
        bubbles.push(Bubble {
            frame,
            cube,
            score,
            profile: profile.into_repr(repr),
            captured_l2,
            captured_l2h1,
        });
        if stalled >= 2 {
            stopped_early = true;
            break;
        }
    }
    Ok(Extraction { bubbles, remainder: remainder.into_repr(repr), iterations, stopped_early })
}
