//! Norm evaluators. Spectral evaluation uses the unitary normalization of
//! [`Field`]; physical evaluation uses the `dx² dy` quadrature.

use num_complex::Complex64;

use super::field::{trapezoid_weights, Field, Representation, TimeSlices};
use super::grid::Grid;
use super::ops::bracket;
use crate::error::{Error, Result};

fn spectral_weighted_sq(f: &Field, weight: impl Fn(f64, f64, i64) -> f64) -> f64 {
    let s = f.clone().into_spectral();
    let g = s.grid();
    let kx: Vec<f64> = (0..g.nx()).map(|i| g.kx(i)).collect();
    let jy: Vec<i64> = (0..g.ny()).map(|i| g.jy(i)).collect();
    let v = s.values();
    let mut acc = 0.0;
    for (i1, &k1) in kx.iter().enumerate() {
        for (i2, &k2) in kx.iter().enumerate() {
            let base = g.index(i1, i2, 0);
            for (iy, &j) in jy.iter().enumerate() {
                acc += weight(k1, k2, j) * v[base + iy].norm_sqr();
            }
        }
    }
    acc
}

/// `‖u‖_{L²}`, evaluated in the field's own representation.
pub fn norm_l2(f: &Field) -> f64 {
    let sq: f64 = f.values().iter().map(|v| v.norm_sqr()).sum();
    match f.repr() {
        Representation::Spectral => sq.sqrt(),
        Representation::Physical => (sq * f.grid().cell_volume()).sqrt(),
    }
}

/// `‖⟨∇_x⟩u‖_{L²} + ‖⟨∇_y⟩u‖_{L²}`.
pub fn norm_h1(f: &Field) -> f64 {
    let x = spectral_weighted_sq(f, |k1, k2, _| 1.0 + k1 * k1 + k2 * k2);
    let y = spectral_weighted_sq(f, |_, _, j| 1.0 + (j * j) as f64);
    x.sqrt() + y.sqrt()
}

/// `‖u‖_{L²_x H¹_y}`.
pub fn norm_lx2_hy1(f: &Field) -> f64 {
    norm_lx2_hys(f, 1.0)
}

/// `‖u‖_{L²_x H^s_y}`.
pub fn norm_lx2_hys(f: &Field, s: f64) -> f64 {
    spectral_weighted_sq(f, |_, _, j| bracket(j as f64).powf(2.0 * s)).sqrt()
}

/// `‖∇_x u‖_{L²}`.
pub fn norm_grad_x(f: &Field) -> f64 {
    spectral_weighted_sq(f, |k1, k2, _| k1 * k1 + k2 * k2).sqrt()
}

/// Unitary torus coefficients `û_j(x) = (2π)^{-1/2} ∫ u(x,y) e^{-ijy} dy`,
/// stored in the grid layout (x physical, y spectral).
pub fn y_coefficients(f: &Field) -> Vec<Complex64> {
    let p = f.clone().into_physical();
    let grid = p.grid().clone();
    let mut v = p.into_values();
    grid.transform.forward_last(&mut v);
    let scale = grid.dy() / (2.0 * std::f64::consts::PI).sqrt();
    v.iter_mut().for_each(|c| *c *= scale);
    v
}

/// `‖u(x, ·)‖²_{H^s_y}` for every plane grid point, row-major `[x1][x2]`.
pub fn y_sobolev_density(f: &Field, s: f64) -> Vec<f64> {
    let grid = f.grid().clone();
    let coeffs = y_coefficients(f);
    let weights: Vec<f64> =
        (0..grid.ny()).map(|i| bracket(grid.jy(i) as f64).powf(2.0 * s)).collect();
    coeffs
        .chunks(grid.ny())
        .map(|line| line.iter().zip(&weights).map(|(c, w)| w * c.norm_sqr()).sum())
        .collect()
}

/// `‖u‖_{L²_x H^s_y}` through the partial y-transform only; an independent
/// route to [`norm_lx2_hys`].
pub fn norm_lx2_hys_partial(f: &Field, s: f64) -> f64 {
    let area = f.grid().dx().powi(2);
    (area * y_sobolev_density(f, s).iter().sum::<f64>()).sqrt()
}

/// `∫ ‖u(x,·)‖⁴_{H^s_y} dx` at one time.
pub fn strichartz_integrand(f: &Field, s: f64) -> f64 {
    let area = f.grid().dx().powi(2);
    area * y_sobolev_density(f, s).iter().map(|d| d * d).sum::<f64>()
}

/// Space-time norm `‖u‖_{L⁴_t L⁴_x H^s_y}` by the trapezoid rule in time.
pub fn strichartz_norm(ts: &TimeSlices, s_y: f64) -> Result<f64> {
    if ts.len() < 2 {
        return Err(Error::usage("strichartz_norm needs at least two slices"));
    }
    let w = trapezoid_weights(ts.times());
    let total: f64 = ts
        .slices()
        .iter()
        .zip(&w)
        .map(|(f, w)| w * strichartz_integrand(f, s_y))
        .sum();
    Ok(total.powf(0.25))
}

/// Fraction of `∫|u|²` lying outside the central half `[-L/4, L/4)²` of the box.
pub fn edge_mass_fraction(f: &Field) -> f64 {
    let p = f.clone().into_physical();
    let grid: &Grid = p.grid();
    let quarter = 0.25 * grid.box_length_x();
    let ny = grid.ny();
    let mut total = 0.0;
    let mut edge = 0.0;
    for i1 in 0..grid.nx() {
        let x1 = grid.x_coord(i1);
        for i2 in 0..grid.nx() {
            let x2 = grid.x_coord(i2);
            let base = grid.index(i1, i2, 0);
            let m: f64 = p.values()[base..base + ny].iter().map(|v| v.norm_sqr()).sum();
            total += m;
            if x1.abs() >= quarter || x2.abs() >= quarter {
                edge += m;
            }
        }
    }
    if total == 0.0 {
        0.0
    } else {
        edge / total
    }
}
