use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::resonant::{ModeSlices, ModeVector};
use crate::spectral::{Field, Grid, Representation};

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda.is_finite() && lambda >= 1.0) {
        return Err(Error::usage(format!("lambda = {lambda} must be at least 1")));
    }
    Ok(())
}

/// `(1/λ) φ(x/λ, y)` on the λ-dilated grid; the samples are `φ`'s samples
/// scaled by `1/λ`, so no interpolation is involved.
pub fn rescale_initial(phi: &Field, lambda: f64) -> Result<Field> {
    check_lambda(lambda)?;
    if lambda == 1.0 {
        return Ok(phi.clone());
    }
    let grid = phi.grid().dilated(lambda)?;
    let p = phi.clone().into_physical();
    let values = p.values().iter().map(|v| v / lambda).collect();
    Field::from_values(&grid, values, Representation::Physical)
}

/// Modes `v_{j,λ}(x) = (1/λ) v_j(x/λ)` on the dilated plane grid.
pub fn dilate_modes(v: &ModeVector, lambda: f64) -> Result<ModeVector> {
    check_lambda(lambda)?;
    let grid = v.grid().dilated(lambda)?;
    let modes = v.modes().iter().map(|m| m.iter().map(|x| x / lambda).collect()).collect();
    ModeVector::from_modes(&grid, modes)
}

/// `V_λ(t) = Σ_j e^{-itj²} e^{ijy} v_{j,λ}(t)` from an undilated mode state
/// `v(t/λ²)`.
pub(crate) fn assemble_from(v: &ModeVector, lambda: f64, t: f64, grid: &Grid) -> Result<Field> {
    dilate_modes(v, lambda)?
        .to_field_with_phases(grid, |j| Complex64::from_polar(1.0, -t * (j * j) as f64))
}

/// Large-scale approximate solution `V_λ(t)` on the λ-dilated waveguide
/// grid `grid`, reading the mode state recorded at `t/λ²`.
pub fn assemble_v(slices: &ModeSlices, lambda: f64, t: f64, grid: &Grid) -> Result<Field> {
    check_lambda(lambda)?;
    let v = slices.at(t / (lambda * lambda))?;
    assemble_from(v, lambda, t, grid)
}
