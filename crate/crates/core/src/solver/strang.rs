use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{
    apply_symbol, dealias_in_place, forward_in_place, inverse_in_place, Field, Grid,
    Representation,
};

/// Strang splitting for `i∂ₜu + Δu = |u|²u`: half linear flow, exact
/// pointwise phase rotation `u ↦ e^{-i|u|²dt} u`, half linear flow.
///
/// The state is held in spectral representation between steps.
pub struct Stepper {
    grid: Grid,
    dt: f64,
    half: Vec<Complex64>,
    dealias: bool,
    work: Vec<Complex64>,
}

impl Stepper {
    pub fn new(grid: &Grid, dt: f64, dealias: bool) -> Self {
        let mut half = vec![Complex64::new(1.0, 0.0); grid.len()];
        apply_symbol(grid, &mut half, |k1, k2, j| {
            Complex64::from_polar(1.0, -0.5 * dt * (k1 * k1 + k2 * k2 + (j * j) as f64))
        });
        Self {
            grid: grid.clone(),
            dt,
            half,
            dealias,
            work: vec![Complex64::default(); grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advances spectral values by one step.
    pub fn step(&mut self, spectral: &mut [Complex64]) {
        self.step_forced(spectral, |_| {});
    }

    /// One step with a mid-step forcing hook acting on physical values,
    /// symmetrically placed between two nonlinear half-rotations.
    pub fn step_forced(&mut self, spectral: &mut [Complex64], mut forcing: impl FnMut(&mut [Complex64])) {
        for (c, h) in spectral.iter_mut().zip(&self.half) {
            *c *= h;
        }
        self.work.copy_from_slice(spectral);
        inverse_in_place(&self.grid, &mut self.work);
        let hdt = 0.5 * self.dt;
        rotate(&mut self.work, hdt);
        forcing(&mut self.work);
        rotate(&mut self.work, hdt);
        forward_in_place(&self.grid, &mut self.work);
        if self.dealias {
            dealias_in_place(&self.grid, &mut self.work);
        }
        for ((c, w), h) in spectral.iter_mut().zip(&self.work).zip(&self.half) {
            *c = w * h;
        }
    }
}

#[inline]
fn rotate(values: &mut [Complex64], dt: f64) {
    for v in values.iter_mut() {
        *v *= Complex64::from_polar(1.0, -dt * v.norm_sqr());
    }
}

/// Single Strang step. Returns the new state in the input's representation.
pub fn step_strang(u: &Field, dt: f64) -> Result<Field> {
    step_strang_with(u, dt, false)
}

pub fn step_strang_with(u: &Field, dt: f64, dealias: bool) -> Result<Field> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::usage(format!("dt = {dt} must be positive")));
    }
    let repr = u.repr();
    let grid = u.grid().clone();
    let mut stepper = Stepper::new(&grid, dt, dealias);
    let mut values = u.clone().into_spectral().into_values();
    stepper.step(&mut values);
    let out = Field::from_values(&grid, values, Representation::Spectral)?;
    if !out.is_finite() {
        return Err(Error::Divergence {
            step: 1,
            time: dt,
            reason: "non-finite state".into(),
            partial: Vec::new(),
        });
    }
    Ok(out.into_repr(repr))
}

/// Runs `n` steps from `u`, returning the final state in physical form.
pub fn run_steps(u: &Field, dt: f64, n: usize, dealias: bool) -> Field {
    let grid = u.grid().clone();
    let mut stepper = Stepper::new(&grid, dt, dealias);
    let mut values = u.clone().into_spectral().into_values();
    for _ in 0..n {
        stepper.step(&mut values);
    }
    Field::from_values(&grid, values, Representation::Spectral)
        .expect("stepper preserves length")
        .into_physical()
}

/// Runs `n` steps backward in time via `conj ∘ forward ∘ conj`.
pub fn run_steps_backward(u: &Field, dt: f64, n: usize, dealias: bool) -> Field {
    run_steps(&u.clone().conj(), dt, n, dealias).conj()
}
