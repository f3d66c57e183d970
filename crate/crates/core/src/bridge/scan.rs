use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::residual::residual_from;
use super::scaling::{assemble_from, rescale_initial};
use crate::error::{Error, Result};
use crate::resonant::{ModeVector, ResonantStepper};
use crate::solver::Stepper;
use crate::spectral::{
    inverse_in_place, norm_lx2_hy1, trapezoid_weights, Field, Representation,
};

/// Minimum share of `‖φ‖²_{L²H¹}` that the retained modes must carry.
pub const MIN_CAPTURED_FRACTION: f64 = 0.99;

/// Large-scale profile scan: for each λ compare the waveguide solution from
/// `(1/λ)φ(x/λ, y)` with the assembled resonant approximation `V_λ`.
#[derive(Clone, Debug)]
pub struct ScaleExperiment {
    pub phi: Field,
    pub lambdas: Vec<f64>,
    /// Horizon `T` in waveguide time.
    pub horizon: f64,
    pub jmax: usize,
    /// Waveguide time step; the mode system uses `dt/λ²`.
    pub dt: f64,
    /// Comparisons and residuals are evaluated every `stride` steps.
    pub stride: usize,
    /// Mode data; defaults to the exact torus decomposition of `φ`.
    pub modes: Option<ModeVector>,
}

impl ScaleExperiment {
    pub fn new(phi: Field, lambdas: Vec<f64>, horizon: f64, jmax: usize) -> Self {
        Self { phi, lambdas, horizon, jmax, dt: 0.01, stride: 1, modes: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambdas.is_empty() {
            return Err(Error::config("lambdas must not be empty"));
        }
        if self.lambdas.iter().any(|l| !(l.is_finite() && *l >= 1.0)) {
            return Err(Error::config("every lambda must be at least 1"));
        }
        if self.lambdas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("lambdas must be strictly increasing"));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::config("horizon must be positive"));
        }
        if !(self.dt > 0.0 && self.dt <= 0.1) {
            return Err(Error::config("dt must lie in (0, 0.1]"));
        }
        if self.stride == 0 {
            return Err(Error::config("stride must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleRow {
    pub lambda: f64,
    /// `sup_{t ≤ T} ‖U_λ(t) - V_λ(t)‖_{L²_x H¹_y}`.
    pub sup_error: f64,
    /// `‖P^x_{≥2^{-10}} e_λ‖_{L^{4/3}_{t,x} H¹_y([0,T])}`.
    pub resid_hi_l43: f64,
    pub resid_full_l43: f64,
    /// `‖U_λ(0) - V_λ(0)‖_{L²_x H¹_y}`.
    pub initial_error: f64,
    pub runtime_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleReport {
    pub rows: Vec<ScaleRow>,
    /// Share of `‖φ‖²_{L²H¹}` carried by the modes.
    pub captured_fraction: f64,
}

impl ScaleReport {
    /// `true` when each error is at most 1.1 times its predecessor.
    pub fn errors_nonincreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].sup_error <= 1.1 * w[0].sup_error)
    }

    /// `resid_hi_l43(λ_k) / resid_hi_l43(λ_{k+1})` for consecutive scales.
    pub fn residual_ratios(&self) -> Vec<f64> {
        self.rows.windows(2).map(|w| w[0].resid_hi_l43 / w[1].resid_hi_l43).collect()
    }
}

fn run_one(exp: &ScaleExperiment, v0: &ModeVector, lambda: f64) -> Result<ScaleRow> {
    let clock = Instant::now();
    let u0 = rescale_initial(&exp.phi, lambda)?;
    let grid = u0.grid().clone();
    let n_steps = (exp.horizon / exp.dt).round() as usize;
    let mut stepper = Stepper::new(&grid, exp.dt, false);
    let modes = ResonantStepper::new(v0.grid(), exp.dt / (lambda * lambda), false);

    let mut u = u0.into_spectral().into_values();
    let mut v = v0.clone();
    let mut buf = u.clone();
    let mut times = Vec::new();
    let mut hi = Vec::new();
    let mut full = Vec::new();
    let mut sup: f64 = 0.0;
    let mut initial = 0.0;
    for step in 0..=n_steps {
        if step > 0 {
            stepper.step(&mut u);
            modes.step(&mut v);
        }
        if step % exp.stride != 0 && step != n_steps {
            continue;
        }
        let t = step as f64 * exp.dt;
        buf.copy_from_slice(&u);
        inverse_in_place(&grid, &mut buf);
        let uf = Field::from_values(&grid, buf.clone(), Representation::Physical)?;
        if !uf.is_finite() || !v.is_finite() {
            return Err(Error::Divergence {
                step,
                time: t,
                reason: format!("non-finite state in the λ = {lambda} scan"),
                partial: Vec::new(),
            });
        }
        let vf = assemble_from(&v, lambda, t, &grid)?;
        let err = norm_lx2_hy1(&uf.sub(&vf)?);
        if step == 0 {
            initial = err;
        }
        sup = sup.max(err);
        let r = residual_from(&v, lambda, t)?;
        times.push(t);
        hi.push(r.high.l43_h1_integrand());
        full.push(r.full.l43_h1_integrand());
    }
    let w = trapezoid_weights(&times);
    let integrate = |f: &[f64]| f.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>().powf(0.75);
    Ok(ScaleRow {
        lambda,
        sup_error: sup,
        resid_hi_l43: integrate(&hi),
        resid_full_l43: integrate(&full),
        initial_error: initial,
        runtime_s: clock.elapsed().as_secs_f64(),
    })
}

/// Runs every scale of the experiment (in parallel) and reports errors and
/// residual norms.
pub fn run_scale_scan(exp: &ScaleExperiment) -> Result<ScaleReport> {
    exp.validate()?;
    let v0 = match &exp.modes {
        Some(v) => v.clone(),
        None => ModeVector::from_field(&exp.phi, exp.jmax)?,
    };
    let total = norm_lx2_hy1(&exp.phi).powi(2);
    let captured = if total == 0.0 {
        1.0
    } else {
        let exact = ModeVector::from_field(&exp.phi, exp.jmax)?;
        exact.norm_l2h1().powi(2) / total
    };
    if captured < MIN_CAPTURED_FRACTION {
        return Err(Error::config(format!(
            "modes |j| ≤ {} capture only {:.4} of the profile's L²H¹ mass (need {MIN_CAPTURED_FRACTION})",
            exp.jmax, captured
        )));
    }
    let rows = exp
        .lambdas
        .par_iter()
        .map(|&l| run_one(exp, &v0, l))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScaleReport { rows, captured_fraction: captured })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::gaussian_trig;
    use crate::spectral::make_grid;

    #[test]
    fn small_single_mode_profile_matches() {
        let g = make_grid(20.0, 32, 8).unwrap();
        let phi = gaussian_trig(&g, 1e-3, 2.0, [0.0, 0.0], [0.0, 0.0], 0.0, 0);
        let mut exp = ScaleExperiment::new(phi, vec![2.0, 4.0], 1.0, 2);
        exp.dt = 0.02;
        exp.stride = 5;
        let r = run_scale_scan(&exp).unwrap();
        for row in &r.rows {
            assert!(row.sup_error < 1e-4);
            assert!(row.initial_error < 1e-12);
            assert_eq!(row.resid_full_l43, 0.0);
        }
    }

    #[test]
    fn rejects_poorly_captured_profile() {
        let g = make_grid(20.0, 16, 16).unwrap();
        let phi = gaussian_trig(&g, 1.0, 2.0, [0.0, 0.0], [0.0, 0.0], 1.0, 5);
        let exp = ScaleExperiment::new(phi, vec![2.0], 1.0, 1);
        assert!(matches!(run_scale_scan(&exp), Err(Error::Config(_))));
    }

    #[test]
    fn rejects_unsorted_lambdas() {
        let g = make_grid(20.0, 16, 8).unwrap();
        let phi = gaussian_trig(&g, 1.0, 2.0, [0.0, 0.0], [0.0, 0.0], 0.0, 0);
        let exp = ScaleExperiment::new(phi, vec![4.0, 2.0], 1.0, 1);
        assert!(matches!(run_scale_scan(&exp), Err(Error::Config(_))));
    }
}
