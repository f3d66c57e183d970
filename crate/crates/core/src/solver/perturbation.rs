use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::SolverConfig;
use super::strang::Stepper;
use crate::error::{Error, Result};
use crate::spectral::{bracket, Field, Grid};

/// Summary of a forced-versus-unforced comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationReport {
    pub forcing_amplitude: f64,
    /// `‖e‖_{L^{4/3}_t L^{4/3}_x H^{1-ε₀}_y}` evaluated on the step grid.
    pub forcing_norm: f64,
    /// `sup_t ‖u - ũ‖_{L²_x H^{1-ε₀}_y}` over all steps.
    pub sup_difference: f64,
    pub final_difference: f64,
    /// `sup_difference / forcing_amplitude` (zero when the amplitude is zero).
    pub ratio: f64,
}

/// Spatial forcing shape `e^{-|x|²/8} (1 + ½ cos y)` and its
/// `L^{4/3}_x H^s_y` norm.
fn forcing_profile(grid: &Grid, s: f64) -> (Vec<Complex64>, f64) {
    let f = Field::from_fn(grid, |x1, x2, y| {
        Complex64::new((-(x1 * x1 + x2 * x2) / 8.0).exp() * (1.0 + 0.5 * y.cos()), 0.0)
    });
    let density = crate::spectral::y_sobolev_density(&f, s);
    let area = grid.dx().powi(2);
    let norm = (area * density.iter().map(|d| d.powf(2.0 / 3.0)).sum::<f64>()).powf(0.75);
    (f.into_values(), norm)
}

/// Temporal envelope `sin²(πt/T)` on `[0, T]`.
fn envelope(t: f64, t_end: f64) -> f64 {
    (std::f64::consts::PI * t / t_end).sin().powi(2)
}

fn lx2_hys_sq(grid: &Grid, a: &[Complex64], b: &[Complex64], weights: &[f64]) -> f64 {
    let ny = grid.ny();
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(i, (x, y))| weights[i % ny] * (x - y).norm_sqr())
        .sum()
}

/// Integrates `u` (unforced) and `ũ` solving `i∂ₜũ + Δũ = |ũ|²ũ + e` from
/// the same data, where `e` is a smooth space-time bump scaled so that its
/// `L^{4/3}_t L^{4/3}_x H^{1-ε₀}_y` size equals `forcing_amplitude`.
pub fn perturbation_experiment(
    u0: &Field,
    forcing_amplitude: f64,
    cfg: &SolverConfig,
) -> Result<PerturbationReport> {
    cfg.validate()?;
    if !(forcing_amplitude.is_finite() && forcing_amplitude >= 0.0) {
        return Err(Error::config("forcing amplitude must be finite and non-negative"));
    }
    let grid = u0.grid().clone();
    let s = cfg.scattering_index();
    let n_steps = cfg.n_steps();
    let t_end = n_steps as f64 * cfg.dt;
    let (profile, profile_norm) = forcing_profile(&grid, s);

    // Time factor: (Σ_n w_n h(t_n)^{4/3})^{3/4} with midpoint samples.
    let time_norm = (0..n_steps)
        .map(|n| cfg.dt * envelope((n as f64 + 0.5) * cfg.dt, t_end).powf(4.0 / 3.0))
        .sum::<f64>()
        .powf(0.75);
    let scale = if forcing_amplitude == 0.0 { 0.0 } else { forcing_amplitude / (profile_norm * time_norm) };

    let weights: Vec<f64> = (0..grid.ny()).map(|i| bracket(grid.jy(i) as f64).powf(2.0 * s)).collect();
    let mut plain = Stepper::new(&grid, cfg.dt, cfg.dealias_on);
    let mut forced = Stepper::new(&grid, cfg.dt, cfg.dealias_on);
    let mut u = u0.clone().into_spectral().into_values();
    let mut v = u.clone();
    let mut sup: f64 = 0.0;
    let mut last = 0.0;
    for n in 0..n_steps {
        plain.step_forced(&mut u, |_| {});
        let amp = scale * envelope((n as f64 + 0.5) * cfg.dt, t_end) * cfg.dt;
        forced.step_forced(&mut v, |w| {
            for (x, p) in w.iter_mut().zip(&profile) {
                *x -= Complex64::new(0.0, amp) * p;
            }
        });
        last = lx2_hys_sq(&grid, &u, &v, &weights).sqrt();
        if !last.is_finite() {
            return Err(Error::Divergence {
                step: n + 1,
                time: (n + 1) as f64 * cfg.dt,
                reason: "non-finite difference".into(),
                partial: Vec::new(),
            });
        }
        sup = sup.max(last);
    }
    Ok(PerturbationReport {
        forcing_amplitude,
        forcing_norm: scale * profile_norm * time_norm,
        sup_difference: sup,
        final_difference: last,
        ratio: if forcing_amplitude == 0.0 { 0.0 } else { sup / forcing_amplitude },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::gaussian_trig;
    use crate::spectral::make_grid;

    #[test]
    fn zero_forcing_gives_zero_difference() {
        let g = make_grid(24.0, 32, 8).unwrap();
        let u0 = gaussian_trig(&g, 0.5, 2.0, [0.0, 0.0], [0.0, 0.0], 0.3, 1);
        let r = perturbation_experiment(&u0, 0.0, &SolverConfig::new(0.05, 1.0)).unwrap();
        assert_eq!(r.sup_difference, 0.0);
    }

    #[test]
    fn forcing_norm_matches_amplitude() {
        let g = make_grid(24.0, 32, 8).unwrap();
        let u0 = gaussian_trig(&g, 0.5, 2.0, [0.0, 0.0], [0.0, 0.0], 0.3, 1);
        let r = perturbation_experiment(&u0, 1e-3, &SolverConfig::new(0.05, 1.0)).unwrap();
        assert!((r.forcing_norm - 1e-3).abs() < 1e-15);
        assert!(r.sup_difference > 0.0 && r.ratio < 10.0);
    }

    #[test]
    fn difference_is_linear_for_small_forcing() {
        let g = make_grid(24.0, 32, 8).unwrap();
        let u0 = gaussian_trig(&g, 0.5, 2.0, [0.0, 0.0], [0.0, 0.0], 0.3, 1);
        let cfg = SolverConfig::new(0.05, 2.0);
        let a = perturbation_experiment(&u0, 1e-6, &cfg).unwrap();
        let b = perturbation_experiment(&u0, 2e-6, &cfg).unwrap();
        assert!((b.sup_difference / a.sup_difference - 2.0).abs() < 1e-3);
    }
}
