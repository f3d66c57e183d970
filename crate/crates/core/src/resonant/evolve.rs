use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::modes::ModeVector;
use crate::error::{Error, Result};
use crate::solver::{SolverConfig, MASS_JUMP_LIMIT};
use crate::spectral::{is_aliased, PlaneGrid};

/// One row of the resonant-system diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonantRecord {
    pub t: f64,
    pub mass: f64,
    pub l2h1: f64,
    pub hamiltonian: f64,
    /// `‖v‖_{L⁴_{t,x} h¹}` over `[0, t]` by the trapezoid rule.
    pub running_scattering: f64,
    pub truncation_fraction: f64,
}

/// Recorded mode states.
#[derive(Clone, Debug, Default)]
pub struct ModeSlices {
    pub times: Vec<f64>,
    pub states: Vec<ModeVector>,
}

impl ModeSlices {
    /// State recorded at time `t` (within `1e-9` relative).
    pub fn at(&self, t: f64) -> Result<&ModeVector> {
        let tol = 1e-9 * (1.0 + t.abs());
        self.times
            .iter()
            .position(|s| (s - t).abs() <= tol)
            .map(|i| &self.states[i])
            .ok_or_else(|| {
                Error::usage(format!(
                    "no mode slice at t = {t} (stored range [{}, {}])",
                    self.times.first().copied().unwrap_or(f64::NAN),
                    self.times.last().copied().unwrap_or(f64::NAN)
                ))
            })
    }
}

#[derive(Clone, Debug)]
pub struct ResonantEvolution {
    pub slices: ModeSlices,
    pub diagnostics: Vec<ResonantRecord>,
}

/// Strang stepper for the resonant system: exact plane free flow per
/// component, and the exactly solvable phase rotation
/// `v_j ↦ e^{-i dt (2S - |v_j|²)} v_j` (`S = Σ|v_k|²` is invariant under it).
pub struct ResonantStepper {
    grid: PlaneGrid,
    half: Vec<Complex64>,
    keep: Option<Vec<bool>>,
    dt: f64,
}

impl ResonantStepper {
    pub fn new(grid: &PlaneGrid, dt: f64, dealias: bool) -> Self {
        let n = grid.n();
        let inv_n = 1.0 / grid.len() as f64;
        let mut half = Vec::with_capacity(grid.len());
        let mut keep = Vec::with_capacity(grid.len());
        for i1 in 0..n {
            for i2 in 0..n {
                let (k1, k2) = (grid.kx(i1), grid.kx(i2));
                half.push(Complex64::from_polar(inv_n, -0.5 * dt * (k1 * k1 + k2 * k2)));
                let (a, b) = (crate::spectral::freq_index(i1, n), crate::spectral::freq_index(i2, n));
                keep.push(!(is_aliased(a, n) || is_aliased(b, n)));
            }
        }
        Self { grid: grid.clone(), half, keep: dealias.then_some(keep), dt }
    }

    fn linear_half(&self, v: &mut ModeVector) {
        let t = &self.grid.transform;
        v.modes_mut().par_iter_mut().for_each(|m| {
            t.forward(m);
            for (x, h) in m.iter_mut().zip(&self.half) {
                *x *= h;
            }
            if let Some(keep) = &self.keep {
                for (x, k) in m.iter_mut().zip(keep) {
                    if !k {
                        *x = Complex64::default();
                    }
                }
            }
            t.inverse(m);
        });
    }

    pub fn step(&self, v: &mut ModeVector) {
        self.linear_half(v);
        let s = v.density();
        let dt = self.dt;
        v.modes_mut().par_iter_mut().for_each(|m| {
            for (x, s) in m.iter_mut().zip(&s) {
                *x *= Complex64::from_polar(1.0, -dt * (2.0 * s - x.norm_sqr()));
            }
        });
        self.linear_half(v);
    }
}

fn record(t: f64, v: &ModeVector, integral: f64) -> ResonantRecord {
    ResonantRecord {
        t,
        mass: v.mass(),
        l2h1: v.norm_l2h1(),
        hamiltonian: v.hamiltonian(),
        running_scattering: integral.powf(0.25),
        truncation_fraction: v.truncation_fraction(),
    }
}

/// Integrates `i∂ₜv_j + Δₓv_j = Σ_{ℛ(j)} v_{j1} v̄_{j2} v_{j3}`.
///
/// The scattering integrand is accumulated at every step; states and
/// diagnostics are recorded every `slice_stride` steps and at the end.
pub fn evolve_resonant(v0: &ModeVector, cfg: &SolverConfig) -> Result<ResonantEvolution> {
    cfg.validate()?;
    let stepper = ResonantStepper::new(v0.grid(), cfg.dt, cfg.dealias_on);
    let n_steps = cfg.n_steps();
    let mut v = v0.clone();
    let mut slices = ModeSlices::default();
    let mut diagnostics = Vec::new();
    let mut integral = 0.0;
    let mut prev = v.scattering_integrand();
    let m0 = v.mass();
    diagnostics.push(record(0.0, &v, 0.0));
    if cfg.keep_slices {
        slices.times.push(0.0);
        slices.states.push(v.clone());
    }
    for step in 1..=n_steps {
        stepper.step(&mut v);
        let t = step as f64 * cfg.dt;
        let cur = v.scattering_integrand();
        integral += 0.5 * cfg.dt * (prev + cur);
        prev = cur;
        let m = v.mass();
        if !m.is_finite() || (m0 > 0.0 && ((m - m0) / m0).abs() > MASS_JUMP_LIMIT) {
            return Err(Error::Divergence {
                step,
                time: t,
                reason: format!("resonant system mass {m} (initial {m0})"),
                partial: Vec::new(),
            });
        }
        if step % cfg.slice_stride == 0 || step == n_steps {
            diagnostics.push(record(t, &v, integral));
            if cfg.keep_slices {
                slices.times.push(t);
                slices.states.push(v.clone());
            }
        }
    }
    Ok(ResonantEvolution { slices, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::gaussian_trig;
    use crate::solver::evolve;
    use crate::spectral::make_grid;

    fn smooth_modes(grid: &PlaneGrid, jmax: usize) -> ModeVector {
        ModeVector::from_fn(grid, jmax, |j, x1, x2| {
            let a = 0.6 / (1.0 + (j * j) as f64);
            let r2 = (x1 - 0.5 * j as f64).powi(2) + x2 * x2;
            Complex64::from_polar(a * (-r2 / 4.0).exp(), 0.3 * j as f64 * x1)
        })
        .unwrap()
    }

    #[test]
    fn single_mode_matches_waveguide_solver() {
        let g = make_grid(24.0, 32, 8).unwrap();
        let u0 = gaussian_trig(&g, 0.9, 2.0, [0.0, 0.0], [0.1, 0.0], 0.0, 0);
        let cfg = SolverConfig::new(0.01, 1.0).with_stride(100);
        let ev = evolve(&u0, &cfg).unwrap();
        let v0 = ModeVector::from_field(&u0, 2).unwrap();
        let rv = evolve_resonant(&v0, &cfg).unwrap();
        let u_end = &ev.slices.slices()[ev.slices.len() - 1];
        let v_end = rv.slices.states.last().unwrap().to_field(&g).unwrap();
        assert!(u_end.max_abs_diff(&v_end).unwrap() < 1e-8);
    }

    #[test]
    fn zero_stays_zero() {
        let g = PlaneGrid::new(16.0, 16).unwrap();
        let v0 = ModeVector::zeros(&g, 2).unwrap();
        let ev = evolve_resonant(&v0, &SolverConfig::new(0.05, 0.5)).unwrap();
        assert!(ev.slices.states.last().unwrap().modes().iter().flatten().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn mass_and_l2h1_conserved() {
        let g = PlaneGrid::new(20.0, 32).unwrap();
        let v0 = smooth_modes(&g, 4);
        let ev = evolve_resonant(&v0, &SolverConfig::new(0.02, 2.0).with_stride(10)).unwrap();
        let d0 = &ev.diagnostics[0];
        for r in &ev.diagnostics {
            assert!(((r.mass - d0.mass) / d0.mass).abs() < 1e-12);
            assert!(((r.l2h1 - d0.l2h1) / d0.l2h1).abs() < 1e-12);
        }
    }

    #[test]
    fn gauge_covariance_is_exact() {
        let g = PlaneGrid::new(20.0, 32).unwrap();
        let v0 = smooth_modes(&g, 3);
        let phase = Complex64::from_polar(1.0, 0.7);
        let cfg = SolverConfig::new(0.02, 0.5).with_stride(25);
        let a = evolve_resonant(&v0.clone().scaled(phase), &cfg).unwrap();
        let b = evolve_resonant(&v0, &cfg).unwrap();
        let lhs = a.slices.states.last().unwrap();
        let rhs = b.slices.states.last().unwrap().clone().scaled(phase);
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-13);
    }

    #[test]
    fn slice_lookup() {
        let g = PlaneGrid::new(16.0, 16).unwrap();
        let v0 = smooth_modes(&g, 1);
        let ev = evolve_resonant(&v0, &SolverConfig::new(0.1, 0.5).with_stride(1)).unwrap();
        assert!(ev.slices.at(0.3).is_ok());
        assert!(matches!(ev.slices.at(0.9), Err(Error::Usage(_))));
    }
}
