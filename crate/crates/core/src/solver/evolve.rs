use serde::{Deserialize, Serialize};

use super::conserved::{conserved_parts, ConservedSet};
use super::config::SolverConfig;
use super::strang::Stepper;
use crate::error::{Error, Result};
use crate::spectral::{inverse_in_place, norm_lx2_hy1, strichartz_integrand, Field, Representation, TimeSlices};

/// Relative mass change that counts as divergence.
pub const MASS_JUMP_LIMIT: f64 = 1e-6;

/// One row of the diagnostics time series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    pub momentum: [f64; 2],
    pub lx2_hy1: f64,
    /// `‖u‖_{L⁴([0,t]; L⁴_x H^{1-ε₀}_y)}` by the trapezoid rule over the
    /// recorded times.
    pub running_strichartz: f64,
}

impl DiagnosticsRecord {
    pub fn conserved(&self) -> ConservedSet {
        ConservedSet { mass: self.mass, energy: self.energy, momentum: self.momentum }
    }
}

/// Output of [`evolve`].
#[derive(Clone, Debug)]
pub struct Evolution {
    /// Recorded states (empty when `keep_slices` is off).
    pub slices: TimeSlices,
    pub diagnostics: Vec<DiagnosticsRecord>,
}

impl Evolution {
    pub fn final_record(&self) -> &DiagnosticsRecord {
        self.diagnostics.last().expect("evolution records t = 0")
    }

    /// Largest conserved-quantity drift relative to the initial record.
    pub fn max_conservation_drift(&self) -> f64 {
        let reference = self.diagnostics[0].conserved();
        self.diagnostics
            .iter()
            .map(|r| r.conserved().max_relative_drift(&reference))
            .fold(0.0, f64::max)
    }

    /// Running Strichartz norm at the recorded time closest to `t`.
    pub fn strichartz_at(&self, t: f64) -> f64 {
        self.diagnostics
            .iter()
            .min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))
            .map(|r| r.running_strichartz)
            .unwrap_or(0.0)
    }
}

/// Evolves `u0` with Strang splitting, recording slices and diagnostics at
/// `t = 0` and every `slice_stride` steps, plus the final time.
pub fn evolve(u0: &Field, cfg: &SolverConfig) -> Result<Evolution> {
    cfg.validate()?;
    let grid = u0.grid().clone();
    let s = cfg.scattering_index();
    let n_steps = cfg.n_steps();
    let mut stepper = Stepper::new(&grid, cfg.dt, cfg.dealias_on);
    let mut state = u0.clone().into_spectral().into_values();
    if cfg.dealias_on {
        crate::spectral::dealias_in_place(&grid, &mut state);
    }
    let mut physical = state.clone();

    let mut slices = TimeSlices::new();
    let mut diagnostics: Vec<DiagnosticsRecord> = Vec::new();
    let mut integral = 0.0;
    let mut last: Option<(f64, f64)> = None;

    let mut record = |step: usize,
                      state: &[num_complex::Complex64],
                      physical: &mut Vec<num_complex::Complex64>,
                      slices: &mut TimeSlices,
                      diagnostics: &mut Vec<DiagnosticsRecord>|
     -> Result<()> {
        let t = step as f64 * cfg.dt;
        physical.copy_from_slice(state);
        inverse_in_place(&grid, physical);
        let field = Field::from_values(&grid, physical.clone(), Representation::Physical)?;
        let integrand = strichartz_integrand(&field, s);
        if let Some((t_prev, f_prev)) = last {
            integral += 0.5 * (t - t_prev) * (f_prev + integrand);
        }
        last = Some((t, integrand));
        let c = conserved_parts(&grid, state, physical);
        diagnostics.push(DiagnosticsRecord {
            t,
            mass: c.mass,
            energy: c.energy,
            momentum: c.momentum,
            lx2_hy1: norm_lx2_hy1(&field),
            running_strichartz: integral.powf(0.25),
        });
        if cfg.keep_slices {
            slices.push(t, field)?;
        }
        Ok(())
    };

    record(0, &state, &mut physical, &mut slices, &mut diagnostics)?;
    let m0: f64 = diagnostics[0].mass;
    for step in 1..=n_steps {
        stepper.step(&mut state);
        let m: f64 = state.iter().map(|v| v.norm_sqr()).sum();
        let reason = if !m.is_finite() {
            Some("non-finite state".to_string())
        } else if m0 > 0.0 && ((m - m0) / m0).abs() > MASS_JUMP_LIMIT {
            Some(format!("relative mass change {:e}", (m - m0) / m0))
        } else {
            None
        };
        if let Some(reason) = reason {
            return Err(Error::Divergence {
                step,
                time: step as f64 * cfg.dt,
                reason,
                partial: diagnostics,
            });
        }
        if step % cfg.slice_stride == 0 || step == n_steps {
            record(step, &state, &mut physical, &mut slices, &mut diagnostics)?;
        }
    }
    Ok(Evolution { slices, diagnostics })
}

/// Evolves backward in time to `-cfg.t_end` through `conj ∘ evolve ∘ conj`.
/// Recorded times are negated and listed in increasing order.
pub fn evolve_backward(u0: &Field, cfg: &SolverConfig) -> Result<Evolution> {
    let fwd = evolve(&u0.clone().conj(), cfg)?;
    let mut records: Vec<DiagnosticsRecord> = fwd
        .diagnostics
        .into_iter()
        .map(|mut r| {
            r.t = -r.t;
            r.momentum = [-r.momentum[0], -r.momentum[1]];
            r
        })
        .collect();
    records.reverse();
    let mut times: Vec<f64> = fwd.slices.times().iter().map(|t| -t).collect();
    let mut fields: Vec<Field> = fwd.slices.slices().iter().map(|f| f.clone().conj()).collect();
    times.reverse();
    fields.reverse();
    Ok(Evolution { slices: TimeSlices::from_parts(times, fields)?, diagnostics: records })
}

/// Evolution on `[-t_end, t_end]`, joined at `t = 0`. Running norms in the
/// diagnostics are accumulated outward from `t = 0` in each direction.
pub fn evolve_two_sided(u0: &Field, cfg: &SolverConfig) -> Result<Evolution> {
    let back = evolve_backward(u0, cfg)?;
    let fwd = evolve(u0, cfg)?;
    let mut times = back.slices.times().to_vec();
    let mut fields = back.slices.slices().to_vec();
    times.extend_from_slice(&fwd.slices.times()[1.min(fwd.slices.len())..]);
    fields.extend_from_slice(&fwd.slices.slices()[1.min(fwd.slices.len())..]);
    let mut diagnostics = back.diagnostics;
    diagnostics.extend(fwd.diagnostics.into_iter().skip(1));
    Ok(Evolution { slices: TimeSlices::from_parts(times, fields)?, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::gaussian_trig;
    use crate::spectral::{make_grid, strichartz_norm};

    #[test]
    fn records_stride_and_final_time() {
        let g = make_grid(32.0, 32, 8).unwrap();
        let u0 = gaussian_trig(&g, 0.5, 2.0, [0.0, 0.0], [0.0, 0.0], 0.3, 1);
        let cfg = SolverConfig::new(0.05, 1.0).with_stride(3);
        let ev = evolve(&u0, &cfg).unwrap();
        let ts: Vec<f64> = ev.diagnostics.iter().map(|r| r.t).collect();
        assert_eq!(ts.len(), 8);
        assert!((ts[1] - 0.15).abs() < 1e-12);
        assert!((ts.last().unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(ev.slices.len(), 8);
        let direct = strichartz_norm(&ev.slices, cfg.scattering_index()).unwrap();
        assert!((direct - ev.final_record().running_strichartz).abs() < 1e-12 * direct);
    }

    #[test]
    fn divergence_carries_partial_diagnostics() {
        let g = make_grid(16.0, 16, 4).unwrap();
        let mut u0 = gaussian_trig(&g, 0.5, 2.0, [0.0, 0.0], [0.0, 0.0], 0.0, 0);
        u0.values_mut()[10] = num_complex::Complex64::new(f64::INFINITY, 0.0);
        let cfg = SolverConfig::new(0.01, 0.1).with_stride(1);
        match evolve(&u0, &cfg) {
            Err(Error::Divergence { step, partial, .. }) => {
                assert_eq!(step, 1);
                assert_eq!(partial.len(), 1);
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn backward_then_forward_returns() {
        let g = make_grid(32.0, 32, 8).unwrap();
        let u0 = gaussian_trig(&g, 0.8, 2.0, [1.0, 0.0], [0.3, 0.0], 0.5, 1);
        let cfg = SolverConfig::new(0.02, 0.4).with_stride(20);
        let back = evolve_backward(&u0, &cfg).unwrap();
        let (t, first) = (back.slices.times()[0], &back.slices.slices()[0]);
        assert!((t + 0.4).abs() < 1e-12);
        let fwd = evolve(first, &cfg).unwrap();
        let end = &fwd.slices.slices()[fwd.slices.len() - 1];
        assert!(end.max_abs_diff(&u0).unwrap() < 1e-10);
    }
}
