use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::weight::MorawetzWeight;
use crate::error::{Error, Result};
use crate::spectral::{
    apply_symbol, edge_mass_fraction, freq_index, inverse_in_place, norm_grad_x,
    norm_l2, trapezoid_weights, Field, Grid, PlaneGrid, TimeSlices,
};

/// Largest admissible mass fraction outside the central half box.
pub const EDGE_MASS_LIMIT: f64 = 1e-6;

/// Plane densities `ρ(x) = ∫|u|² dy` and `p(x) = ∫ Im(ū ∇ₓu) dy`.
pub(crate) fn densities(u: &Field) -> (Vec<f64>, [Vec<f64>; 2]) {
    let grid = u.grid().clone();
    let phys = u.clone().into_physical();
    let spec = u.clone().into_spectral();
    let dy = grid.dy();
    let ny = grid.ny();
    let np = grid.nx() * grid.nx();
    let rho: Vec<f64> = phys
        .values()
        .chunks(ny)
        .map(|line| dy * line.iter().map(|v| v.norm_sqr()).sum::<f64>())
        .collect();
    let mut p = [vec![0.0; np], vec![0.0; np]];
    for (axis, p_axis) in p.iter_mut().enumerate() {
        let mut d = spec.values().to_vec();
        apply_symbol(&grid, &mut d, |k1, k2, _| Complex64::new(0.0, if axis == 0 { k1 } else { k2 }));
        inverse_in_place(&grid, &mut d);
        for (q, (line, dline)) in phys.values().chunks(ny).zip(d.chunks(ny)).enumerate() {
            p_axis[q] = dy * line.iter().zip(dline).map(|(a, b)| (a.conj() * b).im).sum::<f64>();
        }
    }
    (rho, p)
}

/// Precomputed transform of the sampled kernel `∇a` on one grid.
pub struct MorawetzKernel {
    plane: PlaneGrid,
    khat: [Vec<Complex64>; 2],
    weight: MorawetzWeight,
}

impl MorawetzKernel {
    /// Samples `∇a` at the periodic displacements `m·dx`, `|m| < n/2`,
    /// and zero on the Nyquist rows so the sampled kernel stays odd.
    pub fn new(grid: &Grid, weight: MorawetzWeight) -> Self {
        let plane = grid.plane();
        let n = plane.n();
        let dx = plane.dx();
        let half = (n / 2) as i64;
        let mut khat = [vec![Complex64::default(); n * n], vec![Complex64::default(); n * n]];
        for i1 in 0..n {
            let m1 = freq_index(i1, n);
            for i2 in 0..n {
                let m2 = freq_index(i2, n);
                if m1.abs() == half || m2.abs() == half {
                    continue;
                }
                let g = weight.gradient([m1 as f64 * dx, m2 as f64 * dx]);
                khat[0][i1 * n + i2] = Complex64::new(g[0], 0.0);
                khat[1][i1 * n + i2] = Complex64::new(g[1], 0.0);
            }
        }
        for k in khat.iter_mut() {
            plane.transform.forward(k);
        }
        Self { plane, khat, weight }
    }

    pub fn weight(&self) -> MorawetzWeight {
        self.weight
    }

    /// `M = ∫ p(x) · (∇a ⋆ ρ)(x) dx`.
    pub fn action(&self, u: &Field) -> Result<f64> {
        if u.grid().nx() != self.plane.n() || u.grid().box_length_x() != self.plane.box_length() {
            return Err(Error::usage("field grid does not match the kernel grid"));
        }
        let fraction = edge_mass_fraction(u);
        if fraction > EDGE_MASS_LIMIT {
            return Err(Error::Contamination { fraction, limit: EDGE_MASS_LIMIT });
        }
        let (rho, p) = densities(u);
        let area = self.plane.cell_area();
        let len = self.plane.len() as f64;
        let mut rho_hat: Vec<Complex64> = rho.iter().map(|r| Complex64::new(*r, 0.0)).collect();
        self.plane.transform.forward(&mut rho_hat);
        let mut total = 0.0;
        for (axis, kh) in self.khat.iter().enumerate() {
            let mut conv: Vec<Complex64> = rho_hat.iter().zip(kh).map(|(a, b)| a * b).collect();
            self.plane.transform.inverse(&mut conv);
            let scale = area / len;
            total += p[axis].iter().zip(&conv).map(|(pa, c)| pa * c.re * scale).sum::<f64>();
        }
        Ok(area * total)
    }
}

/// Interaction Morawetz action of `u` with weight `w`.
pub fn interaction_action(u: &Field, w: &MorawetzWeight) -> Result<f64> {
    MorawetzKernel::new(u.grid(), *w).action(u)
}

/// `∫∫ ||∇ₓ|^{1/2} (|u|²)|² dx dy` at one time.
pub fn rigidity_integrand(u: &Field) -> f64 {
    let grid = u.grid().clone();
    let phys = u.clone().into_physical();
    let mut d: Vec<Complex64> = phys.values().iter().map(|v| Complex64::new(v.norm_sqr(), 0.0)).collect();
    grid.transform.forward_plane(&mut d);
    let n = grid.nx();
    let ny = grid.ny();
    let scale = grid.dy() * grid.dx().powi(2) / (n * n) as f64;
    let mut acc = 0.0;
    for i1 in 0..n {
        let k1 = grid.kx(i1);
        for i2 in 0..n {
            let k = k1.hypot(grid.kx(i2));
            let base = grid.index(i1, i2, 0);
            acc += k * d[base..base + ny].iter().map(|c| c.norm_sqr()).sum::<f64>();
        }
    }
    scale * acc
}

/// Time integral of [`rigidity_integrand`] by the trapezoid rule.
pub fn rigidity_functional(ts: &TimeSlices) -> Result<f64> {
    if ts.len() < 2 {
        return Err(Error::usage("rigidity_functional needs at least two slices"));
    }
    let w = trapezoid_weights(ts.times());
    Ok(ts.slices().iter().zip(&w).map(|(f, w)| w * rigidity_integrand(f)).sum())
}

/// One row of a Morawetz time series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorawetzRecord {
    pub t: f64,
    pub m: f64,
    pub rigidity_integrand: f64,
    /// `‖u‖³_{L²} ‖∇ₓu‖_{L²}`, which dominates `|M|` since `|∇a| ≤ 1`.
    pub bound: f64,
}

pub fn morawetz_series(ts: &TimeSlices, w: &MorawetzWeight) -> Result<Vec<MorawetzRecord>> {
    let Some(first) = ts.slices().first() else {
        return Ok(Vec::new());
    };
    let kernel = MorawetzKernel::new(first.grid(), *w);
    ts.iter()
        .map(|(t, u)| {
            Ok(MorawetzRecord {
                t,
                m: kernel.action(u)?,
                rigidity_integrand: rigidity_integrand(u),
                bound: norm_l2(u).powi(3) * norm_grad_x(u),
            })
        })
        .collect()
}

/// Summary of a Morawetz trajectory on `[-T, T]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigiditySummary {
    pub horizon: f64,
    pub rigidity: f64,
    pub sup_abs_m: f64,
    /// `rigidity / sup|M|`.
    pub ratio: f64,
    /// `M(T) - M(-T)`.
    pub m_increment: f64,
    /// `max |M| / bound` over the records.
    pub max_bound_ratio: f64,
}

/// Summarizes the records with `|t| ≤ horizon`.
pub fn summarize(records: &[MorawetzRecord], horizon: f64) -> Result<RigiditySummary> {
    let tol = 1e-9 * (1.0 + horizon);
    let window: Vec<&MorawetzRecord> = records.iter().filter(|r| r.t.abs() <= horizon + tol).collect();
    if window.len() < 2 {
        return Err(Error::usage("fewer than two records inside the horizon"));
    }
    let times: Vec<f64> = window.iter().map(|r| r.t).collect();
    let w = trapezoid_weights(&times);
    let rigidity: f64 = window.iter().zip(&w).map(|(r, w)| w * r.rigidity_integrand).sum();
    let sup_abs_m = window.iter().map(|r| r.m.abs()).fold(0.0, f64::max);
    let max_bound_ratio = window
        .iter()
        .filter(|r| r.bound > 0.0)
        .map(|r| r.m.abs() / r.bound)
        .fold(0.0, f64::max);
    Ok(RigiditySummary {
        horizon,
        rigidity,
        sup_abs_m,
        ratio: if sup_abs_m > 0.0 { rigidity / sup_abs_m } else { 0.0 },
        m_increment: window[window.len() - 1].m - window[0].m,
        max_bound_ratio,
    })
}
