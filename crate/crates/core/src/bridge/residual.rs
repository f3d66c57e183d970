use num_complex::Complex64;
use rayon::prelude::*;

use super::scaling::dilate_modes;
use crate::error::{Error, Result};
use crate::resonant::{nonresonant_by_output, ModeSlices, ModeVector};
use crate::spectral::{bin_of, bracket, Field, Grid, PlaneGrid, Representation, TORUS_LENGTH};

/// Frequency split of the high-frequency residual projection.
pub const RESIDUAL_SPLIT: f64 = 1.0 / 1024.0;

/// Torus-mode coefficients `c_j(x)` of a waveguide field
/// `Σ_j c_j(x) e^{ijy}`, for a contiguous range of `j`.
#[derive(Clone, Debug)]
pub struct ModeField {
    grid: PlaneGrid,
    jmin: i64,
    coeffs: Vec<Vec<Complex64>>,
}

impl ModeField {
    pub fn grid(&self) -> &PlaneGrid {
        &self.grid
    }

    pub fn indices(&self) -> std::ops::Range<i64> {
        self.jmin..self.jmin + self.coeffs.len() as i64
    }

    pub fn coeff(&self, j: i64) -> Option<&[Complex64]> {
        let k = j - self.jmin;
        (k >= 0 && (k as usize) < self.coeffs.len()).then(|| self.coeffs[k as usize].as_slice())
    }

    /// `‖e(x, ·)‖²_{H^s_y} = 2π Σ_j ⟨j⟩^{2s} |c_j(x)|²` at every plane point.
    pub fn hs_density(&self, s: f64) -> Vec<f64> {
        let mut d = vec![0.0; self.grid.len()];
        for (j, c) in self.indices().zip(&self.coeffs) {
            let w = TORUS_LENGTH * bracket(j as f64).powf(2.0 * s);
            for (a, v) in d.iter_mut().zip(c) {
                *a += w * v.norm_sqr();
            }
        }
        d
    }

    /// `∫ ‖e(x, ·)‖^{4/3}_{H¹_y} dx`.
    pub fn l43_h1_integrand(&self) -> f64 {
        self.grid.cell_area() * self.hs_density(1.0).iter().map(|d| d.powf(2.0 / 3.0)).sum::<f64>()
    }

    /// `‖e‖_{L²_x H¹_y}`.
    pub fn l2_h1(&self) -> f64 {
        (self.grid.cell_area() * self.hs_density(1.0).iter().sum::<f64>()).sqrt()
    }

    /// `P^x_{≥N}` with the smooth symbol `1 - φ(|ξ|/N)`, where `φ = 1` on
    /// `[0, 1]`, `φ = 0` on `[2, ∞)`.
    pub fn high_pass(&self, split: f64) -> ModeField {
        let n = self.grid.n();
        let symbol: Vec<f64> = (0..n * n)
            .map(|p| {
                let (k1, k2) = (self.grid.kx(p / n), self.grid.kx(p % n));
                (1.0 - bump((k1 * k1 + k2 * k2).sqrt() / split)) / (n * n) as f64
            })
            .collect();
        let t = &self.grid.transform;
        let coeffs = self
            .coeffs
            .par_iter()
            .map(|c| {
                let mut c = c.clone();
                t.forward(&mut c);
                c.iter_mut().zip(&symbol).for_each(|(x, s)| *x *= s);
                t.inverse(&mut c);
                c
            })
            .collect();
        ModeField { grid: self.grid.clone(), jmin: self.jmin, coeffs }
    }

    /// Synthesizes the waveguide field; `grid.ny()` must exceed twice the
    /// largest `|j|`.
    pub fn to_field(&self, grid: &Grid) -> Result<Field> {
        let jabs = self.indices().map(|j| j.unsigned_abs() as usize).max().unwrap_or(0);
        if grid.nx() != self.grid.n() || 2 * jabs + 1 > grid.ny() {
            return Err(Error::usage("waveguide grid cannot hold the mode field"));
        }
        let ny = grid.ny();
        let mut v = vec![Complex64::default(); grid.len()];
        for (j, c) in self.indices().zip(&self.coeffs) {
            let bin = bin_of(j, ny);
            for (p, x) in c.iter().enumerate() {
                v[p * ny + bin] = *x;
            }
        }
        grid.transform.inverse_last(&mut v);
        Field::from_values(grid, v, Representation::Physical)
    }
}

/// Smooth cutoff: 1 on `[0, 1]`, 0 on `[2, ∞)`, `C^∞` in between.
pub fn bump(s: f64) -> f64 {
    let f = |z: f64| if z > 0.0 { (-1.0 / z).exp() } else { 0.0 };
    if s <= 1.0 {
        1.0
    } else if s >= 2.0 {
        0.0
    } else {
        let a = f(2.0 - s);
        a / (a + f(s - 1.0))
    }
}

/// Residual `e_λ` and its high-frequency part at one time.
#[derive(Clone, Debug)]
pub struct Residual {
    pub t: f64,
    pub full: ModeField,
    pub high: ModeField,
}

/// Coefficients of `-Σ_{𝒩ℛ} e^{-it(j1² - j2² + j3²)} w_{j1} w̄_{j2} w_{j3}`
/// for a mode state `w` (already dilated).
pub(crate) fn nonresonant_sum(w: &ModeVector, t: f64) -> ModeField {
    let groups = nonresonant_by_output(w.jmax());
    let len = w.grid().len();
    let jmin = groups.first().map(|g| g.0).unwrap_or(0);
    let coeffs: Vec<Vec<Complex64>> = groups
        .par_iter()
        .map(|(_, triples)| {
            let mut c = vec![Complex64::default(); len];
            for tr in triples {
                let om = (tr.j1 * tr.j1 - tr.j2 * tr.j2 + tr.j3 * tr.j3) as f64;
                let ph = -Complex64::from_polar(1.0, -t * om);
                let (a, b, d) = (w.mode(tr.j1), w.mode(tr.j2), w.mode(tr.j3));
                for p in 0..len {
                    c[p] += ph * a[p] * b[p].conj() * d[p];
                }
            }
            c
        })
        .collect();
    ModeField { grid: w.grid().clone(), jmin, coeffs }
}

pub(crate) fn residual_from(v: &ModeVector, lambda: f64, t: f64) -> Result<Residual> {
    let w = dilate_modes(v, lambda)?;
    let full = nonresonant_sum(&w, t);
    let high = full.high_pass(RESIDUAL_SPLIT);
    Ok(Residual { t, full, high })
}

/// `e_λ = (i∂ₜ + Δ)V_λ - |V_λ|²V_λ` at time `t`, evaluated from the
/// non-resonant triple sum of the dilated modes stored at `t/λ²`.
pub fn residual_e_lambda(slices: &ModeSlices, lambda: f64, t: f64) -> Result<Residual> {
    if !(lambda.is_finite() && lambda >= 1.0) {
        return Err(Error::usage(format!("lambda = {lambda} must be at least 1")));
    }
    let v = slices.at(t / (lambda * lambda))?;
    residual_from(v, lambda, t)
}
