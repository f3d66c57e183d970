use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cube::{copy_cube, DyadicCube, DyadicLattice};
use crate::error::{Error, Result};
use crate::spectral::{bin_of, inverse_in_place, trapezoid_weights, Field, Grid};

/// Space-time exponent of the refined score.
pub const SCORE_EXPONENT: f64 = 11.0 / 2.0;
/// Power of `|Q|` in the refined score.
pub const CUBE_WEIGHT: f64 = -3.0 / 22.0;
/// Default half-width of the time window.
pub const DEFAULT_WINDOW: f64 = 8.0;
/// Default number of time samples on `[-window, window]`.
pub const DEFAULT_TIME_SAMPLES: usize = 33;

/// Uniform time samples on `[-half_width, half_width]` with trapezoid weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub half_width: f64,
    pub samples: usize,
}

impl TimeWindow {
    pub fn new(half_width: f64, samples: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::config(format!("window = {half_width} must be positive")));
        }
        if samples < 2 {
            return Err(Error::config("the time window needs at least two samples"));
        }
        Ok(Self { half_width, samples })
    }

    pub fn default_with(half_width: f64) -> Result<Self> {
        Self::new(half_width, DEFAULT_TIME_SAMPLES)
    }

    pub fn times(&self) -> Vec<f64> {
        let h = 2.0 * self.half_width / (self.samples - 1) as f64;
        (0..self.samples).map(|k| -self.half_width + k as f64 * h).collect()
    }
}

/// Free plane flow of a cube restriction at every window sample.
/// `visit(k, t, values)` receives physical values.
pub(crate) fn cube_evolution(
    grid: &Grid,
    spectral: &[Complex64],
    range: [(i64, i64); 2],
    window: &TimeWindow,
    mut visit: impl FnMut(usize, f64, &[Complex64]),
) {
    let dk = grid.dk();
    let mut restricted = vec![Complex64::default(); grid.len()];
    copy_cube(grid, spectral, &mut restricted, range, |v| v);
    let mut buf = vec![Complex64::default(); grid.len()];
    for (k, t) in window.times().into_iter().enumerate() {
        buf.iter_mut().for_each(|v| *v = Complex64::default());
        let (n, ny) = (grid.nx(), grid.ny());
        for m1 in range[0].0..range[0].1 {
            let i1 = bin_of(m1, n);
            let k1 = m1 as f64 * dk;
            for m2 in range[1].0..range[1].1 {
                let k2 = m2 as f64 * dk;
                let phase = Complex64::from_polar(1.0, -t * (k1 * k1 + k2 * k2));
                let base = grid.index(i1, bin_of(m2, n), 0);
                for iy in 0..ny {
                    buf[base + iy] = restricted[base + iy] * phase;
                }
            }
        }
        inverse_in_place(grid, &mut buf);
        visit(k, t, &buf);
    }
}

/// `a^{11/4}`, i.e. `|v|^{11/2}` from `a = |v|²`.
#[inline]
fn pow_score(a: f64) -> f64 {
    let r = a.sqrt();
    a * a * r * r.sqrt()
}

fn score_from_integral(q: &DyadicCube, integral: f64) -> f64 {
    q.area().powf(CUBE_WEIGHT) * integral.powf(1.0 / SCORE_EXPONENT)
}

fn exact_score(grid: &Grid, spectral: &[Complex64], q: &DyadicCube, range: [(i64, i64); 2], window: &TimeWindow) -> f64 {
    let w = trapezoid_weights(&window.times());
    let dv = grid.cell_volume();
    let mut integral = 0.0;
    cube_evolution(grid, spectral, range, window, |k, _, values| {
        integral += w[k] * dv * values.iter().map(|v| pow_score(v.norm_sqr())).sum::<f64>();
    });
    score_from_integral(q, integral)
}

/// `|Q|^{-3/22} ‖e^{itΔₓ} f_Q‖_{L^{11/2}_{t,x,y}}` over `[-window, window]`
/// with [`DEFAULT_TIME_SAMPLES`] samples.
pub fn refined_score(f: &Field, q: &DyadicCube, window: f64) -> Result<f64> {
    refined_score_with(f, q, &TimeWindow::default_with(window)?)
}

pub fn refined_score_with(f: &Field, q: &DyadicCube, window: &TimeWindow) -> Result<f64> {
    let grid = f.grid();
    let lattice = DyadicLattice::of(grid)?;
    let range = lattice
        .index_range(q)
        .ok_or_else(|| Error::usage(format!("cube {q:?} lies outside the frequency lattice")))?;
    let s = f.clone().into_spectral();
    Ok(exact_score(grid, s.values(), q, range, window))
}

/// `‖e^{itΔₓ} f‖_{L⁴_{t,x,y}}` over the window.
pub fn linear_l4_norm(f: &Field, window: &TimeWindow) -> Result<f64> {
    let grid = f.grid();
    let lattice = DyadicLattice::of(grid)?;
    let half = (lattice.n / 2) as i64;
    let s = f.clone().into_spectral();
    let w = trapezoid_weights(&window.times());
    let dv = grid.cell_volume();
    let mut integral = 0.0;
    cube_evolution(grid, s.values(), [(-half, half), (-half, half)], window, |k, _, values| {
        integral += w[k] * dv * values.iter().map(|v| v.norm_sqr().powi(2)).sum::<f64>();
    });
    Ok(integral.powf(0.25))
}

/// Two-dimensional prefix sums over the signed lattice.
struct Prefix {
    n: usize,
    sums: Vec<f64>,
}

impl Prefix {
    fn new(n: usize, value: impl Fn(i64, i64) -> f64) -> Self {
        let half = (n / 2) as i64;
        let w = n + 1;
        let mut sums = vec![0.0; w * w];
        for a in 0..n {
            for b in 0..n {
                let v = value(a as i64 - half, b as i64 - half);
                sums[(a + 1) * w + b + 1] = v + sums[a * w + b + 1] + sums[(a + 1) * w + b] - sums[a * w + b];
            }
        }
        Self { n, sums }
    }

    fn rect(&self, range: [(i64, i64); 2]) -> f64 {
        let half = (self.n / 2) as i64;
        let w = self.n + 1;
        let (a0, a1) = ((range[0].0 + half) as usize, (range[0].1 + half) as usize);
        let (b0, b1) = ((range[1].0 + half) as usize, (range[1].1 + half) as usize);
        (self.sums[a1 * w + b1] - self.sums[a0 * w + b1] - self.sums[a1 * w + b0] + self.sums[a0 * w + b0]).max(0.0)
    }
}

/// Score ordering: larger score first; ties within `1e-12` relative go to
/// the smaller level, then the lexicographically smaller corner.
fn better(a: (f64, DyadicCube), b: (f64, DyadicCube)) -> bool {
    let tol = 1e-12 * a.0.abs().max(b.0.abs());
    if (a.0 - b.0).abs() > tol {
        return a.0 > b.0;
    }
    (a.1.level, a.1.index) < (b.1.level, b.1.index)
}

type Candidate = (f64, DyadicCube, [(i64, i64); 2]);

/// Exact maximizer of [`refined_score`] over every lattice dyadic cube.
///
/// Candidates are ranked by the upper bound
/// `|Q|^{-3/22} (2W ‖f_Q‖^{7/2}_{∞} ‖f_Q‖²_{L²})^{2/11}`, with the sup norm
/// bounded by `V^{-1/2} Σ|c|`; cubes whose bound cannot beat the current
/// best are skipped. Returns `None` for zero data.
pub fn best_cube_with(f: &Field, window: &TimeWindow) -> Result<Option<(DyadicCube, f64)>> {
    let grid = f.grid();
    let lattice = DyadicLattice::of(grid)?;
    let s = f.clone().into_spectral();
    let values = s.values();
    let (n, ny) = (grid.nx(), grid.ny());
    let line = |m1: i64, m2: i64| {
        let base = grid.index(bin_of(m1, n), bin_of(m2, n), 0);
        &values[base..base + ny]
    };
    let l1 = Prefix::new(n, |a, b| line(a, b).iter().map(|c| c.norm()).sum());
    let l2 = Prefix::new(n, |a, b| line(a, b).iter().map(|c| c.norm_sqr()).sum());
    if l2.rect([(-(n as i64) / 2, n as i64 / 2); 2]) == 0.0 {
        return Ok(None);
    }
    let inv_sqrt_vol = grid.volume().powf(-0.5);
    let span = 2.0 * window.half_width;
    let mut candidates: Vec<Candidate> = lattice
        .all_cubes()
        .into_iter()
        .filter_map(|q| {
            let range = lattice.index_range(&q)?;
            let mass = l2.rect(range);
            if mass == 0.0 {
                return None;
            }
            let sup = inv_sqrt_vol * l1.rect(range);
            let bound = span * sup.powf(SCORE_EXPONENT - 2.0) * mass;
            Some((score_from_integral(&q, bound) * (1.0 + 1e-9), q, range))
        })
        .collect();
    candidates.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal).then(a.1.cmp(&b.1)));

    let mut best: Option<(f64, DyadicCube)> = None;
    for (bound, q, range) in candidates {
        if let Some((b, _)) = best {
            if bound < b * (1.0 - 1e-12) {
                break;
            }
        }
        let score = exact_score(grid, values, &q, range, window);
        if best.is_none_or(|b| better((score, q), b)) {
            best = Some((score, q));
        }
    }
    Ok(best.map(|(s, q)| (q, s)))
}

/// [`best_cube_with`] using [`DEFAULT_TIME_SAMPLES`] samples.
pub fn best_cube(f: &Field, window: f64) -> Result<Option<(DyadicCube, f64)>> {
    best_cube_with(f, &TimeWindow::default_with(window)?)
}
