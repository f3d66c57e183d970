use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{bracket, Field, Grid, PlaneGrid, Representation, TORUS_LENGTH};

/// Truncated sequence of plane fields `{v_j}_{|j| ≤ jmax}` on a shared grid,
/// representing `Σ_j v_j(x) e^{ijy}` on the waveguide.
///
/// Components hold physical values. Norms include the torus length, so
/// they agree with the waveguide norms of the synthesized field.
#[derive(Clone, Debug)]
pub struct ModeVector {
    grid: PlaneGrid,
    jmax: usize,
    modes: Vec<Vec<Complex64>>,
}

impl ModeVector {
    pub fn zeros(grid: &PlaneGrid, jmax: usize) -> Result<Self> {
        if jmax == 0 {
            return Err(Error::config("jmax must be at least 1"));
        }
        Ok(Self {
            grid: grid.clone(),
            jmax,
            modes: vec![vec![Complex64::default(); grid.len()]; 2 * jmax + 1],
        })
    }

    /// Wraps `2 jmax + 1` component arrays ordered from `j = -jmax`.
    pub fn from_modes(grid: &PlaneGrid, modes: Vec<Vec<Complex64>>) -> Result<Self> {
        if modes.len() < 3 || modes.len().is_multiple_of(2) {
            return Err(Error::usage("expected an odd number (≥ 3) of mode components"));
        }
        if modes.iter().any(|m| m.len() != grid.len()) {
            return Err(Error::usage("mode component length does not match the grid"));
        }
        Ok(Self { grid: grid.clone(), jmax: modes.len() / 2, modes })
    }

    /// Builds components from `f(j, x1, x2)`.
    pub fn from_fn(grid: &PlaneGrid, jmax: usize, f: impl Fn(i64, f64, f64) -> Complex64) -> Result<Self> {
        let mut out = Self::zeros(grid, jmax)?;
        let n = grid.n();
        for j in out.indices() {
            let mode = out.mode_mut(j);
            for i1 in 0..n {
                for i2 in 0..n {
                    mode[i1 * n + i2] = f(j, grid.x_coord(i1), grid.x_coord(i2));
                }
            }
        }
        Ok(out)
    }

    /// Fourier coefficients in `y`: `v_j(x) = (2π)^{-1} ∫ u(x, y) e^{-ijy} dy`.
    pub fn from_field(u: &Field, jmax: usize) -> Result<Self> {
        let grid = u.grid();
        if 2 * jmax + 1 > grid.ny() {
            return Err(Error::usage(format!(
                "jmax = {jmax} needs ny ≥ {}, grid has {}",
                2 * jmax + 1,
                grid.ny()
            )));
        }
        let mut out = Self::zeros(&grid.plane(), jmax)?;
        let mut v = u.clone().into_physical().into_values();
        grid.transform.forward_last(&mut v);
        let ny = grid.ny();
        let scale = 1.0 / ny as f64;
        for j in out.indices() {
            let bin = crate::spectral::bin_of(j, ny);
            let mode = out.mode_mut(j);
            for (p, m) in mode.iter_mut().enumerate() {
                *m = v[p * ny + bin] * scale;
            }
        }
        Ok(out)
    }

    /// Synthesizes `Σ_j v_j(x) e^{ijy}` on `grid`, which must share the plane grid.
    pub fn to_field(&self, grid: &Grid) -> Result<Field> {
        self.to_field_with_phases(grid, |_| Complex64::new(1.0, 0.0))
    }

    /// Synthesizes `Σ_j phase(j) v_j(x) e^{ijy}`.
    pub fn to_field_with_phases(&self, grid: &Grid, phase: impl Fn(i64) -> Complex64) -> Result<Field> {
        if grid.nx() != self.grid.n() || grid.box_length_x().to_bits() != self.grid.box_length().to_bits() {
            return Err(Error::usage("mode grid does not match the waveguide plane"));
        }
        if 2 * self.jmax + 1 > grid.ny() {
            return Err(Error::usage("waveguide grid cannot hold all modes"));
        }
        let ny = grid.ny();
        let mut v = vec![Complex64::default(); grid.len()];
        for j in self.indices() {
            let bin = crate::spectral::bin_of(j, ny);
            let ph = phase(j);
            for (p, m) in self.mode(j).iter().enumerate() {
                v[p * ny + bin] = m * ph;
            }
        }
        grid.transform.inverse_last(&mut v);
        Field::from_values(grid, v, Representation::Physical)
    }

    pub fn grid(&self) -> &PlaneGrid {
        &self.grid
    }

    pub fn jmax(&self) -> usize {
        self.jmax
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        -(self.jmax as i64)..=self.jmax as i64
    }

    fn slot(&self, j: i64) -> usize {
        assert!(j.unsigned_abs() as usize <= self.jmax, "mode {j} outside |j| ≤ {}", self.jmax);
        (j + self.jmax as i64) as usize
    }

    pub fn mode(&self, j: i64) -> &[Complex64] {
        &self.modes[self.slot(j)]
    }

    pub fn mode_mut(&mut self, j: i64) -> &mut [Complex64] {
        let s = self.slot(j);
        &mut self.modes[s]
    }

    /// Components ordered from `j = -jmax` to `j = jmax`.
    pub fn modes(&self) -> &[Vec<Complex64>] {
        &self.modes
    }

    pub(crate) fn modes_mut(&mut self) -> &mut [Vec<Complex64>] {
        &mut self.modes
    }

    pub fn is_finite(&self) -> bool {
        self.modes.iter().flatten().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn scaled(mut self, c: Complex64) -> Self {
        self.modes.iter_mut().flatten().for_each(|v| *v *= c);
        self
    }

    pub fn max_abs_diff(&self, other: &ModeVector) -> Result<f64> {
        if self.grid != other.grid || self.jmax != other.jmax {
            return Err(Error::usage("mode vectors live on different grids"));
        }
        Ok(self
            .modes
            .iter()
            .flatten()
            .zip(other.modes.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `‖v_j‖²_{L²_x}` for every component, without the torus factor.
    fn mode_l2_sq(&self) -> Vec<f64> {
        let area = self.grid.cell_area();
        self.modes.iter().map(|m| area * m.iter().map(|v| v.norm_sqr()).sum::<f64>()).collect()
    }

    /// `2π Σ_j ‖v_j‖²_{L²}`.
    pub fn mass(&self) -> f64 {
        TORUS_LENGTH * self.mode_l2_sq().iter().sum::<f64>()
    }

    /// `(2π Σ_j ⟨j⟩² ‖v_j‖²_{L²})^{1/2}`.
    pub fn norm_l2h1(&self) -> f64 {
        self.h1_weighted().iter().sum::<f64>().sqrt()
    }

    fn h1_weighted(&self) -> Vec<f64> {
        self.indices()
            .zip(self.mode_l2_sq())
            .map(|(j, m)| TORUS_LENGTH * bracket(j as f64).powi(2) * m)
            .collect()
    }

    /// Share of `‖v‖²_{L²h¹}` carried by the two outermost shells `|j| ≥ jmax - 1`.
    pub fn truncation_fraction(&self) -> f64 {
        let w = self.h1_weighted();
        let total: f64 = w.iter().sum();
        if total == 0.0 {
            return 0.0;
        }
        let edge: f64 = self
            .indices()
            .zip(&w)
            .filter(|(j, _)| j.unsigned_abs() as usize + 1 >= self.jmax)
            .map(|(_, w)| w)
            .sum();
        edge / total
    }

    /// `Σ_k |v_k(x)|²` at every plane point.
    pub fn density(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.grid.len()];
        for m in &self.modes {
            for (a, v) in s.iter_mut().zip(m) {
                *a += v.norm_sqr();
            }
        }
        s
    }

    /// `∫ (2π Σ_j ⟨j⟩² |v_j|²)² dx`, the integrand of the `L⁴_{t,x} h¹` norm.
    pub fn scattering_integrand(&self) -> f64 {
        let mut d = vec![0.0; self.grid.len()];
        for (j, m) in self.indices().zip(&self.modes) {
            let w = TORUS_LENGTH * bracket(j as f64).powi(2);
            for (a, v) in d.iter_mut().zip(m) {
                *a += w * v.norm_sqr();
            }
        }
        self.grid.cell_area() * d.iter().map(|x| x * x).sum::<f64>()
    }

    /// `2π Σ_j ‖∇v_j‖²_{L²}` by spectral differentiation.
    pub fn grad_sq(&self) -> f64 {
        let n = self.grid.n();
        let k: Vec<f64> = (0..n).map(|i| self.grid.kx(i)).collect();
        let norm = self.grid.cell_area() / self.grid.len() as f64;
        let mut total = 0.0;
        let mut buf = vec![Complex64::default(); self.grid.len()];
        for m in &self.modes {
            buf.copy_from_slice(m);
            self.grid.transform.forward(&mut buf);
            for i1 in 0..n {
                for i2 in 0..n {
                    total += (k[i1] * k[i1] + k[i2] * k[i2]) * buf[i1 * n + i2].norm_sqr();
                }
            }
        }
        TORUS_LENGTH * norm * total
    }

    /// Conserved Hamiltonian `2π [½ Σ‖∇v_j‖² + ¼ ∫ (2S² - Σ|v_j|⁴)]`,
    /// `S = Σ|v_k|²`.
    pub fn hamiltonian(&self) -> f64 {
        let s = self.density();
        let quartic: f64 = s.iter().map(|x| 2.0 * x * x).sum::<f64>()
            - self.modes.iter().flatten().map(|v| v.norm_sqr().powi(2)).sum::<f64>();
        0.5 * self.grad_sq() + 0.25 * TORUS_LENGTH * self.grid.cell_area() * quartic
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::gaussian_trig;
    use crate::spectral::{make_grid, norm_l2, norm_lx2_hy1};

    #[test]
    fn decomposition_round_trip_and_norms() {
        let g = make_grid(24.0, 32, 16).unwrap();
        let u = gaussian_trig(&g, 0.9, 2.0, [0.5, 0.0], [0.2, 0.0], 0.7, 2);
        let v = ModeVector::from_field(&u, 4).unwrap();
        let back = v.to_field(&g).unwrap();
        assert!(back.max_abs_diff(&u).unwrap() < 1e-12);
        let m = norm_l2(&u).powi(2);
        assert!((v.mass() - m).abs() < 1e-10 * m);
        let h = norm_lx2_hy1(&u);
        assert!((v.norm_l2h1() - h).abs() < 1e-10 * h);
    }

    #[test]
    fn y_independent_field_is_mode_zero() {
        let g = make_grid(24.0, 32, 8).unwrap();
        let u = gaussian_trig(&g, 0.9, 2.0, [0.0, 0.0], [0.0, 0.0], 0.0, 0);
        let v = ModeVector::from_field(&u, 2).unwrap();
        let n = g.nx();
        for i in 0..n * n {
            assert!((v.mode(0)[i] - u.values()[i * g.ny()]).norm() < 1e-14);
            assert!(v.mode(1)[i].norm() < 1e-14);
        }
        assert_eq!(v.truncation_fraction(), 0.0);
    }

    #[test]
    fn jmax_too_large_for_grid() {
        let g = make_grid(24.0, 16, 8).unwrap();
        let u = Field::zeros(&g, Representation::Physical);
        assert!(matches!(ModeVector::from_field(&u, 4), Err(Error::Usage(_))));
    }

    #[test]
    fn truncation_fraction_counts_outer_shells() {
        let g = PlaneGrid::new(16.0, 16).unwrap();
        let v = ModeVector::from_fn(&g, 3, |j, _, _| if j == 3 { Complex64::new(1.0, 0.0) } else { Complex64::default() })
            .unwrap();
        assert!((v.truncation_fraction() - 1.0).abs() < 1e-15);
    }
}
