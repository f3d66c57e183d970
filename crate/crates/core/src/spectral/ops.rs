//! Spectral multipliers acting on [`Field`]s.

use num_complex::Complex64;

use super::field::{Field, Representation};
use super::grid::Grid;
use crate::error::{Error, Result};

/// Japanese bracket `⟨j⟩ = (1 + j²)^{1/2}`.
#[inline]
pub fn bracket(j: f64) -> f64 {
    (1.0 + j * j).sqrt()
}

/// Multiplies spectral values by `symbol(k1, k2, j)`, where `k1, k2` are
/// angular x-frequencies and `j` the torus frequency.
pub(crate) fn apply_symbol(
    grid: &Grid,
    values: &mut [Complex64],
    symbol: impl Fn(f64, f64, i64) -> Complex64,
) {
    let kx: Vec<f64> = (0..grid.nx()).map(|i| grid.kx(i)).collect();
    let jy: Vec<i64> = (0..grid.ny()).map(|i| grid.jy(i)).collect();
    let ny = grid.ny();
    let nx = grid.nx();
    for (i1, &k1) in kx.iter().enumerate() {
        for (i2, &k2) in kx.iter().enumerate() {
            let base = (i1 * nx + i2) * ny;
            for (iy, &j) in jy.iter().enumerate() {
                values[base + iy] *= symbol(k1, k2, j);
            }
        }
    }
}

/// Applies a symbol to a field of either representation, returning a field
/// in the same representation.
fn with_symbol(f: &Field, symbol: impl Fn(f64, f64, i64) -> Complex64) -> Field {
    let repr = f.repr();
    let mut s = f.clone().into_spectral();
    let grid = s.grid().clone();
    apply_symbol(&grid, s.values_mut(), symbol);
    s.into_repr(repr)
}

/// Free Schrödinger flow `e^{itΔ}` on the waveguide: multiplier
/// `e^{-it(|ξ|² + j²)}`.
pub fn free_propagate(f: &Field, t: f64) -> Field {
    with_symbol(f, |k1, k2, j| {
        Complex64::from_polar(1.0, -t * (k1 * k1 + k2 * k2 + (j * j) as f64))
    })
}

/// Free flow in the plane directions only, `e^{itΔ_x}`.
pub fn free_propagate_x(f: &Field, t: f64) -> Field {
    with_symbol(f, |k1, k2, _| Complex64::from_polar(1.0, -t * (k1 * k1 + k2 * k2)))
}

/// Multiplier `⟨j⟩^s` on the torus frequency.
pub fn sobolev_y_multiplier(f: &Field, s: f64) -> Field {
    with_symbol(f, |_, _, j| Complex64::new(bracket(j as f64).powf(s), 0.0))
}

/// Translation `u(x) ↦ u(x - shift)` in the plane, exact for band-limited data.
pub fn translate_x(f: &Field, shift: [f64; 2]) -> Field {
    with_symbol(f, |k1, k2, _| Complex64::from_polar(1.0, -(k1 * shift[0] + k2 * shift[1])))
}

/// Translation `u(y) ↦ u(y - shift)` on the torus.
pub fn translate_y(f: &Field, shift: f64) -> Field {
    with_symbol(f, |_, _, j| Complex64::from_polar(1.0, -(j as f64) * shift))
}

/// Pointwise modulation `e^{i x·ξ} u`, computed in physical space.
pub fn modulate_x(f: &Field, xi: [f64; 2]) -> Field {
    let repr = f.repr();
    let mut p = f.clone().into_physical();
    let grid = p.grid().clone();
    let ny = grid.ny();
    let values = p.values_mut();
    for i1 in 0..grid.nx() {
        let x1 = grid.x_coord(i1);
        for i2 in 0..grid.nx() {
            let phase = Complex64::from_polar(1.0, xi[0] * x1 + xi[1] * grid.x_coord(i2));
            let base = grid.index(i1, i2, 0);
            values[base..base + ny].iter_mut().for_each(|v| *v *= phase);
        }
    }
    p.into_repr(repr)
}

/// `true` if any axis index exceeds two thirds of the Nyquist index.
#[inline]
pub(crate) fn is_aliased(k: i64, n: usize) -> bool {
    3 * k.unsigned_abs() as usize > n
}

/// 2/3-rule projection: zeroes every coefficient with an axis frequency
/// index `|k| > n/3`.
pub fn dealias(f: &Field) -> Result<Field> {
    if f.repr() != Representation::Spectral {
        return Err(Error::usage("dealias expects a spectral field"));
    }
    let mut out = f.clone();
    let grid = out.grid().clone();
    dealias_in_place(&grid, out.values_mut());
    Ok(out)
}

pub(crate) fn dealias_in_place(grid: &Grid, values: &mut [Complex64]) {
    use super::transform::freq_index;
    let nx = grid.nx();
    let ny = grid.ny();
    let keep_x: Vec<bool> = (0..nx).map(|i| !is_aliased(freq_index(i, nx), nx)).collect();
    let keep_y: Vec<bool> = (0..ny).map(|i| !is_aliased(freq_index(i, ny), ny)).collect();
    for i1 in 0..nx {
        for i2 in 0..nx {
            let base = (i1 * nx + i2) * ny;
            for iy in 0..ny {
                if !(keep_x[i1] && keep_x[i2] && keep_y[iy]) {
                    values[base + iy] = Complex64::default();
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{make_grid, norm_l2};
    use crate::testing::random_field;

    #[test]
    fn plane_wave_is_eigenfunction() {
        let g = make_grid(20.0, 16, 8).unwrap();
        let (k1, k2, j) = (2, -3, 1);
        let f = Field::plane_wave(&g, Complex64::new(0.7, 0.2), k1, k2, j);
        let t = 0.83;
        let k2sum = (k1 * k1 + k2 * k2) as f64 * g.dk().powi(2) + (j * j) as f64;
        let expected = f.clone().scaled(Complex64::from_polar(1.0, -t * k2sum));
        let got = free_propagate(&f, t);
        assert!(got.max_abs_diff(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn propagation_identity_and_semigroup() {
        let g = make_grid(16.0, 16, 8).unwrap();
        let f = random_field(&g, 3);
        assert!(free_propagate(&f, 0.0).max_abs_diff(&f).unwrap() < 1e-13);
        let a = free_propagate(&free_propagate(&f, 0.4), 0.7);
        let b = free_propagate(&f, 1.1);
        assert!(a.max_abs_diff(&b).unwrap() < 1e-12 * norm_l2(&f).max(1.0));
    }

    #[test]
    fn unitarity_over_random_fields() {
        let g = make_grid(12.0, 8, 4).unwrap();
        for seed in 0..100u64 {
            let f = random_field(&g, seed);
            let t = 0.37 + seed as f64 * 0.13;
            let before = norm_l2(&f);
            let after = norm_l2(&free_propagate(&f, t));
            assert!((after - before).abs() <= 1e-12 * before);
        }
    }

    #[test]
    fn sobolev_multiplier_cases() {
        let g = make_grid(10.0, 8, 8).unwrap();
        let f = random_field(&g, 5);
        assert!(sobolev_y_multiplier(&f, 0.0).max_abs_diff(&f).unwrap() < 1e-13);

        let mode = Field::plane_wave(&g, Complex64::new(1.0, 0.0), 0, 0, 1);
        let scaled = sobolev_y_multiplier(&mode, 1.0);
        let expected = mode.clone().scaled(Complex64::new(2f64.sqrt(), 0.0));
        assert!(scaled.max_abs_diff(&expected).unwrap() < 1e-12);

        let back = sobolev_y_multiplier(&sobolev_y_multiplier(&f, 1.3), -1.3);
        assert!(back.max_abs_diff(&f).unwrap() < 1e-12);
    }

    #[test]
    fn dealias_projection() {
        let g = make_grid(10.0, 16, 8).unwrap();
        let low = Field::plane_wave(&g, Complex64::new(1.0, 0.0), 1, -2, 1).into_spectral();
        assert!(dealias(&low).unwrap().max_abs_diff(&low).unwrap() < 1e-14);

        let nyq = Field::plane_wave(&g, Complex64::new(1.0, 0.0), -8, 0, 0).into_spectral();
        assert!(norm_l2(&dealias(&nyq).unwrap()) < 1e-14);

        let f = random_field(&g, 9).into_spectral();
        let once = dealias(&f).unwrap();
        let twice = dealias(&once).unwrap();
        assert_eq!(once.values(), twice.values());

        assert!(dealias(&random_field(&g, 1)).is_err());
    }
}
