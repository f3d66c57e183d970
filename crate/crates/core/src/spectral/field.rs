use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Representation {
    Physical,
    Spectral,
}

/// Complex state `u(x, y)` sampled on a [`Grid`].
///
/// The spectral representation is normalized so that
/// `Σ |c|² = ∫ |u|² dx dy` (quadrature weight folded into the transform).
#[derive(Clone, Debug)]
pub struct Field {
    grid: Grid,
    values: Vec<Complex64>,
    repr: Representation,
}

impl Field {
    pub fn zeros(grid: &Grid, repr: Representation) -> Self {
        Self {
            values: vec![Complex64::default(); grid.len()],
            grid: grid.clone(),
            repr,
        }
    }

    pub fn from_values(grid: &Grid, values: Vec<Complex64>, repr: Representation) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::usage(format!(
                "expected {} values for {:?}, got {}",
                grid.len(),
                grid,
                values.len()
            )));
        }
        Ok(Self { grid: grid.clone(), values, repr })
    }

    /// Samples `f(x1, x2, y)` on the physical grid.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64, f64) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for i1 in 0..grid.nx() {
            let x1 = grid.x_coord(i1);
            for i2 in 0..grid.nx() {
                let x2 = grid.x_coord(i2);
                for iy in 0..grid.ny() {
                    values.push(f(x1, x2, grid.y_coord(iy)));
                }
            }
        }
        Self { grid: grid.clone(), values, repr: Representation::Physical }
    }

    /// `A e^{i(k·x + j y)}` with `k = (k1, k2)` given as integer lattice indices.
    pub fn plane_wave(grid: &Grid, amplitude: Complex64, k1: i64, k2: i64, j: i64) -> Self {
        let dk = grid.dk();
        Self::from_fn(grid, |x1, x2, y| {
            amplitude * Complex64::from_polar(1.0, dk * (k1 as f64 * x1 + k2 as f64 * x2) + j as f64 * y)
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn repr(&self) -> Representation {
        self.repr
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    fn expect(&self, repr: Representation) -> Result<()> {
        if self.repr != repr {
            return Err(Error::usage(format!(
                "field is in {:?} representation, expected {:?}",
                self.repr, repr
            )));
        }
        Ok(())
    }

    pub fn to_spectral(&self) -> Result<Field> {
        self.expect(Representation::Physical)?;
        Ok(self.clone().into_spectral())
    }

    pub fn to_physical(&self) -> Result<Field> {
        self.expect(Representation::Spectral)?;
        Ok(self.clone().into_physical())
    }

    /// Converts to spectral representation; no-op if already spectral.
    pub fn into_spectral(mut self) -> Field {
        if self.repr == Representation::Physical {
            forward_in_place(&self.grid, &mut self.values);
            self.repr = Representation::Spectral;
        }
        self
    }

    /// Converts to physical representation; no-op if already physical.
    pub fn into_physical(mut self) -> Field {
        if self.repr == Representation::Spectral {
            inverse_in_place(&self.grid, &mut self.values);
            self.repr = Representation::Physical;
        }
        self
    }

    pub fn into_repr(self, repr: Representation) -> Field {
        match repr {
            Representation::Physical => self.into_physical(),
            Representation::Spectral => self.into_spectral(),
        }
    }

    pub fn scaled(mut self, factor: Complex64) -> Field {
        self.values.iter_mut().for_each(|v| *v *= factor);
        self
    }

    fn check_compatible(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::usage("fields live on different grids"));
        }
        if self.repr != other.repr {
            return Err(Error::usage("fields are in different representations"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.check_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Field { grid: self.grid.clone(), values, repr: self.repr })
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.check_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Field { grid: self.grid.clone(), values, repr: self.repr })
    }

    pub fn conj(mut self) -> Field {
        // conjugation in physical space maps c_k to conj(c_{-k}) in spectral space
        let repr = self.repr;
        self = self.into_physical();
        self.values.iter_mut().for_each(|v| *v = v.conj());
        self.into_repr(repr)
    }

    /// Largest pointwise modulus difference, compared in physical space.
    pub fn max_abs_diff(&self, other: &Field) -> Result<f64> {
        let a = self.clone().into_physical();
        let b = other.clone().into_physical();
        a.check_compatible(&b)?;
        Ok(a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
    }
}

pub(crate) fn forward_in_place(grid: &Grid, values: &mut [Complex64]) {
    grid.transform.forward(values);
    let n = grid.len() as f64;
    let scale = (grid.cell_volume() / n).sqrt();
    values.iter_mut().for_each(|v| *v *= scale);
}

pub(crate) fn inverse_in_place(grid: &Grid, values: &mut [Complex64]) {
    grid.transform.inverse(values);
    let n = grid.len() as f64;
    let scale = 1.0 / (n * grid.cell_volume()).sqrt();
    values.iter_mut().for_each(|v| *v *= scale);
}

/// Ordered sequence of fields on one grid, used for space-time norms.
#[derive(Clone, Debug, Default)]
pub struct TimeSlices {
    times: Vec<f64>,
    slices: Vec<Field>,
}

impl TimeSlices {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(times: Vec<f64>, slices: Vec<Field>) -> Result<Self> {
        if times.len() != slices.len() {
            return Err(Error::usage("times and slices differ in length"));
        }
        let mut ts = Self::new();
        for (t, f) in times.into_iter().zip(slices) {
            ts.push(t, f)?;
        }
        Ok(ts)
    }

    pub fn push(&mut self, t: f64, field: Field) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if t <= last {
                return Err(Error::usage(format!("time {t} does not follow {last}")));
            }
        }
        if let Some(first) = self.slices.first() {
            if first.grid() != field.grid() {
                return Err(Error::usage("all slices must share one grid"));
            }
        }
        self.times.push(t);
        self.slices.push(field);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn slices(&self) -> &[Field] {
        &self.slices
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &Field)> {
        self.times.iter().copied().zip(&self.slices)
    }

    pub fn last(&self) -> Option<(f64, &Field)> {
        self.times.last().copied().zip(self.slices.last())
    }
}

/// Trapezoid weights for a strictly increasing sample of times.
pub fn trapezoid_weights(times: &[f64]) -> Vec<f64> {
    let n = times.len();
    let mut w = vec![0.0; n];
    for i in 1..n {
        let h = times[i] - times[i - 1];
        w[i - 1] += 0.5 * h;
        w[i] += 0.5 * h;
    }
    w
}
