use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::transform::{freq_index, Transform3};
use crate::error::{Error, Result};

pub const TORUS_LENGTH: f64 = 2.0 * PI;

const NX_RANGE: (usize, usize) = (8, 1024);
const NY_RANGE: (usize, usize) = (4, 256);

/// Discretization of the periodic box `[-L/2, L/2)^2` times the circle
/// `[0, 2π)`. Values are stored row-major as `[x1][x2][y]`.
#[derive(Clone)]
pub struct Grid {
    box_length_x: f64,
    nx: usize,
    ny: usize,
    pub(crate) transform: Arc<Transform3>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("box_length_x", &self.box_length_x)
            .field("nx", &self.nx)
            .field("ny", &self.ny)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.box_length_x.to_bits() == other.box_length_x.to_bits()
            && self.nx == other.nx
            && self.ny == other.ny
    }
}

fn check_size(name: &str, n: usize, (lo, hi): (usize, usize)) -> Result<()> {
    if !n.is_power_of_two() || n < lo || n > hi {
        return Err(Error::config(format!(
            "{name} = {n} must be a power of two in [{lo}, {hi}]"
        )));
    }
    Ok(())
}

fn check_length(box_length_x: f64) -> Result<()> {
    if !(box_length_x.is_finite() && box_length_x > 0.0) {
        return Err(Error::config(format!(
            "box_length_x = {box_length_x} must be a positive finite number"
        )));
    }
    Ok(())
}

/// Builds a waveguide grid after validating the sizes.
pub fn make_grid(box_length_x: f64, nx: usize, ny: usize) -> Result<Grid> {
    Grid::new(box_length_x, nx, ny)
}

impl Grid {
    pub fn new(box_length_x: f64, nx: usize, ny: usize) -> Result<Self> {
        check_length(box_length_x)?;
        check_size("nx", nx, NX_RANGE)?;
        check_size("ny", ny, NY_RANGE)?;
        Ok(Self {
            box_length_x,
            nx,
            ny,
            transform: Arc::new(Transform3::new(nx, nx, ny)),
        })
    }

    pub fn box_length_x(&self) -> f64 {
        self.box_length_x
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn len(&self) -> usize {
        self.nx * self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.box_length_x / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        TORUS_LENGTH / self.ny as f64
    }

    /// Quadrature weight `dx² dy`.
    pub fn cell_volume(&self) -> f64 {
        self.dx() * self.dx() * self.dy()
    }

    pub fn volume(&self) -> f64 {
        self.box_length_x * self.box_length_x * TORUS_LENGTH
    }

    /// Spacing of the x-frequency lattice, `2π/L`.
    pub fn dk(&self) -> f64 {
        2.0 * PI / self.box_length_x
    }

    /// Physical coordinate of x-index `i`, on `[-L/2, L/2)`.
    pub fn x_coord(&self, i: usize) -> f64 {
        -0.5 * self.box_length_x + i as f64 * self.dx()
    }

    pub fn y_coord(&self, i: usize) -> f64 {
        i as f64 * self.dy()
    }

    /// Angular x-frequency held by FFT bin `i`.
    pub fn kx(&self, i: usize) -> f64 {
        freq_index(i, self.nx) as f64 * self.dk()
    }

    /// Integer torus frequency held by FFT bin `i`.
    pub fn jy(&self, i: usize) -> i64 {
        freq_index(i, self.ny)
    }

    pub fn x_frequencies(&self) -> Vec<f64> {
        let mut k: Vec<f64> = (0..self.nx).map(|i| self.kx(i)).collect();
        k.sort_by(f64::total_cmp);
        k
    }

    pub fn y_frequencies(&self) -> Vec<i64> {
        let mut j: Vec<i64> = (0..self.ny).map(|i| self.jy(i)).collect();
        j.sort();
        j
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize, iy: usize) -> usize {
        (i1 * self.nx + i2) * self.ny + iy
    }

    /// Same grid with the x-box dilated by `factor`.
    pub fn dilated(&self, factor: f64) -> Result<Self> {
        check_length(self.box_length_x * factor)?;
        Ok(Self {
            box_length_x: self.box_length_x * factor,
            nx: self.nx,
            ny: self.ny,
            transform: Arc::clone(&self.transform),
        })
    }

    /// The x-plane of this grid.
    pub fn plane(&self) -> PlaneGrid {
        PlaneGrid::from_parts(self.box_length_x, self.nx)
    }
}

/// Two-dimensional periodic box `[-L/2, L/2)^2`, used by the mode system.
#[derive(Clone)]
pub struct PlaneGrid {
    box_length: f64,
    n: usize,
    pub(crate) transform: Arc<Transform3>,
}

impl fmt::Debug for PlaneGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlaneGrid")
            .field("box_length", &self.box_length)
            .field("n", &self.n)
            .finish()
    }
}

impl PartialEq for PlaneGrid {
    fn eq(&self, other: &Self) -> bool {
        self.box_length.to_bits() == other.box_length.to_bits() && self.n == other.n
    }
}

impl PlaneGrid {
    pub fn new(box_length: f64, n: usize) -> Result<Self> {
        check_length(box_length)?;
        check_size("nx", n, NX_RANGE)?;
        Ok(Self::from_parts(box_length, n))
    }

    fn from_parts(box_length: f64, n: usize) -> Self {
        Self {
            box_length,
            n,
            transform: Arc::new(Transform3::new(n, n, 1)),
        }
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.box_length / self.n as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dx()
    }

    pub fn dk(&self) -> f64 {
        2.0 * PI / self.box_length
    }

    pub fn x_coord(&self, i: usize) -> f64 {
        -0.5 * self.box_length + i as f64 * self.dx()
    }

    pub fn kx(&self, i: usize) -> f64 {
        freq_index(i, self.n) as f64 * self.dk()
    }

    pub fn dilated(&self, factor: f64) -> Result<Self> {
        check_length(self.box_length * factor)?;
        Ok(Self {
            box_length: self.box_length * factor,
            n: self.n,
            transform: Arc::clone(&self.transform),
        })
    }
}
