use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{bin_of, Field, Grid, Representation};

/// Closed-open frequency cube `[a·2^level, (a+1)·2^level)` in each axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicCube {
    pub level: i32,
    /// Corner in units of the side length.
    pub index: [i64; 2],
}

impl DyadicCube {
    pub fn new(level: i32, index: [i64; 2]) -> Self {
        Self { level, index }
    }

    /// Dyadic cube of side `2^level` containing `xi`.
    pub fn containing(xi: [f64; 2], level: i32) -> Self {
        let s = side_of(level);
        Self::new(level, [(xi[0] / s).floor() as i64, (xi[1] / s).floor() as i64])
    }

    pub fn side(&self) -> f64 {
        side_of(self.level)
    }

    pub fn area(&self) -> f64 {
        self.side() * self.side()
    }

    pub fn corner(&self) -> [f64; 2] {
        let s = self.side();
        [self.index[0] as f64 * s, self.index[1] as f64 * s]
    }

    pub fn center(&self) -> [f64; 2] {
        let s = self.side();
        let c = self.corner();
        [c[0] + 0.5 * s, c[1] + 0.5 * s]
    }

    pub fn contains(&self, xi: [f64; 2]) -> bool {
        let c = self.corner();
        let s = self.side();
        (0..2).all(|a| xi[a] >= c[a] && xi[a] < c[a] + s)
    }

    /// Cube shifted by a frequency `eta`, which must be a multiple of the side.
    pub fn shifted(&self, eta: [f64; 2]) -> Result<Self> {
        let s = self.side();
        let m = [eta[0] / s, eta[1] / s];
        if m.iter().any(|v| v.fract() != 0.0) {
            return Err(Error::usage("shift is not a multiple of the cube side"));
        }
        Ok(Self::new(self.level, [self.index[0] + m[0] as i64, self.index[1] + m[1] as i64]))
    }
}

fn side_of(level: i32) -> f64 {
    2f64.powi(level)
}

/// Lattice layout of a box of length `2π·2^p`, where frequencies are the
/// integer multiples of `2^{-p}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DyadicLattice {
    /// `p` with `dk = 2^{-p}`.
    pub p: i32,
    pub n: usize,
}

impl DyadicLattice {
    pub fn of(grid: &Grid) -> Result<Self> {
        let ratio = grid.box_length_x() / (2.0 * std::f64::consts::PI);
        let p = ratio.log2().round() as i32;
        if ((2f64.powi(p) - ratio) / ratio).abs() > 1e-12 {
            return Err(Error::config(format!(
                "box_length_x = {} is not 2π·2^p; dyadic cubes need a dyadic frequency lattice",
                grid.box_length_x()
            )));
        }
        Ok(Self { p, n: grid.nx() })
    }

    pub fn dk(&self) -> f64 {
        2f64.powi(-self.p)
    }

    /// Smallest level: one lattice cell.
    pub fn min_level(&self) -> i32 {
        -self.p
    }

    /// Largest level: the four quadrants of the lattice.
    pub fn max_level(&self) -> i32 {
        self.n.trailing_zeros() as i32 - 1 - self.p
    }

    /// Signed lattice indices `m` with `m·dk` in the cube, per axis, as a
    /// half-open range; `None` if the cube leaves the lattice box.
    pub fn index_range(&self, q: &DyadicCube) -> Option<[(i64, i64); 2]> {
        if q.level < self.min_level() {
            return None;
        }
        let per = 1i64 << (q.level - self.min_level());
        let half = (self.n / 2) as i64;
        let mut out = [(0, 0); 2];
        for (o, i) in out.iter_mut().zip(q.index) {
            let lo = i * per;
            let hi = lo + per;
            if lo < -half || hi > half {
                return None;
            }
            *o = (lo, hi);
        }
        Some(out)
    }

    /// Every dyadic cube inside the lattice box, ordered by level then index.
    pub fn all_cubes(&self) -> Vec<DyadicCube> {
        let mut out = Vec::new();
        for level in self.min_level()..=self.max_level() {
            let per = 1i64 << (level - self.min_level());
            let count = self.n as i64 / per;
            for a in -count / 2..count / 2 {
                for b in -count / 2..count / 2 {
                    out.push(DyadicCube::new(level, [a, b]));
                }
            }
        }
        out
    }
}

/// Sharp x-frequency cutoff `ℱₓ(f_Q) = χ_Q ℱₓ f` of a spectral field.
pub fn cube_restrict(f: &Field, q: &DyadicCube) -> Result<Field> {
    if f.repr() != Representation::Spectral {
        return Err(Error::usage("cube_restrict expects a spectral field"));
    }
    let grid = f.grid();
    let lattice = DyadicLattice::of(grid)?;
    let range = lattice
        .index_range(q)
        .ok_or_else(|| Error::usage(format!("cube {q:?} lies outside the frequency lattice")))?;
    let mut out = Field::zeros(grid, Representation::Spectral);
    copy_cube(grid, f.values(), out.values_mut(), range, |v| v);
    Ok(out)
}

/// Copies the cube's coefficients from `src` into `dst` through `map`.
pub(crate) fn copy_cube(
    grid: &Grid,
    src: &[Complex64],
    dst: &mut [Complex64],
    range: [(i64, i64); 2],
    map: impl Fn(Complex64) -> Complex64,
) {
    let (n, ny) = (grid.nx(), grid.ny());
    for m1 in range[0].0..range[0].1 {
        let i1 = bin_of(m1, n);
        for m2 in range[1].0..range[1].1 {
            let base = grid.index(i1, bin_of(m2, n), 0);
            for iy in 0..ny {
                dst[base + iy] = map(src[base + iy]);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use crate::testing::random_field;
    use std::f64::consts::PI;

    #[test]
    fn lattice_levels() {
        let g = make_grid(2.0 * PI * 8.0, 64, 4).unwrap();
        let l = DyadicLattice::of(&g).unwrap();
        assert_eq!(l.p, 3);
        assert_eq!(l.min_level(), -3);
        assert_eq!(l.max_level(), 2);
        assert_eq!(l.all_cubes().len(), 4096 + 1024 + 256 + 64 + 16 + 4);
        assert!(DyadicLattice::of(&make_grid(50.0, 64, 4).unwrap()).is_err());
    }

    #[test]
    fn cube_geometry() {
        let q = DyadicCube::new(-1, [3, -2]);
        assert_eq!(q.corner(), [1.5, -1.0]);
        assert_eq!(q.center(), [1.75, -0.75]);
        assert!(q.contains([1.5, -1.0]) && !q.contains([2.0, -1.0]));
        assert_eq!(DyadicCube::containing([1.6, -0.9], -1), q);
        assert_eq!(q.shifted([1.0, 0.5]).unwrap(), DyadicCube::new(-1, [5, -1]));
        assert!(q.shifted([0.25, 0.0]).is_err());
    }

    #[test]
    fn restriction_cases() {
        let g = make_grid(2.0 * PI * 4.0, 32, 4).unwrap();
        let f = random_field(&g, 5).into_spectral();
        let l = DyadicLattice::of(&g).unwrap();
        // The four top-level quadrants partition the lattice.
        let mut sum = Field::zeros(&g, Representation::Spectral);
        for q in l.all_cubes().into_iter().filter(|q| q.level == l.max_level()) {
            sum = sum.add(&cube_restrict(&f, &q).unwrap()).unwrap();
        }
        assert!(sum.max_abs_diff(&f).unwrap() < 1e-15);
        // A finer partition also reconstructs.
        let mut fine = Field::zeros(&g, Representation::Spectral);
        for q in l.all_cubes().into_iter().filter(|q| q.level == l.min_level() + 1) {
            fine = fine.add(&cube_restrict(&f, &q).unwrap()).unwrap();
        }
        assert!(fine.max_abs_diff(&f).unwrap() < 1e-15);
        assert!(cube_restrict(&f, &DyadicCube::new(l.max_level(), [5, 0])).is_err());
        assert!(cube_restrict(&f.clone().into_physical(), &DyadicCube::new(0, [0, 0])).is_err());
    }

    #[test]
    fn disjoint_cube_gives_zero() {
        let g = make_grid(2.0 * PI * 4.0, 32, 4).unwrap();
        let f = Field::plane_wave(&g, Complex64::new(1.0, 0.0), 3, 1, 0).into_spectral();
        let q = DyadicCube::containing([-1.0, -1.0], -1);
        assert!(cube_restrict(&f, &q).unwrap().values().iter().all(|v| v.norm() < 1e-12));
        let hit = DyadicCube::containing([0.75, 0.25], -2);
        assert!(cube_restrict(&f, &hit).unwrap().max_abs_diff(&f).unwrap() < 1e-12);
    }
}
