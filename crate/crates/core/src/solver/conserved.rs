use serde::{Deserialize, Serialize};

use crate::spectral::{Field, Grid};

/// Conserved quantities of the cubic flow.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConservedSet {
    pub mass: f64,
    pub energy: f64,
    pub momentum: [f64; 2],
}

impl ConservedSet {
    /// Largest relative deviation of mass and energy, plus the absolute
    /// momentum deviation scaled by the reference mass.
    pub fn max_relative_drift(&self, reference: &ConservedSet) -> f64 {
        let rel = |a: f64, b: f64| if b == 0.0 { a.abs() } else { ((a - b) / b).abs() };
        let scale = if reference.mass > 0.0 { reference.mass } else { 1.0 };
        let dp = (self.momentum[0] - reference.momentum[0])
            .abs()
            .max((self.momentum[1] - reference.momentum[1]).abs())
            / scale;
        rel(self.mass, reference.mass)
            .max(rel(self.energy, reference.energy))
            .max(dp)
    }
}

/// Mass `∫|u|²`, energy `½∫|∇u|² + ¼∫|u|⁴`, and momentum
/// `Im ∫ ū ∇ₓu` (the plane components).
pub fn conserved(u: &Field) -> ConservedSet {
    let spectral = u.clone().into_spectral();
    let physical = u.clone().into_physical();
    conserved_parts(u.grid(), spectral.values(), physical.values())
}

pub(crate) fn conserved_parts(
    grid: &Grid,
    spectral: &[num_complex::Complex64],
    physical: &[num_complex::Complex64],
) -> ConservedSet {
    let ny = grid.ny();
    let nx = grid.nx();
    let jy: Vec<f64> = (0..ny).map(|i| grid.jy(i) as f64).collect();
    let mut mass = 0.0;
    let mut kinetic = 0.0;
    let mut p = [0.0; 2];
    for i1 in 0..nx {
        let k1 = grid.kx(i1);
        for i2 in 0..nx {
            let k2 = grid.kx(i2);
            let base = grid.index(i1, i2, 0);
            for (iy, j) in jy.iter().enumerate() {
                let w = spectral[base + iy].norm_sqr();
                mass += w;
                kinetic += (k1 * k1 + k2 * k2 + j * j) * w;
                p[0] += k1 * w;
                p[1] += k2 * w;
            }
        }
    }
    let quartic: f64 = physical.iter().map(|v| v.norm_sqr().powi(2)).sum::<f64>() * grid.cell_volume();
    ConservedSet {
        mass,
        energy: 0.5 * kinetic + 0.25 * quartic,
        momentum: p,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn plane_wave_values() {
        let g = make_grid(8.0 * PI, 32, 8).unwrap();
        let a = 0.7;
        let u = Field::plane_wave(&g, Complex64::new(a, 0.0), 3, -1, 2);
        let c = conserved(&u);
        let v = g.volume();
        let k1 = 3.0 * g.dk();
        let k2 = -g.dk();
        assert!((c.mass - a * a * v).abs() < 1e-10 * v);
        let e = 0.5 * (k1 * k1 + k2 * k2 + 4.0) * a * a * v + 0.25 * a.powi(4) * v;
        assert!((c.energy - e).abs() < 1e-10 * e);
        assert!((c.momentum[0] - k1 * a * a * v).abs() < 1e-10 * v);
        assert!((c.momentum[1] - k2 * a * a * v).abs() < 1e-10 * v);
    }

    #[test]
    fn drift_of_identical_sets_is_zero() {
        let c = ConservedSet { mass: 2.0, energy: 3.0, momentum: [0.1, 0.2] };
        assert_eq!(c.max_relative_drift(&c), 0.0);
    }
}
