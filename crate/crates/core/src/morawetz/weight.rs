use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Radial weight `a(r) = r²/(2r₀) (1 + ½ log(r₀/r))` for `r < r₀`,
/// `a(r) = r - r₀/2` for `r ≥ r₀`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorawetzWeight {
    r0: f64,
}

/// `a`, `a'` and the planar Laplacian `Δa = a'' + a'/r` at one radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightValues {
    pub a: f64,
    pub a_prime: f64,
    pub laplacian: f64,
}

impl MorawetzWeight {
    pub const DEFAULT_R0: f64 = 0.01;

    pub fn new(r0: f64) -> Result<Self> {
        if !(r0.is_finite() && r0 > 0.0) {
            return Err(Error::config(format!("r0 = {r0} must be positive")));
        }
        Ok(Self { r0 })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn eval(&self, r: f64) -> WeightValues {
        weight_eval(self, r)
    }

    /// `∇a(z) = a'(|z|) z/|z|`, zero at the origin.
    pub fn gradient(&self, z: [f64; 2]) -> [f64; 2] {
        let r = z[0].hypot(z[1]);
        if r == 0.0 {
            return [0.0, 0.0];
        }
        let s = weight_eval(self, r).a_prime / r;
        [s * z[0], s * z[1]]
    }
}

/// Evaluates the weight branches. At `r = 0` the values are the limits
/// `a = a' = 0` and `Δa = +∞`.
pub fn weight_eval(w: &MorawetzWeight, r: f64) -> WeightValues {
    let r0 = w.r0;
    if r <= 0.0 {
        return WeightValues { a: 0.0, a_prime: 0.0, laplacian: f64::INFINITY };
    }
    if r < r0 {
        let l = (r0 / r).ln();
        WeightValues {
            a: r * r / (2.0 * r0) * (1.0 + 0.5 * l),
            a_prime: 0.75 * r / r0 + 0.5 * r / r0 * l,
            laplacian: (1.0 + l) / r0,
        }
    } else {
        WeightValues { a: r - 0.5 * r0, a_prime: 1.0, laplacian: 1.0 / r }
    }
}
