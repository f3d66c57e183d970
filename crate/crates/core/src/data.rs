//! Named analytic families of initial data.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{norm_lx2_hy1, Field, Grid, Representation};

/// `A e^{-|x-c|²/(2w²)} e^{ix·ξ} (1 + b cos(j y))`.
pub fn gaussian_trig(
    grid: &Grid,
    amplitude: f64,
    width: f64,
    center: [f64; 2],
    xi: [f64; 2],
    y_coeff: f64,
    y_mode: i64,
) -> Field {
    Field::from_fn(grid, |x1, x2, y| {
        let d1 = x1 - center[0];
        let d2 = x2 - center[1];
        let envelope = amplitude * (-(d1 * d1 + d2 * d2) / (2.0 * width * width)).exp();
        let profile = 1.0 + y_coeff * (y_mode as f64 * y).cos();
        Complex64::from_polar(envelope * profile, xi[0] * x1 + xi[1] * x2)
    })
}

/// One term of a synthetic bubble sum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BubbleSpec {
    pub lambda: f64,
    #[serde(default)]
    pub xi: [f64; 2],
    #[serde(default)]
    pub center: [f64; 2],
}

/// `Σ (1/λ) φ((x - c)/λ, y) e^{ix·ξ}` with
/// `φ(x, y) = e^{-|x|²/(2w²)} (1 + b cos y)`.
pub fn bubble_sum(grid: &Grid, bubbles: &[BubbleSpec], profile_width: f64, y_coeff: f64) -> Field {
    let mut out = Field::zeros(grid, Representation::Physical);
    for b in bubbles {
        let term = gaussian_trig(grid, 1.0 / b.lambda, profile_width * b.lambda, b.center, b.xi, y_coeff, 1);
        out = out.add(&term).expect("same grid");
    }
    out
}

/// Sum of `bumps` Gaussians with random centers, widths, momenta, phases
/// and low torus modes. Deterministic in `seed`.
pub fn random_smooth(grid: &Grid, seed: u64, bumps: usize, spread: f64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let specs: Vec<_> = (0..bumps)
        .map(|_| {
            let c = [rng.gen_range(-spread..spread), rng.gen_range(-spread..spread)];
            let w = rng.gen_range(1.2..2.2);
            let xi = [rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)];
            let amp = Complex64::from_polar(rng.gen_range(0.3..1.0), rng.gen_range(0.0..std::f64::consts::TAU));
            let j = rng.gen_range(0..=2i64);
            let b = rng.gen_range(0.0..0.6);
            let y_phase = rng.gen_range(0.0..std::f64::consts::TAU);
            (c, w, xi, amp, j, b, y_phase)
        })
        .collect();
    Field::from_fn(grid, |x1, x2, y| {
        specs
            .iter()
            .map(|&(c, w, xi, amp, j, b, yp)| {
                let d1 = x1 - c[0];
                let d2 = x2 - c[1];
                let env = (-(d1 * d1 + d2 * d2) / (2.0 * w * w)).exp();
                amp * env
                    * (1.0 + b * (j as f64 * y + yp).cos())
                    * Complex64::from_polar(1.0, xi[0] * (x1 - c[0]) + xi[1] * (x2 - c[1]))
            })
            .sum()
    })
}

/// Initial-data family as it appears in experiment configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    Zero,
    Constant {
        re: f64,
        #[serde(default)]
        im: f64,
    },
    SingleMode {
        amplitude: f64,
        k1: i64,
        k2: i64,
        j: i64,
    },
    GaussianTrig {
        amplitude: f64,
        width: f64,
        #[serde(default)]
        center: [f64; 2],
        #[serde(default)]
        xi: [f64; 2],
        #[serde(default)]
        y_coeff: f64,
        #[serde(default = "default_y_mode")]
        y_mode: i64,
    },
    Bubbles {
        bubbles: Vec<BubbleSpec>,
        #[serde(default = "default_profile_width")]
        profile_width: f64,
        #[serde(default = "default_bubble_y_coeff")]
        y_coeff: f64,
    },
    RandomSmooth {
        #[serde(default = "default_bumps")]
        bumps: usize,
        #[serde(default = "default_spread")]
        spread: f64,
    },
}

fn default_y_mode() -> i64 {
    1
}

fn default_profile_width() -> f64 {
    4.0
}

fn default_bubble_y_coeff() -> f64 {
    0.3
}

fn default_bumps() -> usize {
    3
}

fn default_spread() -> f64 {
    4.0
}

impl InitialData {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(format!("{name} must be positive, got {v}")))
            }
        };
        match self {
            InitialData::GaussianTrig { width, amplitude, .. } => {
                positive("width", *width)?;
                if !amplitude.is_finite() {
                    return Err(Error::config("amplitude must be finite"));
                }
            }
            InitialData::RandomSmooth { bumps, spread } => {
                if *bumps == 0 || *bumps > 16 {
                    return Err(Error::config("bumps must be in [1, 16]"));
                }
                positive("spread", *spread)?;
            }
            InitialData::Bubbles { bubbles, profile_width, y_coeff } => {
                if bubbles.is_empty() || bubbles.len() > 8 {
                    return Err(Error::config("bubbles must list between 1 and 8 entries"));
                }
                positive("profile_width", *profile_width)?;
                for b in bubbles {
                    positive("lambda", b.lambda)?;
                    if !b.xi.iter().chain(&b.center).all(|v| v.is_finite()) {
                        return Err(Error::config("bubble xi and center must be finite"));
                    }
                }
                if !y_coeff.is_finite() {
                    return Err(Error::config("y_coeff must be finite"));
                }
            }
            InitialData::Constant { re, im } => {
                if !(re.is_finite() && im.is_finite()) {
                    return Err(Error::config("constant must be finite"));
                }
            }
            InitialData::SingleMode { amplitude, .. } => {
                if !amplitude.is_finite() {
                    return Err(Error::config("amplitude must be finite"));
                }
            }
            InitialData::Zero => {}
        }
        Ok(())
    }

    pub fn build(&self, grid: &Grid, seed: u64) -> Field {
        if let InitialData::Bubbles { bubbles, profile_width, y_coeff } = self {
            return bubble_sum(grid, bubbles, *profile_width, *y_coeff);
        }
        match *self {
            InitialData::Zero => Field::zeros(grid, Representation::Physical),
            InitialData::Constant { re, im } => Field::from_fn(grid, |_, _, _| Complex64::new(re, im)),
            InitialData::SingleMode { amplitude, k1, k2, j } => {
                Field::plane_wave(grid, Complex64::new(amplitude, 0.0), k1, k2, j)
            }
            InitialData::GaussianTrig { amplitude, width, center, xi, y_coeff, y_mode } => {
                gaussian_trig(grid, amplitude, width, center, xi, y_coeff, y_mode)
            }
            InitialData::RandomSmooth { bumps, spread } => random_smooth(grid, seed, bumps, spread),
            InitialData::Bubbles { .. } => unreachable!(),
        }
    }
}

/// Rescales `f` so that `‖f‖_{L²_x H¹_y} = target`. Zero data is returned unchanged.
pub fn normalize_lx2_hy1(f: Field, target: f64) -> Field {
    let n = norm_lx2_hy1(&f);
    if n == 0.0 {
        f
    } else {
        f.scaled(Complex64::new(target / n, 0.0))
    }
}
