use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::DEFAULT_EPS0;

/// Time-integration parameters shared by the waveguide and mode solvers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    /// Record a slice/diagnostic every `slice_stride` steps.
    #[serde(default = "default_stride")]
    pub slice_stride: usize,
    #[serde(default)]
    pub dealias_on: bool,
    #[serde(default = "default_eps0")]
    pub eps0: f64,
    /// Keep the recorded fields in memory (diagnostics are always kept).
    #[serde(default = "default_keep")]
    pub keep_slices: bool,
}

fn default_dt() -> f64 {
    0.01
}
fn default_t_end() -> f64 {
    40.0
}
fn default_stride() -> usize {
    10
}
fn default_eps0() -> f64 {
    DEFAULT_EPS0
}
fn default_keep() -> bool {
    true
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt: default_dt(),
            t_end: default_t_end(),
            slice_stride: default_stride(),
            dealias_on: false,
            eps0: default_eps0(),
            keep_slices: true,
        }
    }
}

impl SolverConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        Self { dt, t_end, ..Self::default() }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.slice_stride = stride;
        self
    }

    pub fn with_dealias(mut self, on: bool) -> Self {
        self.dealias_on = on;
        self
    }

    pub fn without_slices(mut self) -> Self {
        self.keep_slices = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0 && self.dt <= 0.1) {
            return Err(Error::config(format!("dt = {} must lie in (0, 0.1]", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::config(format!("t_end = {} must be positive", self.t_end)));
        }
        if self.t_end / self.dt > u32::MAX as f64 {
            return Err(Error::config("t_end / dt does not fit in a 32-bit step count"));
        }
        if self.slice_stride == 0 {
            return Err(Error::config("slice_stride must be at least 1"));
        }
        if !(self.eps0 > 0.0 && self.eps0 < 0.5) {
            return Err(Error::config(format!("eps0 = {} must lie in (0, 0.5)", self.eps0)));
        }
        Ok(())
    }

    /// Number of steps, `round(t_end / dt)`; the run ends at `n_steps · dt`.
    pub fn n_steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    /// Sobolev index `1 - ε₀` of the scattering norm.
    pub fn scattering_index(&self) -> f64 {
        1.0 - self.eps0
    }
}
