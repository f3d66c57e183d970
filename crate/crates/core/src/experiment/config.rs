use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::data::InitialData;
use crate::error::{Error, Result};
use crate::morawetz::MorawetzWeight;
use crate::profile::{KAPPA, MAX_BUBBLES};
use crate::solver::SolverConfig;
use crate::spectral::{make_grid, Grid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Simulate,
    Resonant,
    ApproxScan,
    Morawetz,
    Profiles,
    Perturbation,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Simulate,
        ExperimentKind::Resonant,
        ExperimentKind::ApproxScan,
        ExperimentKind::Morawetz,
        ExperimentKind::Profiles,
        ExperimentKind::Perturbation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Simulate => "simulate",
            ExperimentKind::Resonant => "resonant",
            ExperimentKind::ApproxScan => "approx_scan",
            ExperimentKind::Morawetz => "morawetz",
            ExperimentKind::Profiles => "profiles",
            ExperimentKind::Perturbation => "perturbation",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ExperimentKind::Simulate => "split-step evolution with conservation and Strichartz diagnostics",
            ExperimentKind::Resonant => "resonant mode system evolved from the torus modes of the data",
            ExperimentKind::ApproxScan => "large-scale profile scan: waveguide flow against rescaled modes",
            ExperimentKind::Morawetz => "interaction Morawetz action and rigidity functional on [-T, T]",
            ExperimentKind::Profiles => "dyadic-cube scores and bubble extraction",
            ExperimentKind::Perturbation => "forced against unforced evolution from the same data",
        }
    }

    /// Section name carrying this experiment's own parameters.
    fn section(self) -> Option<&'static str> {
        match self {
            ExperimentKind::Simulate => None,
            other => Some(other.name()),
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridParams {
    pub box_length_x: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridParams {
    pub fn build(&self) -> Result<Grid> {
        make_grid(self.box_length_x, self.nx, self.ny)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonantParams {
    #[serde(default = "default_jmax")]
    pub jmax: usize,
}

impl Default for ResonantParams {
    fn default() -> Self {
        Self { jmax: default_jmax() }
    }
}

fn default_jmax() -> usize {
    4
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproxScanParams {
    #[serde(default = "default_lambdas")]
    pub lambdas: Vec<f64>,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default = "default_scan_jmax")]
    pub jmax: usize,
    #[serde(default = "default_scan_stride")]
    pub stride: usize,
}

impl Default for ApproxScanParams {
    fn default() -> Self {
        Self {
            lambdas: default_lambdas(),
            horizon: default_horizon(),
            jmax: default_scan_jmax(),
            stride: default_scan_stride(),
        }
    }
}

fn default_lambdas() -> Vec<f64> {
    vec![4.0, 8.0, 16.0]
}
fn default_horizon() -> f64 {
    5.0
}
fn default_scan_jmax() -> usize {
    2
}
fn default_scan_stride() -> usize {
    5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorawetzParams {
    #[serde(default = "default_r0")]
    pub r0: f64,
    /// Horizons `T` to summarize; defaults to `t_end/4, t_end/2, t_end`.
    #[serde(default)]
    pub horizons: Vec<f64>,
}

impl Default for MorawetzParams {
    fn default() -> Self {
        Self { r0: default_r0(), horizons: Vec::new() }
    }
}

fn default_r0() -> f64 {
    MorawetzWeight::DEFAULT_R0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfilesParams {
    #[serde(default = "default_max_bubbles")]
    pub max_bubbles: usize,
    #[serde(default = "default_window")]
    pub window: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
}

impl Default for ProfilesParams {
    fn default() -> Self {
        Self {
            max_bubbles: default_max_bubbles(),
            window: default_window(),
            samples: default_samples(),
            kappa: default_kappa(),
        }
    }
}

fn default_max_bubbles() -> usize {
    4
}
fn default_window() -> f64 {
    crate::profile::DEFAULT_WINDOW
}
fn default_samples() -> usize {
    crate::profile::DEFAULT_TIME_SAMPLES
}
fn default_kappa() -> f64 {
    KAPPA
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationParams {
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
}

impl Default for PerturbationParams {
    fn default() -> Self {
        Self { amplitude: default_amplitude() }
    }
}

fn default_amplitude() -> f64 {
    1e-3
}

/// A parsed experiment configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    /// Output directory; not part of the config hash.
    #[serde(default = "default_output")]
    pub output: PathBuf,
    /// Rescale the data to this `L²_x H¹_y` norm after building it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalize_l2h1: Option<f64>,
    pub grid: GridParams,
    #[serde(default)]
    pub solver: SolverConfig,
    pub data: InitialData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resonant: Option<ResonantParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approx_scan: Option<ApproxScanParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morawetz: Option<MorawetzParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profiles: Option<ProfilesParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<PerturbationParams>,
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

/// Validation failure pinned to a config key.
struct Invalid {
    section: Option<&'static str>,
    key: &'static str,
    error: Error,
}

fn at<T>(section: Option<&'static str>, key: &'static str, r: Result<T>) -> std::result::Result<T, Invalid> {
    r.map_err(|error| Invalid { section, key, error })
}

fn check(ok: bool, section: Option<&'static str>, key: &'static str, msg: String) -> std::result::Result<(), Invalid> {
    if ok {
        Ok(())
    } else {
        Err(Invalid { section, key, error: Error::Config(msg) })
    }
}

/// 1-based line of `key` inside `[section]` (or the top level), if present.
fn locate(source: &str, section: Option<&str>, key: &str) -> Option<usize> {
    let mut current: Option<String> = None;
    for (i, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('[') {
            let name = line.trim_matches(|c| c == '[' || c == ']').trim();
            current = Some(name.to_string());
            continue;
        }
        let in_section = match (section, current.as_deref()) {
            (None, None) => true,
            (Some(s), Some(c)) => s == c,
            _ => false,
        };
        if !in_section {
            continue;
        }
        if let Some(rest) = line.strip_prefix(key) {
            if rest.trim_start().starts_with('=') {
                return Some(i + 1);
            }
        }
    }
    match section {
        Some(s) => source
            .lines()
            .position(|l| l.trim().trim_matches(|c| c == '[' || c == ']').trim() == s)
            .map(|i| i + 1),
        None => None,
    }
}

fn line_of_offset(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())].matches('\n').count() + 1
}

impl ExperimentConfig {
    /// Parses and validates TOML source. Errors name the offending line.
    pub fn from_toml_str(source: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(source).map_err(|e| {
            let msg = e.message().trim().to_string();
            match e.span() {
                Some(span) => Error::Config(format!("line {}: {msg}", line_of_offset(source, span.start))),
                None => Error::Config(msg),
            }
        })?;
        cfg.validate_inner().map_err(|inv| {
            let msg = match inv.error {
                Error::Config(m) | Error::Usage(m) => m,
                other => other.to_string(),
            };
            let key = match inv.section {
                Some(s) => format!("{s}.{}", inv.key),
                None => inv.key.to_string(),
            };
            match locate(source, inv.section, inv.key) {
                Some(line) => Error::Config(format!("line {line}: {key}: {msg}")),
                None => Error::Config(format!("{key}: {msg}")),
            }
        })?;
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let source = std::fs::read_to_string(path)?;
        Self::from_toml_str(&source)
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_inner().map_err(|inv| inv.error)
    }

    fn validate_inner(&self) -> std::result::Result<(), Invalid> {
        let grid = at(Some("grid"), "nx", self.grid.build())?;
        at(Some("solver"), "dt", self.solver.validate())?;
        at(Some("data"), "family", self.data.validate())?;
        if let Some(n) = self.normalize_l2h1 {
            check(n.is_finite() && n > 0.0, None, "normalize_l2h1", format!("must be positive, got {n}"))?;
        }
        let sections: [(&'static str, bool); 5] = [
            ("resonant", self.resonant.is_some()),
            ("approx_scan", self.approx_scan.is_some()),
            ("morawetz", self.morawetz.is_some()),
            ("profiles", self.profiles.is_some()),
            ("perturbation", self.perturbation.is_some()),
        ];
        for (name, present) in sections {
            check(
                !present || self.experiment.section() == Some(name),
                Some(name),
                "section",
                format!("section [{name}] does not apply to experiment {}", self.experiment),
            )?;
        }
        match self.experiment {
            ExperimentKind::Simulate => {}
            ExperimentKind::Resonant => {
                let p = self.resonant_params();
                check(
                    (1..=16).contains(&p.jmax),
                    Some("resonant"),
                    "jmax",
                    format!("jmax = {} must lie in [1, 16]", p.jmax),
                )?;
                check(
                    grid.ny() > 2 * p.jmax,
                    Some("resonant"),
                    "jmax",
                    format!("jmax = {} needs ny > {}", p.jmax, 2 * p.jmax),
                )?;
            }
            ExperimentKind::ApproxScan => {
                let p = self.approx_scan_params();
                let s = Some("approx_scan");
                check(!p.lambdas.is_empty(), s, "lambdas", "must not be empty".into())?;
                check(
                    p.lambdas.iter().all(|l| l.is_finite() && *l >= 1.0),
                    s,
                    "lambdas",
                    "every lambda must be at least 1".into(),
                )?;
                check(p.lambdas.windows(2).all(|w| w[1] > w[0]), s, "lambdas", "must be strictly increasing".into())?;
                check(p.horizon.is_finite() && p.horizon > 0.0, s, "horizon", "must be positive".into())?;
                check(p.stride >= 1, s, "stride", "must be at least 1".into())?;
                check(
                    (1..=8).contains(&p.jmax) && grid.ny() > 2 * p.jmax,
                    s,
                    "jmax",
                    format!("jmax = {} must lie in [1, 8] with ny > 2 jmax", p.jmax),
                )?;
            }
            ExperimentKind::Morawetz => {
                let p = self.morawetz_params();
                let s = Some("morawetz");
                at(s, "r0", MorawetzWeight::new(p.r0))?;
                check(
                    p.horizons.iter().all(|h| h.is_finite() && *h > 0.0 && *h <= self.solver.t_end),
                    s,
                    "horizons",
                    format!("horizons must lie in (0, t_end = {}]", self.solver.t_end),
                )?;
                check(self.solver.keep_slices, Some("solver"), "keep_slices", "morawetz needs stored slices".into())?;
            }
            ExperimentKind::Profiles => {
                let p = self.profiles_params();
                let s = Some("profiles");
                check(
                    (1..=MAX_BUBBLES).contains(&p.max_bubbles),
                    s,
                    "max_bubbles",
                    format!("max_bubbles = {} must lie in [1, {MAX_BUBBLES}]", p.max_bubbles),
                )?;
                at(s, "window", crate::profile::TimeWindow::new(p.window, p.samples))?;
                check(p.kappa.is_finite() && p.kappa > 0.0, s, "kappa", "must be positive".into())?;
                at(Some("grid"), "box_length_x", crate::profile::DyadicLattice::of(&grid))?;
            }
            ExperimentKind::Perturbation => {
                let p = self.perturbation_params();
                check(
                    p.amplitude.is_finite() && p.amplitude >= 0.0,
                    Some("perturbation"),
                    "amplitude",
                    "must be finite and non-negative".into(),
                )?;
            }
        }
        Ok(())
    }

    pub fn resonant_params(&self) -> ResonantParams {
        self.resonant.clone().unwrap_or_default()
    }

    pub fn approx_scan_params(&self) -> ApproxScanParams {
        self.approx_scan.clone().unwrap_or_default()
    }

    pub fn morawetz_params(&self) -> MorawetzParams {
        self.morawetz.clone().unwrap_or_default()
    }

    pub fn profiles_params(&self) -> ProfilesParams {
        self.profiles.clone().unwrap_or_default()
    }

    pub fn perturbation_params(&self) -> PerturbationParams {
        self.perturbation.clone().unwrap_or_default()
    }

    /// SHA-256 of the canonical JSON form, with the output path cleared.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output = PathBuf::new();
        let json = serde_json::to_string(&canonical).expect("config serializes");
        Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}
