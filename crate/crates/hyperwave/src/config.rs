//! JSON run configuration.
//!
//! Every field has a default, unknown keys are rejected, and
//! [`SimConfig::to_json`] writes the config with all defaults filled in, so
//! parsing its own output gives the same config back.

use hyperwave_core::evolve::Zeta;
use hyperwave_core::transform::{DEFAULT_LAMBDA_MAX, DEFAULT_NODES, DEFAULT_R_MAX};
use hyperwave_core::Dimension;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};

/// A config that failed to parse or validate. `field` is the dotted path of
/// the offending key where one is known.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ConfigError {
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError { field: Some(field.to_string()), message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    LinearDispersal,
    DefocusRadialScatter,
    FocusSmallData,
    FocusNegativeEnergy,
    MorawetzBudget,
    StrichartzRegion,
    PointwiseBound,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::LinearDispersal,
        Scenario::DefocusRadialScatter,
        Scenario::FocusSmallData,
        Scenario::FocusNegativeEnergy,
        Scenario::MorawetzBudget,
        Scenario::StrichartzRegion,
        Scenario::PointwiseBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::LinearDispersal => "linear_dispersal",
            Scenario::DefocusRadialScatter => "defocus_radial_scatter",
            Scenario::FocusSmallData => "focus_small_data",
            Scenario::FocusNegativeEnergy => "focus_negative_energy",
            Scenario::MorawetzBudget => "morawetz_budget",
            Scenario::StrichartzRegion => "strichartz_region",
            Scenario::PointwiseBound => "pointwise_bound",
        }
    }

    /// The sign of the nonlinearity the scenario is about. `None` when the
    /// scenario does not evolve anything.
    pub fn required_zeta(self) -> Option<Zeta> {
        match self {
            Scenario::LinearDispersal => Some(Zeta::Linear),
            Scenario::DefocusRadialScatter | Scenario::MorawetzBudget => Some(Zeta::Defocusing),
            Scenario::FocusSmallData | Scenario::FocusNegativeEnergy => Some(Zeta::Focusing),
            Scenario::StrichartzRegion | Scenario::PointwiseBound => None,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub r_max: f64,
    pub n_r: usize,
    pub lambda_max: f64,
    pub n_lambda: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { r_max: DEFAULT_R_MAX, n_r: DEFAULT_NODES, lambda_max: DEFAULT_LAMBDA_MAX, n_lambda: DEFAULT_NODES }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeConfig {
    pub h: f64,
    pub t_end: f64,
    pub callback_stride: usize,
    pub pullback_snapshots: usize,
}

impl Default for TimeConfig {
    fn default() -> Self {
        TimeConfig { h: 0.02, t_end: 40.0, callback_stride: 10, pullback_snapshots: 8 }
    }
}

/// A family of radial initial data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSpec {
    Zero,
    /// A·(g(r−r₀) + g(r+r₀))/(1 + g(2r₀)) with g(x) = e^{−x²/w²}.
    Gaussian {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default)]
        center: f64,
        #[serde(default = "one")]
        width: f64,
    },
    /// The cut-off profile at scale R.
    #[serde(rename = "f_R")]
    FR {
        #[serde(default = "one")]
        r: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// Inverse transform of A·e^{−(λ−λ₀)²/w²}.
    SpectralBump {
        #[serde(default = "two")]
        lambda0: f64,
        #[serde(default = "half")]
        width: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// A state snapshot; `data` takes its u, `velocity` its u_t.
    File {
        path: PathBuf,
    },
}

fn one() -> f64 {
    1.0
}
fn two() -> f64 {
    2.0
}
fn half() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub scenario: Scenario,
    pub n: u32,
    /// +1 focusing, −1 defocusing, 0 linear. Omitted: the scenario's sign.
    pub zeta: Option<i64>,
    pub grid: GridConfig,
    pub time: TimeConfig,
    pub data: DataSpec,
    pub velocity: DataSpec,
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Times at which to write state snapshots (taken at the first
    /// diagnostics point at or after each).
    pub snapshot_times: Vec<f64>,
    /// Binary plan file: loaded if present, written after a fresh build.
    pub plan_cache: Option<PathBuf>,
    /// Directory that relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            scenario: Scenario::DefocusRadialScatter,
            n: 3,
            zeta: None,
            grid: GridConfig::default(),
            time: TimeConfig::default(),
            data: DataSpec::Gaussian { amplitude: 1.0, center: 0.0, width: 1.0 },
            velocity: DataSpec::Zero,
            seed: 0,
            output_dir: PathBuf::from("hyperwave-out"),
            snapshot_times: Vec::new(),
            plan_cache: None,
            base_dir: PathBuf::new(),
        }
    }
}

/// Parses and validates `text`, resolving relative file paths against the
/// current directory.
pub fn parse_config(text: &str) -> Result<SimConfig, ConfigError> {
    parse_config_in(text, Path::new(""))
}

/// As [`parse_config`], resolving relative file paths against `base_dir`.
pub fn parse_config_in(text: &str, base_dir: &Path) -> Result<SimConfig, ConfigError> {
    let mut cfg: SimConfig = serde_json::from_str(text)
        .map_err(|e| ConfigError { field: unknown_field(&e.to_string()), message: e.to_string() })?;
    cfg.base_dir = base_dir.to_path_buf();
    cfg.normalize()?;
    Ok(cfg)
}

fn unknown_field(msg: &str) -> Option<String> {
    let rest = msg.strip_prefix("unknown field `")?;
    Some(rest[..rest.find('`')?].to_string())
}

impl SimConfig {
    pub fn dimension(&self) -> Dimension {
        Dimension::new(self.n).expect("validated")
    }

    pub fn zeta(&self) -> Zeta {
        Zeta::try_from(self.zeta.unwrap_or(-1)).expect("validated")
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }

    /// Pretty JSON with every default written out.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    /// Fills scenario-dependent defaults and checks every field.
    pub fn normalize(&mut self) -> Result<(), ConfigError> {
        if Dimension::new(self.n).is_err() {
            return Err(invalid("n", "n must be 3, 4, or 5"));
        }
        let zeta = match self.zeta {
            None => self.scenario.required_zeta().unwrap_or(Zeta::Defocusing),
            Some(z) => Zeta::try_from(z).map_err(|_| invalid("zeta", "zeta must be -1, 0, or 1"))?,
        };
        if let Some(req) = self.scenario.required_zeta() {
            if zeta != req {
                return Err(invalid("zeta", format!("scenario {} runs with zeta = {req}, not {zeta}", self.scenario)));
            }
        }
        self.zeta = Some(zeta.as_i64());

        let g = &self.grid;
        if !(g.r_max >= 10.0 && g.r_max.is_finite()) {
            return Err(invalid("grid.r_max", "grid.r_max must be at least 10"));
        }
        if !(g.lambda_max >= 16.0 && g.lambda_max.is_finite()) {
            return Err(invalid("grid.lambda_max", "grid.lambda_max must be at least 16"));
        }
        if g.n_r < 256 || g.n_lambda < 256 {
            let field = if g.n_r < 256 { "grid.n_r" } else { "grid.n_lambda" };
            return Err(invalid(field, format!("{field} must be at least 256")));
        }
        let t = &self.time;
        if !(t.h > 0.0 && t.h <= 0.1) {
            return Err(invalid("time.h", "time.h must lie in (0, 0.1]"));
        }
        if !(t.t_end > 0.0 && t.t_end.is_finite()) {
            return Err(invalid("time.t_end", "time.t_end must be positive"));
        }
        if t.callback_stride == 0 {
            return Err(invalid("time.callback_stride", "time.callback_stride must be positive"));
        }
        if self.snapshot_times.iter().any(|s| !s.is_finite()) {
            return Err(invalid("snapshot_times", "snapshot_times must be finite"));
        }
        for (field, spec) in [("data", &self.data), ("velocity", &self.velocity)] {
            self.check_data(field, spec)?;
        }
        Ok(())
    }

    fn check_data(&self, field: &str, spec: &DataSpec) -> Result<(), ConfigError> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(&format!("{field}.{name}"), format!("{field}.{name} must be positive")))
            }
        };
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(invalid(&format!("{field}.{name}"), format!("{field}.{name} must be finite")))
            }
        };
        match spec {
            DataSpec::Zero => Ok(()),
            DataSpec::Gaussian { amplitude, center, width } => {
                finite("amplitude", *amplitude)?;
                finite("center", *center)?;
                positive("width", *width)
            }
            DataSpec::FR { r, amplitude } => {
                finite("amplitude", *amplitude)?;
                positive("r", *r)
            }
            DataSpec::SpectralBump { lambda0, width, amplitude } => {
                finite("amplitude", *amplitude)?;
                finite("lambda0", *lambda0)?;
                positive("width", *width)
            }
            DataSpec::File { path } => {
                let full = self.resolve(path);
                if full.is_file() {
                    Ok(())
                } else {
                    Err(invalid(&format!("{field}.path"), format!("{field}.path: no such file {}", full.display())))
                }
            }
        }
    }
}
