//! JSON scenario files.
//!
//! ```json
//! {
//!   "params":  { "m": 1.0, "c": 0.5, "k": 4.0, "mu": 2.0 },
//!   "initial": { "x0": 1.0, "v0": 0.3 },
//!   "history": { "type": "constant", "a": 1.0, "value": 1.0 },
//!   "forcing": { "type": "none" },
//!   "grid":    { "t_end": 20.0, "dt": 0.001 }
//! }
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::model::{HistoryProfile, InitialState, OscillatorParams};
use crate::response::{Forcing, SampledSignal};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{field}: {message}")]
    Field { field: String, message: String },
}

fn field_error(prefix: &str, err: Error) -> ConfigError {
    match err {
        Error::InvalidParameter { name, reason } => ConfigError::Field {
            field: format!("{prefix}.{name}"),
            message: reason,
        },
        other => ConfigError::Field {
            field: prefix.to_string(),
            message: other.to_string(),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub m: f64,
    pub c: f64,
    pub k: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    pub x0: f64,
    pub v0: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum HistorySpec {
    #[default]
    None,
    Constant {
        a: f64,
        value: f64,
    },
    Sine {
        a: f64,
        amplitude: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    Polynomial {
        a: f64,
        coefficients: Vec<f64>,
    },
    Samples {
        a: f64,
        values: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dt: Option<f64>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ForcingSpec {
    #[default]
    None,
    Constant {
        value: f64,
    },
    Sine {
        amplitude: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    /// CSV file with header `t,f`; relative paths resolve against the config file.
    Samples {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t_end: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub params: ParamsSpec,
    #[serde(default)]
    pub initial: InitialSpec,
    #[serde(default)]
    pub history: HistorySpec,
    #[serde(default)]
    pub forcing: ForcingSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
}

/// A config with every module-level invariant checked.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub params: OscillatorParams,
    pub initial: InitialState,
    pub history: HistoryProfile,
    pub forcing: Forcing,
    pub grid: Option<GridSpec>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Reads and validates a config file.
    pub fn load(path: &Path) -> Result<Scenario, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_json(&text)?.validate(base)
    }

    pub fn validate(&self, base_dir: &Path) -> Result<Scenario, ConfigError> {
        let p = &self.params;
        let params = OscillatorParams::new(p.m, p.c, p.k, p.mu).map_err(|e| field_error("params", e))?;
        let initial = InitialState::new(self.initial.x0, self.initial.v0)
            .map_err(|e| field_error("initial", e))?;
        let history = match &self.history {
            HistorySpec::None => Ok(HistoryProfile::quiescent()),
            HistorySpec::Constant { a, value } => HistoryProfile::constant(*a, *value),
            HistorySpec::Sine {
                a,
                amplitude,
                omega,
                phase,
            } => HistoryProfile::sine(*a, *amplitude, *omega, *phase),
            HistorySpec::Polynomial { a, coefficients } => {
                HistoryProfile::polynomial(*a, coefficients.clone())
            }
            HistorySpec::Samples { a, values, dt: None } => HistoryProfile::samples(*a, values.clone()),
            HistorySpec::Samples {
                a,
                values,
                dt: Some(dt),
            } => HistoryProfile::sampled_with_spacing(*a, *dt, values.clone()),
        }
        .map_err(|e| field_error("history", e))?;
        let forcing = match &self.forcing {
            ForcingSpec::None => Forcing::None,
            ForcingSpec::Constant { value } => Forcing::Constant(finite("forcing.value", *value)?),
            ForcingSpec::Sine {
                amplitude,
                omega,
                phase,
            } => Forcing::Sine {
                amplitude: finite("forcing.amplitude", *amplitude)?,
                omega: finite("forcing.omega", *omega)?,
                phase: finite("forcing.phase", *phase)?,
            },
            ForcingSpec::Samples { path } => Forcing::Samples(read_signal(&base_dir.join(path))?),
        };
        if let Some(grid) = &self.grid {
            crate::response::grid_steps(grid.t_end, grid.dt).map_err(|e| field_error("grid", e))?;
        }
        Ok(Scenario {
            params,
            initial,
            history,
            forcing,
            grid: self.grid.clone(),
        })
    }
}

fn finite(field: &str, value: f64) -> Result<f64, ConfigError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ConfigError::Field {
            field: field.into(),
            message: format!("must be finite, got {value}"),
        })
    }
}

fn read_signal(path: &Path) -> Result<SampledSignal, ConfigError> {
    let bad = |message: String| ConfigError::Field {
        field: "forcing.path".into(),
        message: format!("{}: {message}", path.display()),
    };
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| bad(format!("missing column `{name}`")))
    };
    let (ti, fi) = (column("t")?, column("f")?);
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let parse = |i: usize| -> Result<f64, ConfigError> {
            record
                .get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| bad(format!("row {}: unreadable number", line + 2)))
        };
        times.push(parse(ti)?);
        values.push(parse(fi)?);
    }
    SampledSignal::new(times, values).map_err(|e| bad(e.to_string()))
}
