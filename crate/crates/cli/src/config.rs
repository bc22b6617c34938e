//! Sweep configuration: a TOML file, command-line overrides, and validation.
//!
//! ```toml
//! mode = "fidelity-damped"
//! q = [0]
//! alpha = [1.0, 0.5, 0.1]
//! n_max = 100
//! output = "damped.csv"
//!
//! [grid]
//! xi = 30.0
//! phi = "pi/2"
//! gamma_t = "0:2:9"
//! ```

use serde::Deserialize;
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;

pub const DEFAULT_N_MAX: usize = paircat_core::DEFAULT_N_MAX;
pub const DEFAULT_K_MAX: usize = paircat_core::DEFAULT_K_MAX;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{field}: {message}")]
    Field {
        field: &'static str,
        message: String,
    },
}

fn field_err(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Entanglement,
    Witness,
    Fidelity,
    FidelityDamped,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Entanglement => "entanglement",
            Mode::Witness => "witness",
            Mode::Fidelity => "fidelity",
            Mode::FidelityDamped => "fidelity-damped",
        })
    }
}

/// Parses `"1.5"`, `"pi"`, `"-pi/2"`, `"3pi/4"`, `"2*pi"`.
pub fn parse_value(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let bad = || format!("cannot parse {s:?} as a number");
    let Some(at) = s.find("pi") else {
        return s.parse::<f64>().map_err(|_| bad());
    };
    let coeff = s[..at].trim().trim_end_matches('*').trim();
    let coeff = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let rest = s[at + 2..].trim();
    let div = match rest.strip_prefix('/') {
        Some(d) => d.trim().parse::<f64>().map_err(|_| bad())?,
        None if rest.is_empty() => 1.0,
        None => return Err(bad()),
    };
    Ok(coeff * PI / div)
}

/// `steps` evenly spaced points from `start` to `stop`, both included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Grid {
    pub fn point(x: f64) -> Self {
        Self {
            start: x,
            stop: x,
            steps: 1,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + h * i as f64
                }
            })
            .collect()
    }

    fn validate(&self, field: &'static str) -> Result<(), ConfigError> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(field_err(field, "bounds must be finite"));
        }
        if self.steps < 1 {
            return Err(field_err(field, "steps must be >= 1"));
        }
        if self.start > self.stop {
            return Err(field_err(
                field,
                format!("start {} exceeds stop {}", self.start, self.stop),
            ));
        }
        if self.steps == 1 && self.start != self.stop {
            return Err(field_err(field, "a single step needs start = stop"));
        }
        Ok(())
    }
}

impl FromStr for Grid {
    type Err = String;

    /// `a:b:n` or a single value.
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [x] => Ok(Grid::point(parse_value(x)?)),
            [a, b, n] => Ok(Grid {
                start: parse_value(a)?,
                stop: parse_value(b)?,
                steps: n
                    .trim()
                    .parse()
                    .map_err(|_| format!("step count {n:?} is not a nonnegative integer"))?,
            }),
            _ => Err(format!("expected a:b:n or a single value, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawGrid {
    Value(f64),
    Text(String),
    Table { start: f64, stop: f64, steps: usize },
}

impl RawGrid {
    fn resolve(self, field: &'static str) -> Result<Grid, ConfigError> {
        match self {
            RawGrid::Value(x) => Ok(Grid::point(x)),
            RawGrid::Text(s) => s.parse().map_err(|m: String| field_err(field, m)),
            RawGrid::Table { start, stop, steps } => Ok(Grid { start, stop, steps }),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrids {
    xi: Option<RawGrid>,
    phi: Option<RawGrid>,
    d: Option<RawGrid>,
    gamma_t: Option<RawGrid>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: Option<Mode>,
    q: Option<Vec<usize>>,
    alpha: Option<Vec<f64>>,
    n_max: Option<usize>,
    k_max: Option<usize>,
    output: Option<PathBuf>,
    #[serde(default)]
    grid: RawGrids,
}

/// Values given on the command line; each one replaces the file's.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub xi: Option<Grid>,
    pub phi: Option<Grid>,
    pub d: Option<Grid>,
    pub gamma_t: Option<Grid>,
    pub q: Vec<usize>,
    pub alpha: Vec<f64>,
    pub n_max: Option<usize>,
    pub k_max: Option<usize>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mode: Mode,
    pub xi: Grid,
    pub phi: Grid,
    /// Degree of damping for entanglement and witness sweeps.
    pub d: Grid,
    pub gamma_t: Grid,
    pub q: Vec<usize>,
    pub alpha: Vec<f64>,
    pub n_max: usize,
    pub k_max: usize,
    pub output: Option<PathBuf>,
}

/// Subcommand the user invoked; `fidelity` covers both fidelity modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Entanglement,
    Witness,
    Fidelity,
}

impl SweepConfig {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self, ConfigError> {
        let raw = parse_raw(text, path)?;
        let mode = raw.mode.ok_or_else(|| field_err("mode", "missing"))?;
        build(mode, raw, Overrides::default())
    }

    /// Merges an optional config file with command-line values.
    pub fn resolve(
        command: Command,
        file: Option<&Path>,
        flags: Overrides,
    ) -> Result<Self, ConfigError> {
        let raw = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
                    path: path.to_path_buf(),
                    source,
                })?;
                parse_raw(&text, path)?
            }
            None => RawConfig::default(),
        };
        let mode = match (command, raw.mode) {
            (Command::Entanglement, None | Some(Mode::Entanglement)) => Mode::Entanglement,
            (Command::Witness, None | Some(Mode::Witness)) => Mode::Witness,
            (Command::Fidelity, Some(Mode::FidelityDamped)) => Mode::FidelityDamped,
            (Command::Fidelity, None | Some(Mode::Fidelity)) => {
                if flags.gamma_t.is_some() {
                    Mode::FidelityDamped
                } else {
                    Mode::Fidelity
                }
            }
            (_, Some(m)) => {
                return Err(field_err(
                    "mode",
                    format!("config file selects {m}, which this subcommand cannot run"),
                ))
            }
        };
        build(mode, raw, flags)
    }
}

fn parse_raw(text: &str, path: &Path) -> Result<RawConfig, ConfigError> {
    toml::from_str(text).map_err(|e| ConfigError::Parse {
        path: path.to_path_buf(),
        message: e.to_string().trim_end().to_string(),
    })
}

fn grid(
    flag: Option<Grid>,
    file: Option<RawGrid>,
    field: &'static str,
    default: Option<Grid>,
) -> Result<Grid, ConfigError> {
    let g = match (flag, file) {
        (Some(g), _) => g,
        (None, Some(raw)) => raw.resolve(field)?,
        (None, None) => default.ok_or_else(|| field_err(field, "missing"))?,
    };
    g.validate(field)?;
    Ok(g)
}

fn build(mode: Mode, raw: RawConfig, flags: Overrides) -> Result<SweepConfig, ConfigError> {
    let xi = grid(flags.xi, raw.grid.xi, "xi", None)?;
    if xi.start < 0.0 {
        return Err(field_err("xi", "|xi| must be >= 0"));
    }
    let phi = grid(flags.phi, raw.grid.phi, "phi", None)?;
    let d = grid(flags.d, raw.grid.d, "d", Some(Grid::point(0.0)))?;
    if d.start < 0.0 {
        return Err(field_err("d", "degree of damping must be >= 0"));
    }
    let gamma_t = grid(
        flags.gamma_t,
        raw.grid.gamma_t,
        "gamma_t",
        Some(Grid::point(0.0)),
    )?;
    if gamma_t.start < 0.0 {
        return Err(field_err("gamma_t", "must be >= 0"));
    }
    let q = if flags.q.is_empty() {
        raw.q.unwrap_or_else(|| vec![0])
    } else {
        flags.q
    };
    if q.is_empty() {
        return Err(field_err("q", "needs at least one value"));
    }
    let alpha = if flags.alpha.is_empty() {
        raw.alpha.unwrap_or_default()
    } else {
        flags.alpha
    };
    if matches!(mode, Mode::Fidelity | Mode::FidelityDamped) && alpha.is_empty() {
        return Err(field_err(
            "alpha",
            "fidelity sweeps need at least one value",
        ));
    }
    if let Some(a) = alpha.iter().find(|a| !a.is_finite()) {
        return Err(field_err("alpha", format!("{a} is not finite")));
    }
    let n_max = flags.n_max.or(raw.n_max).unwrap_or(DEFAULT_N_MAX);
    if n_max < 1 {
        return Err(field_err("n_max", "must be >= 1"));
    }
    let k_max = flags.k_max.or(raw.k_max).unwrap_or(DEFAULT_K_MAX);
    Ok(SweepConfig {
        mode,
        xi,
        phi,
        d,
        gamma_t,
        q,
        alpha,
        n_max,
        k_max,
        output: flags.output.or(raw.output),
    })
}
