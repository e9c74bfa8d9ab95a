//! Run configuration: defaults per command, optional JSON file, flag overrides.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use entangle_core::estimation::DEFAULT_ENDPOINT_MARGIN;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Upper bound on grid length, to keep typos like `0:1:1e-12` from running
/// forever.
const MAX_GRID_POINTS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridSpec {
    pub const MONOTONES: GridSpec = GridSpec {
        start: 0.0,
        stop: 1.0,
        step: 0.01,
    };
    pub const ESTIMATION: GridSpec = GridSpec {
        start: 0.001,
        stop: 0.999,
        step: 0.001,
    };

    pub fn validate(&self) -> CliResult<()> {
        let GridSpec { start, stop, step } = *self;
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(CliError::domain("grid bounds must be finite"));
        }
        if !(0.0 <= start && start < stop && stop <= 1.0) {
            return Err(CliError::domain(format!(
                "grid needs 0 <= start < stop <= 1, got {start}:{stop}"
            )));
        }
        if step <= 0.0 {
            return Err(CliError::domain(format!(
                "grid step {step} must be positive"
            )));
        }
        if (stop - start) / step > MAX_GRID_POINTS as f64 {
            return Err(CliError::domain(format!(
                "grid {start}:{stop}:{step} has more than {MAX_GRID_POINTS} points"
            )));
        }
        Ok(())
    }

    /// Grid points `start + i step` up to `stop`, rounded to 1e-12 so that
    /// decimal steps land on their decimal values.
    pub fn points(&self) -> CliResult<Vec<f64>> {
        self.validate()?;
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        Ok((0..=count)
            .map(|i| round_grid(self.start + i as f64 * self.step))
            .filter(|&x| x <= self.stop)
            .collect())
    }
}

fn round_grid(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

impl FromStr for GridSpec {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts[..] else {
            return Err(CliError::domain(format!(
                "grid '{s}' is not start:stop:step"
            )));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::domain(format!("bad number '{t}' in grid '{s}'")))
        };
        let g = GridSpec {
            start: num(a)?,
            stop: num(b)?,
            step: num(c)?,
        };
        g.validate()?;
        Ok(g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        })
    }
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(CliError::domain(format!(
                "unknown format '{other}' (expected csv, json or svg)"
            ))),
        }
    }
}

pub fn parse_formats(s: &str) -> CliResult<BTreeSet<Format>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect()
}

pub fn parse_orders(s: &str) -> CliResult<Vec<u32>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| CliError::domain(format!("bad order '{t}'")))
        })
        .collect()
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct RunConfig {
    pub lambda_grid: GridSpec,
    pub orders: Vec<u32>,
    pub delta: f64,
    pub output_dir: PathBuf,
    pub formats: BTreeSet<Format>,
    pub endpoint_margin: f64,
}

/// One layer of settings: a `--config` file or the command-line flags.
/// Unset fields fall through to the layer below.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigFile {
    pub lambda_grid: Option<GridSpec>,
    pub orders: Option<Vec<u32>>,
    pub delta: Option<f64>,
    pub output_dir: Option<PathBuf>,
    pub formats: Option<BTreeSet<Format>>,
    pub endpoint_margin: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::domain(format!("config {}: {e}", path.display())))
    }
}

impl RunConfig {
    pub fn defaults(grid: GridSpec, formats: &[Format]) -> Self {
        RunConfig {
            lambda_grid: grid,
            orders: (1..=5).collect(),
            delta: 1.0,
            output_dir: PathBuf::from("."),
            formats: formats.iter().copied().collect(),
            endpoint_margin: DEFAULT_ENDPOINT_MARGIN,
        }
    }

    /// Layers the file over `self`, then the command-line flags over both.
    pub fn resolve(mut self, file: Option<ConfigFile>, flags: ConfigFile) -> CliResult<Self> {
        for layer in file.into_iter().chain([flags]) {
            if let Some(g) = layer.lambda_grid {
                self.lambda_grid = g;
            }
            if let Some(o) = layer.orders {
                self.orders = o;
            }
            if let Some(d) = layer.delta {
                self.delta = d;
            }
            if let Some(p) = layer.output_dir {
                self.output_dir = p;
            }
            if let Some(f) = layer.formats {
                self.formats = f;
            }
            if let Some(m) = layer.endpoint_margin {
                self.endpoint_margin = m;
            }
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> CliResult<()> {
        self.lambda_grid.validate()?;
        if self.orders.is_empty() {
            return Err(CliError::domain("orders must not be empty"));
        }
        if self.orders.contains(&0) {
            return Err(CliError::domain("orders must be >= 1"));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(CliError::domain(format!(
                "delta {} must be positive",
                self.delta
            )));
        }
        if !(0.0..0.25).contains(&self.endpoint_margin) {
            return Err(CliError::domain(format!(
                "endpoint margin {} must lie in [0, 0.25)",
                self.endpoint_margin
            )));
        }
        if self.formats.is_empty() {
            return Err(CliError::domain("no output format selected"));
        }
        Ok(())
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    /// Grid points on the canonical branch `(0, 1/2]`, keeping `margin`
    /// away from `0` and `1/2` where the estimation integrands blow up.
    pub fn branch_points(&self) -> CliResult<Vec<f64>> {
        let m = self.endpoint_margin;
        let pts: Vec<f64> = self
            .lambda_grid
            .points()?
            .into_iter()
            .filter(|&l| l > 0.0 && l >= m - 1e-12 && l <= 0.5 - m + 1e-12)
            .filter(|&l| m > 0.0 || l < 0.5)
            .collect();
        if pts.is_empty() {
            return Err(CliError::Numerical(
                "no grid point left on the branch (0, 1/2) after the endpoint margin".into(),
            ));
        }
        Ok(pts)
    }
}
