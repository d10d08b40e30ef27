//! Sweep configuration: one JSON document, optionally layered over a preset.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use pmcs_core::weyl::MAX_POWER;
use pmcs_core::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;
use crate::presets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    A3,
    Squeeze,
    Quasiprob,
    Fidelity,
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepKind::A3 => "a3",
            SweepKind::Squeeze => "squeeze",
            SweepKind::Quasiprob => "quasiprob",
            SweepKind::Fidelity => "fidelity",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Paper,
    #[default]
    Oracle,
    Both,
}

impl Engine {
    pub fn paper(self) -> bool {
        matches!(self, Engine::Paper | Engine::Both)
    }

    pub fn oracle(self) -> bool {
        matches!(self, Engine::Oracle | Engine::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

/// `ζ = r e^{iθ}` over `r_steps` evenly spaced radii (endpoints included)
/// and the listed angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZetaGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub r_steps: usize,
    pub theta: Vec<f64>,
}

impl ZetaGrid {
    pub fn radii(&self) -> Vec<f64> {
        linspace(self.r_min, self.r_max, self.r_steps)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum GammaGrid {
    Polar { r_min: f64, r_max: f64, r_steps: usize, theta_min: f64, theta_max: f64, theta_steps: usize },
    Cartesian { x_min: f64, x_max: f64, x_steps: usize, y_min: f64, y_max: f64, y_steps: usize },
    Points { points: Vec<[f64; 2]> },
}

impl GammaGrid {
    /// Grid points in emission order (outer index first).
    pub fn points(&self) -> Vec<Complex64> {
        match self {
            GammaGrid::Polar { r_min, r_max, r_steps, theta_min, theta_max, theta_steps } => {
                let thetas = linspace(*theta_min, *theta_max, *theta_steps);
                linspace(*r_min, *r_max, *r_steps)
                    .into_iter()
                    .flat_map(|r| thetas.iter().map(move |&t| Complex64::from_polar(r, t)))
                    .collect()
            }
            GammaGrid::Cartesian { x_min, x_max, x_steps, y_min, y_max, y_steps } => {
                let ys = linspace(*y_min, *y_max, *y_steps);
                linspace(*x_min, *x_max, *x_steps)
                    .into_iter()
                    .flat_map(|x| ys.iter().map(move |&y| Complex64::new(x, y)))
                    .collect()
            }
            GammaGrid::Points { points } => points.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuasiGrid {
    pub s: f64,
    pub gamma: GammaGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<SweepKind>,
    #[serde(default)]
    pub engine: Engine,
    /// Values of μ as `[re, im]`.
    pub mu: Vec<[f64; 2]>,
    pub nu: Vec<[f64; 2]>,
    #[serde(rename = "N")]
    pub n: Vec<usize>,
    pub zeta_grid: ZetaGrid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quasi: Option<QuasiGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_override: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    #[serde(default)]
    pub format: Format,
}

pub(crate) fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect(),
    }
}

fn finite(x: f64) -> bool {
    x.is_finite()
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        let g = &self.zeta_grid;
        if !(finite(g.r_min) && finite(g.r_max)) || g.r_min < 0.0 {
            return bad(format!("zeta_grid.r_min must be finite and >= 0, got {}", g.r_min));
        }
        if g.r_max < g.r_min {
            return bad("zeta_grid.r_max must be >= r_min".into());
        }
        if g.r_steps < 1 {
            return bad("zeta_grid.r_steps must be >= 1".into());
        }
        if g.theta.iter().any(|t| !finite(*t)) {
            return bad("zeta_grid.theta must be finite".into());
        }
        if let Some(&n) = self.n.iter().find(|&&n| n > MAX_POWER) {
            return bad(format!("N = {n} exceeds the maximum {MAX_POWER}"));
        }
        if self.mu.iter().chain(&self.nu).flatten().any(|x| !finite(*x)) {
            return bad("mu and nu must be finite".into());
        }
        match (self.kind, &self.quasi) {
            (Some(SweepKind::Quasiprob), None) => return bad("quasiprob sweeps need a `quasi` section".into()),
            (_, Some(q)) if !finite(q.s) || q.s == 1.0 => return bad(format!("unsupported ordering s = {}", q.s)),
            _ => {}
        }
        if let Some(q) = &self.quasi {
            if q.gamma.points().iter().any(|z| !(finite(z.re) && finite(z.im))) {
                return bad("gamma grid must be finite".into());
            }
        }
        Ok(())
    }

    /// Builds the configuration for a subcommand from an optional preset
    /// and an optional JSON file whose fields override the preset's.
    pub fn load(kind: SweepKind, preset: Option<&str>, file: Option<&Path>) -> Result<Self, CliError> {
        let base = match preset {
            Some(name) => {
                let cfg = presets::preset(name)
                    .ok_or_else(|| CliError::Config(format!("unknown preset {name:?}; known: {}", presets::NAMES.join(", "))))?;
                if cfg.kind != Some(kind) {
                    return Err(CliError::Config(format!("preset {name} is a {} sweep, not {kind}", cfg.kind.unwrap())));
                }
                Some(serde_json::to_value(cfg).expect("presets serialize"))
            }
            None => None,
        };
        let overlay = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("reading {}: {e}", path.display())))?;
                Some(serde_json::from_str::<Value>(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?)
            }
            None => None,
        };
        let merged = match (base, overlay) {
            (Some(mut b), Some(o)) => {
                merge(&mut b, o);
                b
            }
            (Some(b), None) => b,
            (None, Some(o)) => o,
            (None, None) => return Err(CliError::Config("give --preset, --config, or both".into())),
        };
        let mut cfg: SweepConfig =
            serde_json::from_value(merged).map_err(|e| CliError::Config(format!("invalid configuration: {e}")))?;
        match cfg.kind {
            Some(k) if k != kind => {
                return Err(CliError::Config(format!("configuration is a {k} sweep, not {kind}")));
            }
            _ => cfg.kind = Some(kind),
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Recursive object merge; non-object values in `overlay` replace.
fn merge(base: &mut Value, overlay: Value) {
    match (base, overlay) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}
