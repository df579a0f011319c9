//! Scenario documents: strict JSON, one experiment each.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use smoothlab_core::evolution::DEFAULT_H_LADDER;
use smoothlab_core::spectral::{DEFAULT_CAP, DEFAULT_TRUNCATION};
use smoothlab_core::{RegionParams, SpectralVector, SpectrumFamily};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ScenarioError {
    #[error("line {line}, column {column}, at `{path}`: {message}")]
    Parse {
        line: usize,
        column: usize,
        path: String,
        message: String,
    },
    #[error("unsupported schema version {0} (expected {SCHEMA_VERSION})")]
    Schema(u32),
    #[error("`{field}`: {message}")]
    Range { field: &'static str, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    pub name: String,
    pub spectrum: SpectrumFamily,
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Experiment {
    #[serde(alias = "CriterionSweep")]
    CriterionSweep {
        #[serde(default = "RegionParams::default_grid")]
        b_grid: Vec<RegionParams>,
        #[serde(default = "default_sweep_n")]
        n: usize,
    },
    #[serde(alias = "SmoothnessProbe")]
    SmoothnessProbe {
        vector: SpectralVector,
        t_grid: Vec<f64>,
        #[serde(default = "default_max_order")]
        max_order: u32,
        #[serde(default = "default_ladder")]
        h_ladder: Vec<f64>,
        #[serde(default = "default_truncation")]
        n: usize,
    },
    #[serde(alias = "Counterexample")]
    Counterexample {
        #[serde(default = "default_count")]
        count: usize,
        #[serde(default = "default_truncation")]
        scan_limit: usize,
        #[serde(default = "default_t_samples")]
        t_samples: Vec<f64>,
        #[serde(default = "default_cap")]
        cap: f64,
        #[serde(default = "default_truncation")]
        n: usize,
    },
    #[serde(alias = "RegionFigure")]
    RegionFigure {
        b: RegionParams,
        im_range: [f64; 2],
        #[serde(default = "default_samples")]
        count: usize,
    },
    #[serde(alias = "MildIdentity")]
    MildIdentity {
        vector: SpectralVector,
        t0: f64,
        t: f64,
        #[serde(default = "default_quad_steps")]
        quad_steps: Vec<usize>,
        #[serde(default = "default_truncation")]
        n: usize,
    },
}

fn default_sweep_n() -> usize {
    1000
}
fn default_max_order() -> u32 {
    4
}
fn default_ladder() -> Vec<f64> {
    DEFAULT_H_LADDER.to_vec()
}
fn default_truncation() -> usize {
    DEFAULT_TRUNCATION
}
fn default_count() -> usize {
    8
}
fn default_t_samples() -> Vec<f64> {
    vec![-2.0, -1.0, 1.0, 2.0]
}
fn default_cap() -> f64 {
    DEFAULT_CAP
}
fn default_samples() -> usize {
    256
}
fn default_quad_steps() -> Vec<usize> {
    (1..=8).map(|i| 1 << i).collect()
}

impl Experiment {
    pub fn type_name(&self) -> &'static str {
        match self {
            Experiment::CriterionSweep { .. } => "criterion-sweep",
            Experiment::SmoothnessProbe { .. } => "smoothness-probe",
            Experiment::Counterexample { .. } => "counterexample",
            Experiment::RegionFigure { .. } => "region-figure",
            Experiment::MildIdentity { .. } => "mild-identity",
        }
    }
}

fn range(field: &'static str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Range {
        field,
        message: message.into(),
    }
}

fn check(ok: bool, field: &'static str, message: &str) -> Result<(), ScenarioError> {
    if ok {
        Ok(())
    } else {
        Err(range(field, message))
    }
}

fn all_finite(xs: &[f64]) -> bool {
    xs.iter().all(|x| x.is_finite())
}

const MAX_TRUNCATION: usize = 10_000_000;
const MAX_ORDER: u32 = 8;

impl Scenario {
    /// Range checks beyond what the types enforce.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.schema != SCHEMA_VERSION {
            return Err(ScenarioError::Schema(self.schema));
        }
        check(!self.name.trim().is_empty(), "name", "must not be empty")?;
        let truncation = |n: usize| check((1..=MAX_TRUNCATION).contains(&n), "n", "must be in 1..=10000000");
        match &self.experiment {
            Experiment::CriterionSweep { b_grid, n } => {
                check(!b_grid.is_empty(), "b_grid", "must not be empty")?;
                truncation(*n)?;
            }
            Experiment::SmoothnessProbe {
                t_grid,
                max_order,
                h_ladder,
                n,
                ..
            } => {
                check(
                    !t_grid.is_empty() && all_finite(t_grid),
                    "t_grid",
                    "must be non-empty and finite",
                )?;
                check((1..=MAX_ORDER).contains(max_order), "max_order", "must be in 1..=8")?;
                check(
                    !h_ladder.is_empty() && h_ladder.iter().all(|h| h.is_finite() && *h > 0.0),
                    "h_ladder",
                    "steps must be finite and > 0",
                )?;
                check(
                    h_ladder.windows(2).all(|w| w[1] < w[0]),
                    "h_ladder",
                    "must be strictly decreasing",
                )?;
                truncation(*n)?;
            }
            Experiment::Counterexample {
                count,
                scan_limit,
                t_samples,
                cap,
                n,
            } => {
                check(*count >= 1, "count", "must be >= 1")?;
                check(
                    (1..=MAX_TRUNCATION).contains(scan_limit),
                    "scan_limit",
                    "must be in 1..=10000000",
                )?;
                check(all_finite(t_samples), "t_samples", "must be finite")?;
                check(
                    t_samples.iter().any(|&t| t < 0.0) && t_samples.iter().any(|&t| t > 0.0),
                    "t_samples",
                    "must contain both a negative and a positive time",
                )?;
                check(cap.is_finite() && *cap > 0.0, "cap", "must be finite and > 0")?;
                truncation(*n)?;
            }
            Experiment::RegionFigure { im_range, count, .. } => {
                check(
                    all_finite(im_range) && im_range[0] < im_range[1],
                    "im_range",
                    "must be finite with lo < hi",
                )?;
                check((2..=1_000_000).contains(count), "count", "must be in 2..=1000000")?;
            }
            Experiment::MildIdentity {
                t0, t, quad_steps, n, ..
            } => {
                check(t0.is_finite() && t.is_finite(), "t", "times must be finite")?;
                check(
                    !quad_steps.is_empty() && quad_steps.iter().all(|&q| q >= 2 && q % 2 == 0),
                    "quad_steps",
                    "must be even and >= 2",
                )?;
                truncation(*n)?;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}

/// Parses and validates a scenario document. Unknown keys are rejected.
pub fn parse_scenario(document: &str) -> Result<Scenario, ScenarioError> {
    let de = &mut serde_json::Deserializer::from_str(document);
    let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let message = inner.to_string();
        // serde_json appends its own position; keep only the message
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        ScenarioError::Parse {
            line: inner.line(),
            column: inner.column(),
            path,
            message,
        }
    })?;
    scenario.validate()?;
    Ok(scenario)
}
