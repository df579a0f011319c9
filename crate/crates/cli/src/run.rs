//! Dispatch of scenarios to the core operations and output assembly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use smoothlab_core::evolution::{mild_identity_residual, reports_csv, smoothness_probe};
use smoothlab_core::forge::{forge, ForgeOutcome};
use smoothlab_core::region::{
    boundary_csv, criterion_from_scans, exceptional_set, format_float, region_boundary_samples,
};
use smoothlab_core::{DiagonalOperator, Error as CoreError};

use crate::record::{input_digest, sha256_hex, OutputFile, RunRecord, TOOL_VERSION};
use crate::scenario::{parse_scenario, Experiment, Scenario, ScenarioError};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("scenario: {0}")]
    Scenario(#[from] ScenarioError),
    #[error("i/o on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Files produced by one experiment, in write order, plus the summary that
/// goes into the run record.
struct Artifacts {
    files: Vec<(&'static str, String)>,
    outcome: BTreeMap<String, Value>,
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("outputs serialize");
    s.push('\n');
    s
}

fn outcome<const N: usize>(pairs: [(&str, Value); N]) -> BTreeMap<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn execute(s: &Scenario) -> Result<Artifacts, RunError> {
    let spec = &s.spectrum;
    let a = DiagonalOperator::new(spec.clone());
    Ok(match &s.experiment {
        Experiment::CriterionSweep { b_grid, n } => {
            let scans: Vec<_> = b_grid.par_iter().map(|&b| (b, exceptional_set(spec, b, *n))).collect();
            let mut csv = String::from("b_minus,b_plus,exceptional_count,last_exceptional\n");
            for (b, set) in &scans {
                let last = set.last().map_or(String::new(), |k| k.to_string());
                let _ = writeln!(
                    csv,
                    "{},{},{},{}",
                    format_float(b.b_minus()),
                    format_float(b.b_plus()),
                    set.len(),
                    last
                );
            }
            let verdict = match spec.uniform_verdict() {
                Some(v) => v,
                None => criterion_from_scans(spec, scans, *n)?,
            };
            let doc = json!({ "spectrum": spec.describe(), "n": n, "verdict": verdict });
            Artifacts {
                outcome: outcome([("verdict", verdict.label().into()), ("holds", verdict.holds().into())]),
                files: vec![("verdict.json", pretty(&doc)), ("report.csv", csv)],
            }
        }
        Experiment::SmoothnessProbe {
            vector,
            t_grid,
            max_order,
            h_ladder,
            n,
        } => {
            let reports = t_grid
                .par_iter()
                .map(|&t| smoothness_probe(&a, vector, t, *max_order, h_ladder, *n))
                .collect::<Result<Vec<_>, _>>()?;
            let summary: BTreeMap<String, Value> = reports
                .iter()
                .map(|r| {
                    let v: Vec<&str> = r.orders.iter().map(|o| o.verdict.as_str()).collect();
                    (format!("t={}", format_float(r.t)), json!(v))
                })
                .collect();
            Artifacts {
                outcome: outcome([("verdicts", json!(summary))]),
                files: vec![
                    ("verdict.json", pretty(&json!({ "reports": reports }))),
                    ("report.csv", reports_csv(&reports)),
                ],
            }
        }
        Experiment::Counterexample {
            count,
            scan_limit,
            t_samples,
            cap,
            n,
        } => match forge(spec, *count, *scan_limit, t_samples, *n, *cap) {
            Ok(out) => counterexample_artifacts(&out),
            Err(CoreError::InsufficientWitnesses { found, needed }) => {
                let doc = json!({ "conclusion": "NoWitnesses", "found": found, "needed": needed });
                Artifacts {
                    outcome: outcome([("conclusion", "NoWitnesses".into()), ("witnesses", found.into())]),
                    files: vec![("verdict.json", pretty(&doc))],
                }
            }
            Err(e) => return Err(e.into()),
        },
        Experiment::RegionFigure { b, im_range, count } => {
            let samples = region_boundary_samples(*b, (im_range[0], im_range[1]), *count)?;
            Artifacts {
                outcome: outcome([("rows", samples.len().into())]),
                files: vec![("region.csv", boundary_csv(&samples))],
            }
        }
        Experiment::MildIdentity {
            vector,
            t0,
            t,
            quad_steps,
            n,
        } => {
            let results: Vec<_> = quad_steps
                .par_iter()
                .map(|&q| mild_identity_residual(&a, vector, *t0, *t, q, *n))
                .collect();
            let mut residuals = Vec::new();
            for r in results {
                match r {
                    Ok(x) => residuals.push(x),
                    Err(CoreError::DomainRefused { verdict }) => {
                        let doc = json!({ "outcome": "DomainRefused", "verdict": verdict });
                        return Ok(Artifacts {
                            outcome: outcome([("outcome", "DomainRefused".into())]),
                            files: vec![("verdict.json", pretty(&doc))],
                        });
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            let mut csv = String::from("quad_steps,residual,ratio\n");
            let mut ratios = Vec::new();
            for (i, (q, r)) in quad_steps.iter().zip(&residuals).enumerate() {
                let ratio = if i > 0 && *r > 0.0 {
                    Some(residuals[i - 1] / r)
                } else {
                    None
                };
                ratios.push(ratio);
                let _ = writeln!(
                    csv,
                    "{},{},{}",
                    q,
                    format_float(*r),
                    ratio.map_or(String::new(), format_float)
                );
            }
            let doc = json!({ "quad_steps": quad_steps, "residuals": residuals, "ratios": ratios });
            Artifacts {
                outcome: outcome([("final_residual", json!(residuals.last()))]),
                files: vec![("verdict.json", pretty(&doc)), ("report.csv", csv)],
            }
        }
    })
}

fn counterexample_artifacts(out: &ForgeOutcome) -> Artifacts {
    let cert = &out.certificate;
    let mut csv = String::from("k,partial_sum\n");
    for p in &cert.divergence_witness {
        let _ = writeln!(csv, "{},{}", p.k, format_float(p.partial_sum));
    }
    let conclusion = serde_json::to_value(cert.conclusion).expect("enum serializes");
    let crossing = match &cert.a_domain_check {
        smoothlab_core::DomainVerdict::NotInDomain { crossing, .. } => json!(crossing),
        _ => Value::Null,
    };
    let doc = json!({
        "conclusion": conclusion,
        "regime": out.witnesses.regime,
        "reflected": out.reflected,
        "witnesses": out.witnesses.len(),
        "crossing": crossing,
    });
    Artifacts {
        outcome: outcome([
            ("conclusion", conclusion.clone()),
            ("regime", out.witnesses.regime.name().into()),
            ("witnesses", out.witnesses.len().into()),
            ("crossing", crossing),
        ]),
        files: vec![
            ("verdict.json", pretty(&doc)),
            ("certificate.json", pretty(out)),
            ("report.csv", csv),
        ],
    }
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

/// Runs a parsed scenario, writing its outputs and `run.json` into `out_dir`.
/// `document` is the source text the digest is taken from.
pub fn run(scenario: &Scenario, document: &str, out_dir: &Path) -> Result<RunRecord, RunError> {
    scenario.validate()?;
    let started_at = now();
    let input_digest = input_digest(document)?;
    let artifacts = execute(scenario)?;
    std::fs::create_dir_all(out_dir).map_err(io(out_dir))?;
    let mut outputs = Vec::new();
    for (name, content) in &artifacts.files {
        let path = out_dir.join(name);
        std::fs::write(&path, content).map_err(io(&path))?;
        outputs.push(OutputFile {
            name: name.to_string(),
            sha256: sha256_hex(content.as_bytes()),
            bytes: content.len(),
        });
    }
    let record = RunRecord {
        scenario: scenario.name.clone(),
        experiment: scenario.experiment.type_name().to_string(),
        tool_version: TOOL_VERSION.to_string(),
        started_at,
        finished_at: now(),
        input_digest,
        outcome: artifacts.outcome,
        outputs,
    };
    let path = out_dir.join("run.json");
    std::fs::write(&path, pretty(&record)).map_err(io(&path))?;
    Ok(record)
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides the scenario's `output_dir`.
    pub out_dir: Option<PathBuf>,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

/// Where a scenario's outputs go when nothing overrides it.
pub fn default_out_dir(scenario: &Scenario) -> PathBuf {
    scenario
        .output_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("runs").join(&scenario.name))
}

/// Reads, parses and runs a scenario file.
pub fn run_file(path: &Path, opts: &RunOptions) -> Result<(RunRecord, PathBuf), RunError> {
    let document = std::fs::read_to_string(path).map_err(io(path))?;
    let scenario = parse_scenario(&document)?;
    let out = opts.out_dir.clone().unwrap_or_else(|| default_out_dir(&scenario));
    let record = match opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()?
            .install(|| run(&scenario, &document, &out))?,
        None => run(&scenario, &document, &out)?,
    };
    Ok((record, out))
}

/// Loads a run record from a `run.json` path or a run directory.
pub fn load_record(path: &Path) -> Result<RunRecord, RunError> {
    let file = if path.is_dir() {
        path.join("run.json")
    } else {
        path.to_path_buf()
    };
    let text = std::fs::read_to_string(&file).map_err(io(&file))?;
    Ok(serde_json::from_str(&text)?)
}
