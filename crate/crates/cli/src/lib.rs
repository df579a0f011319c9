//! Scenario-driven experiment runner.
//!
//! A scenario is a strict JSON document naming a spectrum and one
//! experiment. Running it writes CSV/JSON outputs plus a `run.json` record
//! whose input digest identifies the scenario for later comparison.

pub mod record;
pub mod run;
pub mod scenario;

pub use record::{compare_runs, input_digest, CompareError, Difference, RunRecord};
pub use run::{default_out_dir, load_record, run, run_file, RunError, RunOptions};
pub use scenario::{parse_scenario, Experiment, Scenario, ScenarioError, SCHEMA_VERSION};
