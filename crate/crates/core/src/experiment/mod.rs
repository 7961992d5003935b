//! Declarative experiment configs, the runner and report output.

mod config;
mod output;
mod run;

pub use config::{Experiment, ExperimentConfig, DEFAULT_TOL};
pub use output::{emit_outputs, parse_formats, Format};
pub use run::{run_experiment, ReportDocument, COMMUTATOR_SAMPLES, FLIP_SYMMETRY_TOL};
