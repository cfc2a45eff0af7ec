//! Experiment harness around `momentum-lab`: plain-text configs in,
//! deterministic CSV telemetry and pass/fail verification reports out.

pub mod analysis;
pub mod compare;
pub mod config;
pub mod error;
pub mod experiment;
pub mod telemetry;

pub use compare::{compare, CompareMetric, CompareReport};
pub use config::Config;
pub use error::{Result, RunnerError};
pub use experiment::{build_objective, gradient_norm_bound, run, RunOutput};
pub use telemetry::{to_csv, write_csv, TrajectoryRecord};
