//! Experiment runner: TOML configs in, deterministic JSON or CSV reports out.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod report;
pub mod run;

pub use config::{ExperimentConfig, ExperimentKind, Format};
pub use error::CliError;
pub use report::{Check, Num, RunReport, Status, SCHEMA_TAG};
pub use run::{curve_samples, run};
