//! Experiment runner for the kicked nonlinear oscillator.
//!
//! A run reads a JSON [`config::ExperimentConfig`], executes one of the
//! [`experiments::Experiment`]s on a sized rayon pool and writes one CSV per
//! curve plus a `manifest.json` recording the resolved parameters, seeds,
//! wall time, library version and every invariant check. The numerical work
//! lives in [`kickosc_core`], re-exported here as [`core`].

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod config;
pub mod error;
pub mod experiments;
pub mod runner;
pub mod table;

pub use config::{ExperimentConfig, ParamValue, Params, ResolvedConfig};
pub use error::RunError;
pub use experiments::Experiment;
pub use kickosc_core as core;
pub use runner::{execute, simulate, Manifest, Recorder, RunReport, RunStatus};
pub use table::Table;
