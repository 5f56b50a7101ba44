//! Experiment runner, thread pool and file formats on top of `szego-core`.

pub mod experiments;
pub mod io;
pub mod runner;

pub use experiments::{run, Check, ExperimentConfig, ExperimentResult, Format, Subcommand};
pub use runner::RayonRunner;
