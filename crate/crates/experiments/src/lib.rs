//! Experiment runners, tabular and plot output, and the `intvol` command line.
//!
//! Every runner is a pure function of its configuration: the tables it
//! produces are byte-identical across runs and worker counts.

pub mod cli;
pub mod config;
pub mod error;
pub mod output;
pub mod runners;

pub use config::{A0Choice, ExperimentConfig, PlaneChoice};
pub use error::{ExpError, ExpResult};
pub use output::{write_csv, write_svg, CsvTable};
pub use runners::RunOutput;
