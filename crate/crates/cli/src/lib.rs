//! Experiments on the one-holed torus metrics, as a library behind the
//! `thurston-kit` binary.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{cmd_counterexample, cmd_equality, cmd_metric, cmd_quad, cmd_stretch};
pub use config::{Command, RunConfig};
pub use report::{Cell, Check, Format, Report, Table};
