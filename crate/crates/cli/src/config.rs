//! Command-line configuration and dispatch.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};

use thurston_core::{Side, Slope};

use crate::commands::{cmd_counterexample, cmd_equality, cmd_metric, cmd_quad, cmd_stretch};
use crate::report::{Format, Report};

#[derive(Debug, Clone, Parser)]
#[command(
    name = "thurston-kit",
    version,
    about = "Experiments with the curve and arc metrics on the one-holed torus"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Stern–Brocot depth of the slope suprema.
    #[arg(long, global = true, default_value_t = 10)]
    pub depth: u32,

    /// Tolerance of the command's main check (default depends on the command).
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Lipschitz certification of the k-expansion map.
    Quad {
        /// Base length of the quadrilateral.
        #[arg(long)]
        a: f64,
        /// Expansion factor.
        #[arg(long)]
        k: f64,
        /// Sampled point pairs.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Points for the composition-law check.
        #[arg(long, default_value_t = 1_000)]
        points: usize,
    },
    /// K and A in both directions between two structures.
    Metric {
        #[arg(allow_hyphen_values = true)]
        h0: String,
        #[arg(allow_hyphen_values = true)]
        h1: String,
    },
    /// The doubled-hexagon pairs for a list of X.
    Counterexample {
        #[arg(long = "x", value_delimiter = ',', default_values_t = vec![2.0, 5.0, 10.0, 100.0, 1000.0])]
        xs: Vec<f64>,
    },
    /// Random same-boundary pairs comparing A with K.
    Equality {
        #[arg(long)]
        b: f64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Envelope endpoints of the stretch family of a slope.
    Stretch {
        #[arg(allow_hyphen_values = true)]
        h0: String,
        #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
        slope: Slope,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.3, 0.7])]
        times: Vec<f64>,
        #[arg(long, default_value = "plus")]
        side: Side,
    },
}

impl Command {
    pub fn default_tol(&self) -> f64 {
        match self {
            Command::Quad { .. } => 1e-9,
            Command::Metric { .. } | Command::Equality { .. } => 5e-3,
            Command::Counterexample { .. } => 1e-3,
            Command::Stretch { .. } => 2e-3,
        }
    }
}

impl RunConfig {
    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or_else(|| self.command.default_tol())
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth < 1 {
            bail!("--depth must be at least 1");
        }
        if !(self.tol() > 0.0) {
            bail!("--tol must be positive");
        }
        Ok(())
    }

    pub fn run(&self) -> Result<Report> {
        self.validate()?;
        let (depth, tol, seed) = (self.depth, self.tol(), self.seed);
        match &self.command {
            Command::Quad {
                a,
                k,
                samples,
                points,
            } => cmd_quad(*a, *k, *samples, *points, seed),
            Command::Metric { h0, h1 } => cmd_metric(h0, h1, depth, tol),
            Command::Counterexample { xs } => cmd_counterexample(xs, depth, tol),
            Command::Equality { b, samples } => cmd_equality(*b, *samples, depth, seed, tol),
            Command::Stretch {
                h0,
                slope,
                times,
                side,
            } => cmd_stretch(h0, *slope, times, *side, depth, tol),
        }
    }
}
