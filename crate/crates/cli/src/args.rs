use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Parser)]
#[command(
    name = "bloch",
    version,
    about = "Bloch seminorm of finite Blaschke products: constants, sweeps and certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output_format: OutputFormat,
    /// Override a named tolerance, e.g. `--tolerance r0=1e-6`. Repeatable.
    #[arg(long = "tolerance", global = true, value_name = "NAME=VALUE", value_parser = parse_tolerance)]
    pub tolerances: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Recompute the published constants and compare them with the printed digits.
    Constants,
    /// Estimate the seminorm of one product.
    Seminorm {
        #[arg(long)]
        input: PathBuf,
        /// Extra random starts on top of the deterministic grid.
        #[arg(long, default_value_t = 0)]
        starts: usize,
    },
    /// Seminorms of many random products against the lower bound.
    Sweep(SweepArgs),
    /// Explicit point with a guaranteed pointwise bound.
    Theorem4 {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1.0 / 7.0)]
        d: f64,
        /// Use this δ instead of the computed one.
        #[arg(long)]
        delta_override: Option<f64>,
        #[arg(long, default_value_t = bloch_core::constructive::DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Critical points, case label, monodromy and sheet tree.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = bloch_core::reference::A)]
        a: f64,
        /// Break degenerate configurations by a tiny seeded rotation of the zeros.
        #[arg(long)]
        perturb: bool,
    },
    /// Solve the parameter problem of the glued surface and maximize its conformal radius.
    Surface {
        #[arg(long, default_value_t = bloch_core::reference::A)]
        a: f64,
        #[arg(long, default_value_t = bloch_core::surface::DEFAULT_NODES)]
        nodes: usize,
        /// Extra random starts in the upper half-plane.
        #[arg(long, default_value_t = 0)]
        starts: usize,
        /// Write the quadrature convergence table to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(long, default_value_t = 8)]
    pub max_degree: usize,
    /// Also include `z^n` for `n = 1..=N`.
    #[arg(long, default_value_t = 0)]
    pub monomials: usize,
    /// Worker threads; 0 uses the available parallelism.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

fn parse_tolerance(text: &str) -> Result<(String, f64), String> {
    let (name, value) = text.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got {text:?}"))?;
    let value: f64 = value.trim().parse().map_err(|e| format!("bad tolerance value {value:?}: {e}"))?;
    if !(value.is_finite() && value >= 0.0) {
        return Err(format!("tolerance must be finite and nonnegative, got {value}"));
    }
    Ok((name.trim().to_string(), value))
}

impl Common {
    /// The last override given for `name`.
    pub fn tolerance(&self, name: &str) -> Option<f64> {
        self.tolerances.iter().rev().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    /// Rejects overrides for names the running command does not read.
    pub fn check_tolerance_names(&self, known: &[&str]) -> CliResult<()> {
        for (name, _) in &self.tolerances {
            if !known.contains(&name.as_str()) {
                return Err(CliError::Usage(format!(
                    "unknown tolerance {name:?}; known: {}",
                    known.join(", ")
                )));
            }
        }
        Ok(())
    }
}
