//! Flag definitions. Every numeric setting is optional here; defaults
//! and config-file merging happen in [`crate::settings`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "qmemcap",
    version,
    about = "Entropy rate and classical capacity of a Markov-switched depolarizing qubit channel"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check channel parameters against the complete-positivity and
    /// stochasticity constraints.
    Validate(PointArgs),
    /// Entropy rate of the flip process at one parameter point.
    EntropyRate(PointArgs),
    /// Capacity (1 - entropy rate) at one parameter point.
    Capacity(PointArgs),
    /// Capacity surface over an (a, s) grid, d chosen by a rule.
    Sweep(SweepArgs),
    /// All three estimators side by side with the sandwich verdict.
    Compare(PointArgs),
}

/// Parameters for a single point, in either the symmetric form
/// (`--a --d --s`) or the raw form (`--x0 --x1 --q00 --q10`).
#[derive(Args, Debug, Default, Clone)]
pub struct PointArgs {
    /// Average no-flip probability of the two sub-channels.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Half-difference of the no-flip probabilities.
    #[arg(long, allow_negative_numbers = true)]
    pub d: Option<f64>,
    /// Switching correlation in [-1, 1].
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// No-flip probability of sub-channel 0.
    #[arg(long, allow_negative_numbers = true)]
    pub x0: Option<f64>,
    /// No-flip probability of sub-channel 1.
    #[arg(long, allow_negative_numbers = true)]
    pub x1: Option<f64>,
    /// Probability of staying on sub-channel 0.
    #[arg(long, allow_negative_numbers = true)]
    pub q00: Option<f64>,
    /// Probability of switching from sub-channel 1 to 0.
    #[arg(long, allow_negative_numbers = true)]
    pub q10: Option<f64>,

    #[command(flatten)]
    pub method: MethodArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Default, Clone)]
pub struct MethodArgs {
    /// Estimator: blackwell (belief fixed point), block (entropy
    /// bounds), or mc (Monte Carlo).
    #[arg(long)]
    pub method: Option<String>,
    /// Grid cells for the fixed point (blackwell).
    #[arg(long)]
    pub bins: Option<usize>,
    /// L1 convergence tolerance (blackwell).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Iteration cap (blackwell).
    #[arg(long)]
    pub max_iter: Option<u64>,
    /// Block length (block method and compare).
    #[arg(long)]
    pub n: Option<usize>,
    /// Simulation steps (mc).
    #[arg(long)]
    pub steps: Option<u64>,
    /// Discarded warm-up steps (mc).
    #[arg(long)]
    pub burn_in: Option<u64>,
    /// Generator seed (mc); identical seeds reproduce output bytes.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct OutputArgs {
    /// Write data here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// Exit nonzero when an estimate has not converged.
    #[arg(long)]
    pub strict: bool,
    /// Worker threads (default: all cores; results do not depend on it).
    #[arg(long)]
    pub threads: Option<usize>,
    /// JSON config file mirroring the flag names; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct SweepArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a_max: Option<f64>,
    #[arg(long)]
    pub a_steps: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub s_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub s_max: Option<f64>,
    #[arg(long)]
    pub s_steps: Option<usize>,
    /// Difference rule: "max" for d = min(a - 1/3, 1 - a), or
    /// "fixed:VALUE".
    #[arg(long)]
    pub d_rule: Option<String>,
    /// Also write a gnuplot script rendering the surface (needs --out).
    #[arg(long)]
    pub plot_script: Option<PathBuf>,

    #[command(flatten)]
    pub method: MethodArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
