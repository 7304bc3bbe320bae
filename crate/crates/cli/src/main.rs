//! Command-line front end for the `dirforms` library.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dirforms::bounds::{BoundVariant, HypothesisMode};
use dirforms::{Error, PrecisionSpec};

#[derive(Parser, Debug)]
#[command(name = "dirforms", version, about = "Linear forms in values of periodic Dirichlet series and the dimension bounds they imply")]
pub struct Cli {
    /// Significant digits for multiprecision work (at least 10)
    #[arg(long, global = true, env = "DIRFORMS_PRECISION", default_value_t = PrecisionSpec::DEFAULT_DIGITS)]
    pub precision: u32,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    WithSlack,
    NoSlack,
    Exact,
}

impl From<VariantArg> for BoundVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::WithSlack => BoundVariant::ClosedWithSlack,
            VariantArg::NoSlack => BoundVariant::ClosedNoSlack,
            VariantArg::Exact => BoundVariant::ExactSaddle,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Analytic,
    Numeric,
}

impl From<ModeArg> for HypothesisMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Analytic => HypothesisMode::Analytic,
            ModeArg::Numeric => HypothesisMode::Numeric,
        }
    }
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Shape {
    /// Period d of the series
    #[arg(long)]
    pub d: u32,
    /// Pole order a
    #[arg(long)]
    pub a: u32,
    /// Zero-range parameter b
    #[arg(long)]
    pub b: u32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the rational function P_n, its partial fractions and the coefficients A_j, B_m
    Construct {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        n: u32,
    },
    /// Check reconstruction, parity sums, reflection, integrality and coefficient growth for n = 1..n-max
    Verify {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = 3)]
        n_max: u32,
    },
    /// Evaluate I(n) by direct summation and from the coefficients, and compare
    Eval {
        /// Preset (zeta, chi3, chi4, chi5) or path to a series JSON file
        #[arg(long)]
        series: String,
        /// Pole order a
        #[arg(long)]
        a: u32,
        /// Zero-range parameter b
        #[arg(long)]
        b: u32,
        #[arg(long, conflicts_with = "n_max")]
        n: Option<u32>,
        /// Evaluate every n = 1..n-max
        #[arg(long)]
        n_max: Option<u32>,
        /// Must equal the series period when given
        #[arg(long)]
        d: Option<u32>,
    },
    /// Saddle-point data: x0, x1, ρ, the points t_λ, predicted decay rate and the lemma checks
    Saddle {
        #[command(flatten)]
        shape: Shape,
        /// Restrict output to one saddle t_λ (0 ≤ λ ≤ d)
        #[arg(long)]
        lambda: Option<u32>,
        /// Series used for b_λ, λ0 and subsequence selection
        #[arg(long)]
        series: Option<String>,
        /// Compare the asymptotic J_λ(n) with quadrature at this n
        #[arg(long)]
        n: Option<u64>,
        /// Range for subsequence selection
        #[arg(long, default_value_t = 50)]
        n_max: u64,
    },
    /// Lower bound 1 + α/β for the dimension, with the hypothesis check
    Bound {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, value_enum, default_value_t = VariantArg::WithSlack)]
        variant: VariantArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Numeric)]
        mode: ModeArg,
        /// Keep the trigonometric terms of the ρ cap when d = 1
        #[arg(long)]
        strict: bool,
        /// Series for the exact variant's λ0
        #[arg(long)]
        series: Option<String>,
    },
    /// Recompute the printed dimension tables
    Table {
        /// Table to reproduce (1..4); all when omitted
        #[arg(long)]
        d: Option<u64>,
    },
    /// Smallest a with some b giving 1 + α/β above the target dimension
    Search {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        target_dim: u64,
        #[arg(long)]
        a_limit: u64,
        #[arg(long, value_enum, default_value_t = VariantArg::WithSlack)]
        variant: VariantArg,
    },
    /// Growth of the bound along a = ⌊t^μ⌋, b = ⌊t⌋
    Demo {
        #[arg(long)]
        d: u64,
        #[arg(long = "C")]
        c: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long, value_delimiter = ',', default_values_t = vec![20u64, 50, 100, 1000])]
        t: Vec<u64>,
    },
}

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidParams(_) | Error::InvalidSeries { .. } | Error::Json(_) | Error::Io(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
