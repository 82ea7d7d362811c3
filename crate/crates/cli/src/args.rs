//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::Rng;

use crate::config::{
    default_operator_alphas, default_operator_lambdas, parse_complex, parse_count, Command,
    ExperimentConfig, Format, OperatorMethodArg,
};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "cvtele",
    version,
    about = "Classical-bound and teleportation fidelity experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Seed for all random draws; generated and recorded when omitted.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads; never changes the numbers.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Optimal heterodyne cheat over a list of priors, plus the extrapolation to λ = 0.
    #[command(allow_negative_numbers = true)]
    BoundSweep {
        #[arg(long = "lambda", value_delimiter = ',', default_values_t = [0.01, 0.05, 0.1])]
        lambdas: Vec<f64>,
        #[arg(long = "n", value_parser = parse_count, default_value = "1000000")]
        n_samples: usize,
    },
    /// Monte Carlo fidelity of one gain rule under one prior.
    #[command(allow_negative_numbers = true)]
    CheatMc {
        #[arg(long)]
        lambda: f64,
        /// Defaults to the optimal gain 1/(1+λ).
        #[arg(long)]
        gain: Option<f64>,
        #[arg(long = "n", value_parser = parse_count, default_value = "1000000")]
        n_samples: usize,
    },
    /// Top eigenpair of the cheat operator against its closed form.
    #[command(allow_negative_numbers = true)]
    OperatorCheck {
        /// Complex label such as 1-1i; repeatable.
        #[arg(long = "alpha", value_parser = parse_complex, allow_hyphen_values = true)]
        alphas: Vec<[f64; 2]>,
        #[arg(long = "lambda", value_delimiter = ',')]
        lambdas: Vec<f64>,
        #[arg(long = "n-max", default_value_t = 60)]
        max_level: usize,
        #[arg(long, value_enum, default_value_t = OperatorMethodArg::Both)]
        method: OperatorMethodArg,
    },
    /// Two nonorthogonal qubit states: formula against brute-force search.
    #[command(allow_negative_numbers = true)]
    TwoState {
        #[arg(long = "theta-grid", default_value_t = 100)]
        theta_grid: usize,
        #[arg(long, default_value_t = 400)]
        resolution: usize,
    },
    /// Covariant measure-and-reprepare on Haar-random states.
    #[command(allow_negative_numbers = true)]
    Haar {
        #[arg(long = "d", value_delimiter = ',', default_values_t = [2])]
        dims: Vec<usize>,
        #[arg(long = "n", value_parser = parse_count, default_value = "1000000")]
        n_samples: usize,
    },
    /// Teleportation fidelity against squeezing.
    #[command(allow_negative_numbers = true)]
    TeleportCurve {
        /// Explicit squeezing values; overrides --r-max/--r-steps.
        #[arg(long = "r", value_delimiter = ',')]
        r_values: Vec<f64>,
        #[arg(long = "r-max", default_value_t = 2.0)]
        r_max: f64,
        #[arg(long = "r-steps", default_value_t = 40)]
        r_steps: usize,
        #[arg(long, default_value_t = 1.0)]
        gain: f64,
        #[arg(long, value_parser = parse_complex, default_value = "0", allow_hyphen_values = true)]
        beta: [f64; 2],
        #[arg(long = "n-max", default_value_t = 80)]
        max_level: usize,
    },
    /// Classify a measured fidelity against the classical bound.
    #[command(allow_negative_numbers = true)]
    Verdict {
        #[arg(long)]
        mean: f64,
        #[arg(long = "std-error")]
        std_error: f64,
        #[arg(long = "n", default_value_t = 1)]
        n: u64,
        #[arg(long = "z", default_value_t = 3.0)]
        confidence_z: f64,
        /// Compare with (1+λ)/(2+λ) instead of ½.
        #[arg(long)]
        lambda: Option<f64>,
    },
}

impl Sub {
    fn is_stochastic(&self) -> bool {
        matches!(
            self,
            Sub::BoundSweep { .. } | Sub::CheatMc { .. } | Sub::Haar { .. }
        )
    }

    fn into_command(self) -> Result<Command, CliError> {
        Ok(match self {
            Sub::BoundSweep { lambdas, n_samples } => Command::BoundSweep { lambdas, n_samples },
            Sub::CheatMc {
                lambda,
                gain,
                n_samples,
            } => Command::CheatMc {
                lambda,
                gain,
                n_samples,
            },
            Sub::OperatorCheck {
                alphas,
                lambdas,
                max_level,
                method,
            } => Command::OperatorCheck {
                alphas: if alphas.is_empty() {
                    default_operator_alphas()
                } else {
                    alphas
                },
                lambdas: if lambdas.is_empty() {
                    default_operator_lambdas()
                } else {
                    lambdas
                },
                max_level,
                method,
            },
            Sub::TwoState {
                theta_grid,
                resolution,
            } => Command::TwoState {
                theta_grid,
                resolution,
            },
            Sub::Haar { dims, n_samples } => Command::Haar { dims, n_samples },
            Sub::TeleportCurve {
                r_values,
                r_max,
                r_steps,
                gain,
                beta,
                max_level,
            } => {
                let r_values = if r_values.is_empty() {
                    if r_steps < 1 || !(r_max >= 0.0 && r_max.is_finite()) {
                        return Err(CliError::Config {
                            field: "r-max".into(),
                            message: "need r-max >= 0 and r-steps >= 1".into(),
                        });
                    }
                    (0..=r_steps)
                        .map(|k| r_max * k as f64 / r_steps as f64)
                        .collect()
                } else {
                    r_values
                };
                Command::TeleportCurve {
                    r_values,
                    gain,
                    beta,
                    max_level,
                }
            }
            Sub::Verdict {
                mean,
                std_error,
                n,
                confidence_z,
                lambda,
            } => Command::Verdict {
                mean,
                std_error,
                n,
                confidence_z,
                lambda,
            },
        })
    }
}

impl Cli {
    /// Resolves defaults into a complete configuration. Stochastic commands
    /// without `--seed` get a fresh random seed; deterministic ones record 0.
    pub fn into_config(self) -> Result<(ExperimentConfig, Common), CliError> {
        let seed = match self.common.seed {
            Some(s) => s,
            None if self.command.is_stochastic() => rand::rng().random(),
            None => 0,
        };
        let cfg = ExperimentConfig {
            command: self.command.into_command()?,
            seed,
            format: self.common.format,
        };
        cfg.validate()?;
        Ok((cfg, self.common))
    }
}
