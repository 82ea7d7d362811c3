//! Experiment configuration as embedded in every output file.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorMethodArg {
    ClosedForm,
    Quadrature,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    BoundSweep {
        lambdas: Vec<f64>,
        n_samples: usize,
    },
    CheatMc {
        lambda: f64,
        /// `None` selects the optimal gain `1/(1+λ)`.
        gain: Option<f64>,
        n_samples: usize,
    },
    OperatorCheck {
        /// `(Re α, Im α)` pairs.
        alphas: Vec<[f64; 2]>,
        lambdas: Vec<f64>,
        max_level: usize,
        method: OperatorMethodArg,
    },
    TwoState {
        theta_grid: usize,
        resolution: usize,
    },
    Haar {
        dims: Vec<usize>,
        n_samples: usize,
    },
    TeleportCurve {
        r_values: Vec<f64>,
        gain: f64,
        beta: [f64; 2],
        max_level: usize,
    },
    Verdict {
        mean: f64,
        std_error: f64,
        n: u64,
        confidence_z: f64,
        lambda: Option<f64>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::BoundSweep { .. } => "bound-sweep",
            Command::CheatMc { .. } => "cheat-mc",
            Command::OperatorCheck { .. } => "operator-check",
            Command::TwoState { .. } => "two-state",
            Command::Haar { .. } => "haar",
            Command::TeleportCurve { .. } => "teleport-curve",
            Command::Verdict { .. } => "verdict",
        }
    }
}

/// Everything that determines the numeric payload. Worker count and output
/// destination are deliberately absent: neither may change the result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub command: Command,
    pub seed: u64,
    pub format: Format,
}

pub const MIN_MC_SAMPLES: usize = 100;

fn invalid(field: &str, message: impl Into<String>) -> CliError {
    CliError::Config {
        field: field.to_string(),
        message: message.into(),
    }
}

fn positive(field: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(
            field,
            format!("must be a positive number, got {v}"),
        ))
    }
}

fn non_negative(field: &str, v: f64) -> Result<(), CliError> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(
            field,
            format!("must be a non-negative number, got {v}"),
        ))
    }
}

fn samples(v: usize) -> Result<(), CliError> {
    if v >= MIN_MC_SAMPLES {
        Ok(())
    } else {
        Err(invalid(
            "n",
            format!("need at least {MIN_MC_SAMPLES} samples, got {v}"),
        ))
    }
}

fn non_empty<T>(field: &str, v: &[T]) -> Result<(), CliError> {
    if v.is_empty() {
        Err(invalid(field, "needs at least one value"))
    } else {
        Ok(())
    }
}

impl ExperimentConfig {
    /// Range checks mirroring the preconditions of the numeric routines.
    pub fn validate(&self) -> Result<(), CliError> {
        match &self.command {
            Command::BoundSweep { lambdas, n_samples } => {
                non_empty("lambda", lambdas)?;
                for &l in lambdas {
                    positive("lambda", l)?;
                }
                samples(*n_samples)
            }
            Command::CheatMc {
                lambda,
                gain,
                n_samples,
            } => {
                positive("lambda", *lambda)?;
                if let Some(g) = gain {
                    non_negative("gain", *g)?;
                }
                samples(*n_samples)
            }
            Command::OperatorCheck {
                alphas,
                lambdas,
                max_level,
                ..
            } => {
                non_empty("alpha", alphas)?;
                non_empty("lambda", lambdas)?;
                for a in alphas {
                    if !a.iter().all(|x| x.is_finite()) {
                        return Err(invalid("alpha", "must be finite"));
                    }
                }
                for &l in lambdas {
                    positive("lambda", l)?;
                }
                if *max_level < 1 {
                    return Err(invalid("n-max", "must be at least 1"));
                }
                Ok(())
            }
            Command::TwoState {
                theta_grid,
                resolution,
            } => {
                if *theta_grid < 1 {
                    return Err(invalid("theta-grid", "must be at least 1"));
                }
                if *resolution < 100 {
                    return Err(invalid(
                        "resolution",
                        format!("must be at least 100, got {resolution}"),
                    ));
                }
                Ok(())
            }
            Command::Haar { dims, n_samples } => {
                non_empty("d", dims)?;
                if dims.contains(&0) {
                    return Err(invalid("d", "dimension must be at least 1"));
                }
                samples(*n_samples)
            }
            Command::TeleportCurve {
                r_values,
                gain,
                beta,
                max_level,
            } => {
                non_empty("r", r_values)?;
                for &r in r_values {
                    non_negative("r", r)?;
                }
                non_negative("gain", *gain)?;
                if !beta.iter().all(|x| x.is_finite()) {
                    return Err(invalid("beta", "must be finite"));
                }
                if *max_level < 1 {
                    return Err(invalid("n-max", "must be at least 1"));
                }
                Ok(())
            }
            Command::Verdict {
                mean,
                std_error,
                confidence_z,
                lambda,
                ..
            } => {
                if !mean.is_finite() {
                    return Err(invalid("mean", "must be finite"));
                }
                positive("std-error", *std_error)?;
                non_negative("z", *confidence_z)?;
                if let Some(l) = lambda {
                    non_negative("lambda", *l)?;
                }
                Ok(())
            }
        }
    }
}

/// The 3×3 `(α, λ)` grid checked by default.
pub fn default_operator_alphas() -> Vec<[f64; 2]> {
    vec![[0.0, 0.0], [1.0, -1.0], [0.0, 3.0]]
}

pub fn default_operator_lambdas() -> Vec<f64> {
    vec![0.2, 1.0, 3.0]
}

/// `θ_k = k·(π/2)/K`, `k = 1..=K`.
pub fn theta_grid(k: usize) -> Vec<f64> {
    (1..=k).map(|i| FRAC_PI_2 * (i as f64 / k as f64)).collect()
}

/// Parses counts written as integers or in exponent form (`1e6`).
pub fn parse_count(s: &str) -> Result<usize, String> {
    if let Ok(v) = s.parse::<usize>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("`{s}` is not a count"))?;
    if f >= 0.0 && f.fract() == 0.0 && f <= usize::MAX as f64 {
        Ok(f as usize)
    } else {
        Err(format!("`{s}` is not a non-negative integer"))
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (also with `j`).
pub fn parse_complex(s: &str) -> Result<[f64; 2], String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || format!("`{s}` is not a complex number like 1.5-0.5i");
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse::<f64>().map(|re| [re, 0.0]).map_err(|_| err());
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| err())?,
    };
    Ok([re.parse::<f64>().map_err(|_| err())?, im])
}
