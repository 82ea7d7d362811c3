//! Dispatch from a validated configuration to the numeric routines.

use cvtele_core::cheat::{
    build_o_alpha, extrapolate_to_flat_prior, fmax_analytic, gain_fidelity_analytic,
    mc_average_fidelity, verify_optimal_eigenvector, CheatStrategy, GaussianPrior, OperatorMethod,
};
use cvtele_core::finite_dim::{
    haar_avg_fidelity_mc, two_state_brute_force, HaarBenchConfig, TwoStateSet,
};
use cvtele_core::gaussian::{
    bk_teleport_coherent, coherent_vs_gaussian_fidelity, fock_cross_check, TeleportParams,
};
use cvtele_core::mc::{Estimate, SeedStream};
use cvtele_core::verdict::{classical_threshold, verdict_against, CLASSICAL_BOUND};
use cvtele_core::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::config::{theta_grid, Command, ExperimentConfig, OperatorMethodArg};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Numeric column by name, `None` for non-numeric cells.
    pub fn column(&self, name: &str) -> Vec<Option<f64>> {
        let Some(k) = self.columns.iter().position(|c| *c == name) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .map(|r| match &r[k] {
                Cell::Num(v) => Some(*v),
                Cell::Int(v) => Some(*v as f64),
                _ => None,
            })
            .collect()
    }
}

/// Runs on a dedicated pool of `workers` threads (or the global pool).
/// Results do not depend on the worker count.
pub fn run_with_workers(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<Table, CliError> {
    cfg.validate()?;
    match workers {
        None => run(cfg),
        Some(0) => Err(CliError::Config {
            field: "workers".into(),
            message: "must be at least 1".into(),
        }),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| CliError::Config {
                field: "workers".into(),
                message: e.to_string(),
            })?
            .install(|| run(cfg)),
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    cfg.validate()?;
    let seed = cfg.seed;
    match &cfg.command {
        Command::BoundSweep { lambdas, n_samples } => bound_sweep(lambdas, *n_samples, seed),
        Command::CheatMc {
            lambda,
            gain,
            n_samples,
        } => cheat_mc(*lambda, *gain, *n_samples, seed),
        Command::OperatorCheck {
            alphas,
            lambdas,
            max_level,
            method,
        } => operator_check(alphas, lambdas, *max_level, *method),
        Command::TwoState {
            theta_grid,
            resolution,
        } => two_state(*theta_grid, *resolution),
        Command::Haar { dims, n_samples } => haar(dims, *n_samples, seed),
        Command::TeleportCurve {
            r_values,
            gain,
            beta,
            max_level,
        } => teleport_curve(r_values, *gain, *beta, *max_level),
        Command::Verdict {
            mean,
            std_error,
            n,
            confidence_z,
            lambda,
        } => verdict(*mean, *std_error, *n, *confidence_z, *lambda),
    }
}

fn bound_sweep(lambdas: &[f64], n: usize, seed: u64) -> Result<Table, CliError> {
    let mut t = Table::new(&[
        "kind",
        "lambda",
        "n",
        "mean",
        "std_error",
        "fmax_analytic",
        "z_vs_analytic",
    ]);
    let mut points: Vec<(f64, Estimate)> = Vec::new();
    for (i, &lambda) in lambdas.iter().enumerate() {
        let prior = GaussianPrior::new(lambda)?;
        let est = mc_average_fidelity(
            &prior,
            &CheatStrategy::optimal(&prior),
            n,
            SeedStream::new(seed).for_task(i as u32),
        )?;
        let fmax = fmax_analytic(lambda)?;
        t.push(vec![
            "mc".into(),
            lambda.into(),
            est.n.into(),
            est.mean.into(),
            est.std_error.into(),
            fmax.into(),
            est.z_score(fmax).into(),
        ]);
        points.push((lambda, est));
    }
    if points.len() > 1 {
        let est = extrapolate_to_flat_prior(&points)?;
        t.push(vec![
            "extrapolated".into(),
            0.0.into(),
            est.n.into(),
            est.mean.into(),
            est.std_error.into(),
            CLASSICAL_BOUND.into(),
            est.z_score(CLASSICAL_BOUND).into(),
        ]);
    }
    Ok(t)
}

fn cheat_mc(lambda: f64, gain: Option<f64>, n: usize, seed: u64) -> Result<Table, CliError> {
    let prior = GaussianPrior::new(lambda)?;
    let g = gain.unwrap_or_else(|| prior.optimal_gain());
    let est = mc_average_fidelity(&prior, &CheatStrategy::gain(g)?, n, SeedStream::new(seed))?;
    let analytic = gain_fidelity_analytic(&prior, g, Complex64::new(0.0, 0.0));
    let mut t = Table::new(&[
        "lambda",
        "gain",
        "n",
        "mean",
        "std_error",
        "analytic",
        "fmax_analytic",
    ]);
    t.push(vec![
        lambda.into(),
        g.into(),
        est.n.into(),
        est.mean.into(),
        est.std_error.into(),
        analytic.into(),
        fmax_analytic(lambda)?.into(),
    ]);
    Ok(t)
}

fn operator_check(
    alphas: &[[f64; 2]],
    lambdas: &[f64],
    max_level: usize,
    method: OperatorMethodArg,
) -> Result<Table, CliError> {
    let methods: &[OperatorMethod] = match method {
        OperatorMethodArg::ClosedForm => &[OperatorMethod::ClosedForm],
        OperatorMethodArg::Quadrature => &[OperatorMethod::Quadrature],
        OperatorMethodArg::Both => &[OperatorMethod::ClosedForm, OperatorMethod::Quadrature],
    };
    let cases: Vec<([f64; 2], f64)> = alphas
        .iter()
        .flat_map(|&a| lambdas.iter().map(move |&l| (a, l)))
        .collect();
    let rows: Vec<Result<Vec<Vec<Cell>>, CliError>> = cases
        .par_iter()
        .map(|&([re, im], lambda)| {
            let alpha = Complex64::new(re, im);
            let diff = if methods.len() == 2 {
                let a = build_o_alpha(alpha, lambda, max_level, OperatorMethod::ClosedForm)?;
                let b = build_o_alpha(alpha, lambda, max_level, OperatorMethod::Quadrature)?;
                Cell::Num(a.max_abs_diff(&b)?)
            } else {
                Cell::Empty
            };
            methods
                .iter()
                .map(|&m| {
                    let chk = verify_optimal_eigenvector(alpha, lambda, max_level, m)?;
                    let name = match m {
                        OperatorMethod::ClosedForm => "closed-form",
                        OperatorMethod::Quadrature => "quadrature",
                    };
                    Ok(vec![
                        re.into(),
                        im.into(),
                        lambda.into(),
                        name.into(),
                        chk.mu1.into(),
                        chk.mu1_analytic.into(),
                        chk.relative_error.into(),
                        chk.match_fidelity.into(),
                        diff.clone(),
                    ])
                })
                .collect()
        })
        .collect();
    let mut t = Table::new(&[
        "alpha_re",
        "alpha_im",
        "lambda",
        "method",
        "mu1",
        "mu1_analytic",
        "relative_error",
        "match_fidelity",
        "closed_vs_quadrature",
    ]);
    for r in rows {
        for row in r? {
            t.push(row);
        }
    }
    Ok(t)
}

fn two_state(k: usize, resolution: usize) -> Result<Table, CliError> {
    let rows: Vec<Result<Vec<Cell>, CliError>> = theta_grid(k)
        .par_iter()
        .map(|&theta| {
            let set = TwoStateSet::new(theta)?;
            let bf = two_state_brute_force(theta, resolution)?;
            Ok(vec![
                theta.into(),
                set.x().into(),
                set.cheat_fidelity().into(),
                bf.best_fidelity.into(),
                set.tweak().into(),
                bf.best_tweak.into(),
            ])
        })
        .collect();
    let mut t = Table::new(&[
        "theta",
        "x",
        "analytic_F",
        "brute_force_F",
        "phi_analytic",
        "phi_found",
    ]);
    for r in rows {
        t.push(r?);
    }
    Ok(t)
}

/// Independent seed for the `index`-th dimension of a Haar sweep.
fn derived_seed(seed: u64, index: usize) -> u64 {
    SeedStream::new(seed).for_task(index as u32).rng(0).random()
}

fn haar(dims: &[usize], n: usize, seed: u64) -> Result<Table, CliError> {
    let mut t = Table::new(&[
        "d",
        "n",
        "mean",
        "std_error",
        "target",
        "weight_mean",
        "weight_std_error",
    ]);
    for (i, &d) in dims.iter().enumerate() {
        let est = haar_avg_fidelity_mc(&HaarBenchConfig {
            d,
            n_samples: n,
            seed: derived_seed(seed, i),
        })?;
        t.push(vec![
            d.into(),
            est.fidelity.n.into(),
            est.fidelity.mean.into(),
            est.fidelity.std_error.into(),
            (2.0 / (d as f64 + 1.0)).into(),
            est.weight.mean.into(),
            est.weight.std_error.into(),
        ]);
    }
    Ok(t)
}

fn teleport_curve(
    r_values: &[f64],
    gain: f64,
    beta: [f64; 2],
    max_level: usize,
) -> Result<Table, CliError> {
    let beta = Complex64::new(beta[0], beta[1]);
    let rows: Vec<Result<Vec<Cell>, CliError>> = r_values
        .par_iter()
        .map(|&r| {
            let out = bk_teleport_coherent(beta, TeleportParams::new(r, gain)?)?;
            let f = coherent_vs_gaussian_fidelity(beta, &out)?;
            // the displaced-thermal Fock model describes unit gain only
            let fock = if gain == 1.0 {
                Cell::Num(fock_cross_check(beta, r, max_level)?)
            } else {
                Cell::Empty
            };
            Ok(vec![
                r.into(),
                gain.into(),
                f.into(),
                fock,
                CLASSICAL_BOUND.into(),
            ])
        })
        .collect();
    let mut t = Table::new(&[
        "r",
        "gain",
        "fidelity_gaussian",
        "fidelity_fock",
        "classical_bound",
    ]);
    for r in rows {
        t.push(r?);
    }
    Ok(t)
}

fn verdict(mean: f64, se: f64, n: u64, z: f64, lambda: Option<f64>) -> Result<Table, CliError> {
    let threshold = classical_threshold(lambda)?;
    let v = verdict_against(mean, se, n, z, threshold)?;
    let mut t = Table::new(&[
        "mean_fidelity",
        "std_error",
        "n",
        "z_vs_half",
        "threshold",
        "confidence_z",
        "verdict",
    ]);
    t.push(vec![
        v.mean_fidelity.into(),
        v.std_error.into(),
        v.n.into(),
        v.z_vs_half.into(),
        v.threshold.into(),
        v.confidence_z.into(),
        v.verdict.as_str().into(),
    ]);
    Ok(t)
}
