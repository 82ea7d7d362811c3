//! Measure-and-reprepare teleportation of coherent states.
//!
//! Victor draws `|β⟩` with `β` from a Gaussian prior of density
//! `(λ/π)·exp(−λ|β − m|²)`. A cheating Alice heterodynes the state, getting
//! `α` with density `(1/π)·exp(−|α − β|²)`, and Bob prepares `|f_α⟩`. With
//! heterodyne detection the best Bob can do is `|f_α⟩ = |α/(1+λ)⟩`, reaching the
//! average fidelity `(1+λ)/(2+λ)`, which tends to ½ for an uninformative prior.

mod montecarlo;
mod operator;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fock::{coherent_fock, FockVector, Truncation};
use crate::mc::Estimate;

pub use montecarlo::{
    mc_average_fidelity, mc_average_fidelity_fock, mean_shift_invariance, MeanShiftRule,
};
pub use operator::{
    build_o_alpha, prior_operator, verify_optimal_eigenvector, OperatorMethod, OptimalEigenCheck,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPrior {
    lambda: f64,
    mean: Complex64,
}

impl GaussianPrior {
    pub fn new(lambda: f64) -> Result<Self> {
        Self::with_mean(lambda, Complex64::new(0.0, 0.0))
    }

    pub fn with_mean(lambda: f64, mean: Complex64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::LambdaNonPositive(lambda));
        }
        Ok(Self { lambda, mean })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mean(&self) -> Complex64 {
        self.mean
    }

    /// Gain of the optimal heterodyne cheat, `1/(1+λ)`.
    pub fn optimal_gain(&self) -> f64 {
        1.0 / (1.0 + self.lambda)
    }
}

/// Bob's repreparation rule `α → |f_α⟩`.
#[derive(Clone)]
pub enum CheatStrategy {
    /// Prepare the coherent state `|c + g·(α − c)⟩`.
    Gain { gain: f64, center: Complex64 },
    /// Arbitrary rule; fidelities are then evaluated in Fock space.
    Custom(Arc<dyn Fn(Complex64) -> Result<FockVector> + Send + Sync>),
}

impl CheatStrategy {
    pub fn gain(gain: f64) -> Result<Self> {
        Self::centered_gain(gain, Complex64::new(0.0, 0.0))
    }

    pub fn centered_gain(gain: f64, center: Complex64) -> Result<Self> {
        if !(gain >= 0.0 && gain.is_finite()) {
            return Err(Error::param("gain", format!("must be >= 0, got {gain}")));
        }
        Ok(CheatStrategy::Gain { gain, center })
    }

    /// The optimal rule `|α/(1+λ)⟩` for the given prior, re-centred on its mean.
    pub fn optimal(prior: &GaussianPrior) -> Self {
        CheatStrategy::Gain {
            gain: prior.optimal_gain(),
            center: prior.mean(),
        }
    }

    pub fn custom<F>(rule: F) -> Self
    where
        F: Fn(Complex64) -> Result<FockVector> + Send + Sync + 'static,
    {
        CheatStrategy::Custom(Arc::new(rule))
    }

    /// Coherent label Bob prepares, for gain rules.
    pub fn coherent_label(&self, alpha: Complex64) -> Option<Complex64> {
        match self {
            CheatStrategy::Gain { gain, center } => Some(center + (alpha - center) * *gain),
            CheatStrategy::Custom(_) => None,
        }
    }
}

impl fmt::Debug for CheatStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheatStrategy::Gain { gain, center } => f
                .debug_struct("Gain")
                .field("gain", gain)
                .field("center", center)
                .finish(),
            CheatStrategy::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R, variance_per_part: f64) -> Complex64 {
    let s = variance_per_part.sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

/// Heterodyne outcome on `|β⟩`: `β` plus complex Gaussian noise with variance
/// ½ per part, i.e. outcome density `(1/π)·e^{−|α−β|²}`.
pub fn heterodyne_sample<R: Rng + ?Sized>(beta: Complex64, rng: &mut R) -> Complex64 {
    beta + complex_normal(rng, 0.5)
}

/// Draw from the prior: variance `1/(2λ)` per part around the mean.
pub fn prior_sample<R: Rng + ?Sized>(prior: &GaussianPrior, rng: &mut R) -> Complex64 {
    prior.mean + complex_normal(rng, 0.5 / prior.lambda)
}

pub fn reprepare(
    strategy: &CheatStrategy,
    alpha: Complex64,
    trunc: impl Into<Truncation>,
) -> Result<FockVector> {
    match strategy {
        CheatStrategy::Gain { .. } => {
            coherent_fock(strategy.coherent_label(alpha).unwrap_or_default(), trunc)
        }
        CheatStrategy::Custom(rule) => rule(alpha),
    }
}

/// `|⟨γ|β⟩|² = e^{−|γ−β|²}`.
pub fn coherent_fidelity(gamma: Complex64, beta: Complex64) -> f64 {
    (-(gamma - beta).norm_sqr()).exp()
}

/// Maximum heterodyne-cheat fidelity `(1+λ)/(2+λ)`; `λ = 0` is the flat-prior
/// limit ½ and `λ = ∞` the known-vacuum limit 1.
pub fn fmax_analytic(lambda: f64) -> Result<f64> {
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::LambdaNegative(lambda));
    }
    if lambda.is_infinite() {
        return Ok(1.0);
    }
    Ok((1.0 + lambda) / (2.0 + lambda))
}

/// Exact average fidelity of the gain rule `|c + g(α − c)⟩` under a prior
/// with mean `m`.
///
/// The error `γ − β` is complex Gaussian with mean `(1−g)(c−m)` and variance
/// `s² = (1−g)²/λ + g²`, and `E e^{−|z|²} = e^{−|μ|²/(1+s²)}/(1+s²)`.
pub fn gain_fidelity_analytic(prior: &GaussianPrior, gain: f64, center: Complex64) -> f64 {
    let s2 = (1.0 - gain).powi(2) / prior.lambda + gain * gain;
    let mu = (center - prior.mean) * (1.0 - gain);
    (-mu.norm_sqr() / (1.0 + s2)).exp() / (1.0 + s2)
}

/// Polynomial (Lagrange) extrapolation of estimates taken at several `λ` to
/// the flat-prior limit `λ = 0`. Errors are propagated assuming independent
/// estimates.
pub fn extrapolate_to_flat_prior(points: &[(f64, Estimate)]) -> Result<Estimate> {
    if points.is_empty() {
        return Err(Error::param("points", "need at least one estimate"));
    }
    let mut mean = 0.0;
    let mut var = 0.0;
    let mut n = 0;
    for (i, (li, est)) in points.iter().enumerate() {
        let mut w = 1.0;
        for (j, (lj, _)) in points.iter().enumerate() {
            if i != j {
                if li == lj {
                    return Err(Error::param("points", format!("duplicate lambda {li}")));
                }
                w *= -lj / (li - lj);
            }
        }
        mean += w * est.mean;
        var += (w * est.std_error).powi(2);
        n += est.n;
    }
    Ok(Estimate {
        mean,
        std_error: var.sqrt(),
        n,
    })
}
