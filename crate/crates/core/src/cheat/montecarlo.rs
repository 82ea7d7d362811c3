use num_complex::Complex64;

use super::{coherent_fidelity, heterodyne_sample, prior_sample, CheatStrategy, GaussianPrior};
use crate::error::{Error, Result};
use crate::fock::{coherent_fock, Truncation};
use crate::mc::{run_chunked, Estimate, SeedStream};

const MIN_SAMPLES: usize = 100;

fn check_samples(n_samples: usize) -> Result<()> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::param(
            "n_samples",
            format!("need at least {MIN_SAMPLES}, got {n_samples}"),
        ));
    }
    Ok(())
}

/// Monte Carlo estimate of `E_β E_{α|β} |⟨f_α|β⟩|²`.
///
/// Gain rules use the exact coherent overlap, so no truncation enters; custom
/// rules are evaluated against `|β⟩` truncated to the rule's output dimension.
pub fn mc_average_fidelity(
    prior: &GaussianPrior,
    strategy: &CheatStrategy,
    n_samples: usize,
    streams: SeedStream,
) -> Result<Estimate> {
    check_samples(n_samples)?;
    let [m] = run_chunked::<1, _>(n_samples, streams, |rng, acc| {
        let beta = prior_sample(prior, rng);
        let alpha = heterodyne_sample(beta, rng);
        let f = match strategy {
            CheatStrategy::Gain { .. } => {
                coherent_fidelity(strategy.coherent_label(alpha).unwrap_or_default(), beta)
            }
            CheatStrategy::Custom(rule) => {
                let out = rule(alpha)?;
                let input = coherent_fock(beta, Truncation::new(out.max_level()))?;
                out.inner(&input)?.norm_sqr()
            }
        };
        acc[0].push(f);
        Ok(())
    })?;
    Ok(m.estimate())
}

/// Same estimator with every fidelity computed from truncated Fock vectors,
/// a cross-check on the exact-overlap path.
pub fn mc_average_fidelity_fock(
    prior: &GaussianPrior,
    strategy: &CheatStrategy,
    n_samples: usize,
    streams: SeedStream,
    trunc: Truncation,
) -> Result<Estimate> {
    check_samples(n_samples)?;
    let [m] = run_chunked::<1, _>(n_samples, streams, |rng, acc| {
        let beta = prior_sample(prior, rng);
        let alpha = heterodyne_sample(beta, rng);
        let out = super::reprepare(strategy, alpha, trunc)?;
        let input = coherent_fock(beta, trunc)?;
        acc[0].push(out.inner(&input)?.norm_sqr());
        Ok(())
    })?;
    Ok(m.estimate())
}

/// How Bob handles a prior with nonzero mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanShiftRule {
    /// Shrink toward the prior mean: `|m + g(α − m)⟩`.
    Shifted,
    /// Keep the vacuum-centred rule `|gα⟩`.
    Unshifted,
}

/// Heterodyne cheat at the optimal gain for a prior centred on `prior_mean`.
pub fn mean_shift_invariance(
    prior_mean: Complex64,
    lambda: f64,
    rule: MeanShiftRule,
    n_samples: usize,
    streams: SeedStream,
) -> Result<Estimate> {
    let prior = GaussianPrior::with_mean(lambda, prior_mean)?;
    let center = match rule {
        MeanShiftRule::Shifted => prior_mean,
        MeanShiftRule::Unshifted => Complex64::new(0.0, 0.0),
    };
    let strategy = CheatStrategy::centered_gain(prior.optimal_gain(), center)?;
    mc_average_fidelity(&prior, &strategy, n_samples, streams)
}
