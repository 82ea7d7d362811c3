//! Classifies a measured teleportation fidelity against the classical bound.

use std::fmt;

use crate::cheat::fmax_analytic;
use crate::error::{Error, Result};

/// Default number of standard errors separating a verdict from the bound.
pub const DEFAULT_CONFIDENCE_Z: f64 = 3.0;
/// Best heterodyne-cheat fidelity for completely unknown coherent states.
pub const CLASSICAL_BOUND: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    ClassicalConsistent,
    Inconclusive,
    Quantum,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Quantum => "quantum",
            Verdict::Inconclusive => "inconclusive",
            Verdict::ClassicalConsistent => "classical-consistent",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerdictRecord {
    pub mean_fidelity: f64,
    pub std_error: f64,
    pub n: u64,
    pub threshold: f64,
    pub confidence_z: f64,
    /// `(mean − ½)/std_error`, always against ½ whatever the threshold.
    pub z_vs_half: f64,
    pub verdict: Verdict,
}

/// Threshold for a prior of inverse variance `λ`, or ½ without one.
pub fn classical_threshold(lambda: Option<f64>) -> Result<f64> {
    match lambda {
        None => Ok(CLASSICAL_BOUND),
        Some(l) => fmax_analytic(l),
    }
}

/// Verdict against the flat-prior bound ½.
pub fn verdict(mean: f64, std_error: f64, n: u64, confidence_z: f64) -> Result<VerdictRecord> {
    verdict_against(mean, std_error, n, confidence_z, CLASSICAL_BOUND)
}

/// Quantum when `mean − z·se` exceeds the threshold, classical-consistent
/// when `mean + z·se` does not, inconclusive otherwise.
pub fn verdict_against(
    mean: f64,
    std_error: f64,
    n: u64,
    confidence_z: f64,
    threshold: f64,
) -> Result<VerdictRecord> {
    if !(std_error > 0.0 && std_error.is_finite()) {
        return Err(Error::NonPositiveError(std_error));
    }
    if !mean.is_finite() {
        return Err(Error::param("mean", format!("must be finite, got {mean}")));
    }
    if !(confidence_z >= 0.0 && confidence_z.is_finite()) {
        return Err(Error::param(
            "confidence_z",
            format!("must be >= 0, got {confidence_z}"),
        ));
    }
    let verdict = if mean - confidence_z * std_error > threshold {
        Verdict::Quantum
    } else if mean + confidence_z * std_error <= threshold {
        Verdict::ClassicalConsistent
    } else {
        Verdict::Inconclusive
    };
    Ok(VerdictRecord {
        mean_fidelity: mean,
        std_error,
        n,
        threshold,
        confidence_z,
        z_vs_half: (mean - CLASSICAL_BOUND) / std_error,
        verdict,
    })
}
