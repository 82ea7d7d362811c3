//! Pure states in a truncated Fock space.
//!
//! Amplitude sequences are generated by multiplicative recurrences; factorials
//! are never formed, so labels up to |β| ≈ 4 at N = 60 stay well inside `f64`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default highest retained number state.
pub const DEFAULT_MAX_LEVEL: usize = 60;
/// Default tolerated probability mass discarded by the truncation.
pub const DEFAULT_LEAK_TOLERANCE: f64 = 1e-10;

/// Truncation of the single-mode Fock space to levels `0..=max_level`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub max_level: usize,
    pub leak_tolerance: f64,
}

impl Truncation {
    pub fn new(max_level: usize) -> Self {
        Self {
            max_level,
            leak_tolerance: DEFAULT_LEAK_TOLERANCE,
        }
    }

    pub fn with_leak_tolerance(mut self, tolerance: f64) -> Self {
        self.leak_tolerance = tolerance;
        self
    }

    pub fn dim(&self) -> usize {
        self.max_level + 1
    }

    pub(crate) fn check_leak(&self, leak: f64) -> Result<()> {
        if leak > self.leak_tolerance {
            Err(Error::TruncationTooSmall {
                max_level: self.max_level,
                leak,
                tolerance: self.leak_tolerance,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Truncation {
    fn default() -> Self {
        Self::new(DEFAULT_MAX_LEVEL)
    }
}

impl From<usize> for Truncation {
    fn from(max_level: usize) -> Self {
        Self::new(max_level)
    }
}

/// Amplitudes over the number states `|0⟩ … |N⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Vec<Complex64>,
}

impl FockVector {
    /// Wraps raw amplitudes. Panics on an empty vector (N must be ≥ 0).
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        assert!(
            !amps.is_empty(),
            "a Fock vector needs at least the vacuum level"
        );
        Self { amps }
    }

    pub fn number_state(n: usize, max_level: usize) -> Self {
        assert!(
            n <= max_level,
            "number state |{n}⟩ outside truncation {max_level}"
        );
        let mut amps = vec![Complex64::new(0.0, 0.0); max_level + 1];
        amps[n] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn vacuum(max_level: usize) -> Self {
        Self::number_state(0, max_level)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn max_level(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability mass missing from the retained levels, assuming the
    /// untruncated state was normalized.
    pub fn leak(&self) -> f64 {
        1.0 - self.norm_sqr()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::ShapeMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        Self {
            amps: self.amps.iter().map(|a| a / n).collect(),
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            amps: self.amps.iter().map(|a| a * factor).collect(),
        }
    }

    /// Mean photon number `Σ n |c_n|²`.
    pub fn mean_photon_number(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum()
    }
}

/// Unnormalized-by-truncation coherent amplitudes `e^{-|β|²/2} βⁿ/√n!`.
pub(crate) fn coherent_amplitudes(beta: Complex64, max_level: usize) -> Vec<Complex64> {
    let mut amps = Vec::with_capacity(max_level + 1);
    let mut a = Complex64::new((-0.5 * beta.norm_sqr()).exp(), 0.0);
    amps.push(a);
    for n in 0..max_level {
        a = a * beta / ((n + 1) as f64).sqrt();
        amps.push(a);
    }
    amps
}

/// Coherent state `|β⟩` truncated at `trunc`; fails when the discarded tail
/// exceeds the leak tolerance.
pub fn coherent_fock(beta: Complex64, trunc: impl Into<Truncation>) -> Result<FockVector> {
    let trunc = trunc.into();
    let v = FockVector::from_amplitudes(coherent_amplitudes(beta, trunc.max_level));
    trunc.check_leak(v.leak())?;
    Ok(v)
}

/// Two-mode squeezed vacuum `Σ tanhⁿr |n⟩|n⟩ / cosh r`, stored by its Schmidt
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct EprState {
    schmidt: Vec<f64>,
    squeezing: f64,
}

impl EprState {
    pub fn squeezing(&self) -> f64 {
        self.squeezing
    }

    /// Coefficient of `|n⟩|n⟩`.
    pub fn schmidt_coefficients(&self) -> &[f64] {
        &self.schmidt
    }

    pub fn max_level(&self) -> usize {
        self.schmidt.len() - 1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.schmidt.iter().map(|c| c * c).sum()
    }

    pub fn leak(&self) -> f64 {
        1.0 - self.norm_sqr()
    }

    /// Mean photon number of either mode.
    pub fn mean_photon_number(&self) -> f64 {
        self.schmidt
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c * c)
            .sum()
    }

    /// Full amplitude vector over `|m⟩_A|n⟩_B`, index `m·(N+1) + n`.
    pub fn two_mode_amplitudes(&self) -> Vec<Complex64> {
        let dim = self.schmidt.len();
        let mut amps = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (n, c) in self.schmidt.iter().enumerate() {
            amps[n * dim + n] = Complex64::new(*c, 0.0);
        }
        amps
    }
}

pub fn epr_fock(r: f64, trunc: impl Into<Truncation>) -> Result<EprState> {
    if r.is_nan() || r < 0.0 {
        return Err(Error::param(
            "r",
            format!("squeezing must be >= 0, got {r}"),
        ));
    }
    let trunc = trunc.into();
    let t = r.tanh();
    let mut c = 1.0 / r.cosh();
    let mut schmidt = Vec::with_capacity(trunc.dim());
    for _ in 0..trunc.dim() {
        schmidt.push(c);
        c *= t;
    }
    let state = EprState {
        schmidt,
        squeezing: r,
    };
    trunc.check_leak(state.leak())?;
    Ok(state)
}
