//! Two chirped Gaussian wavepackets `ψ±(x) ∝ exp((−a ± ib)x²)`.
//!
//! They have identical position and momentum densities, since they differ only
//! by a local phase in either representation, yet their overlap
//! `|⟨ψ−|ψ+⟩|² = a/√(a²+b²)` goes to zero as `b` grows. Units are the
//! dimensionless conjugate pair `x`, `k`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const QUADRATURE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPairParams {
    a: f64,
    b: f64,
}

impl GaussianPairParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::param("a", format!("must be > 0, got {a}")));
        }
        if !(b >= 0.0 && b.is_finite()) {
            return Err(Error::param("b", format!("must be >= 0, got {b}")));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Standard deviation of `|ψ±(x)|²`.
    pub fn x_sigma(&self) -> f64 {
        0.5 / self.a.sqrt()
    }

    /// Standard deviation of `|ψ̃±(k)|²`.
    pub fn k_sigma(&self) -> f64 {
        ((self.a * self.a + self.b * self.b) / self.a).sqrt()
    }

    /// `ψ±(x)`, sign selected by `plus`.
    pub fn wavefunction(&self, x: f64, plus: bool) -> Complex64 {
        let s = if plus { 1.0 } else { -1.0 };
        let norm = (2.0 * self.a / PI).powf(0.25);
        (Complex64::new(-self.a, s * self.b) * x * x).exp() * norm
    }

    /// `ψ̃±(k)` under the unitary Fourier convention.
    pub fn momentum_wavefunction(&self, k: f64, plus: bool) -> Complex64 {
        let s = if plus { 1.0 } else { -1.0 };
        let (a, b) = (self.a, self.b);
        let d = a * a + b * b;
        let pref = (a / (2.0 * PI)).powf(0.25) * (Complex64::new(a, s * b) / d).sqrt();
        pref * (Complex64::new(-a, -s * b) * k * k / (4.0 * d)).exp()
    }
}

/// `⟨ψ−|ψ+⟩ = √(a(a+ib)/(a²+b²))`.
pub fn gaussian_pair_overlap(p: &GaussianPairParams) -> Complex64 {
    let (a, b) = (p.a, p.b);
    (Complex64::new(a, b) * a / (a * a + b * b)).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairDensities {
    pub x_plus: Vec<f64>,
    pub x_minus: Vec<f64>,
    pub k_plus: Vec<f64>,
    pub k_minus: Vec<f64>,
    /// Trapezoid estimate of `⟨ψ−|ψ+⟩` on the grid.
    pub quadrature_overlap: Complex64,
}

impl PairDensities {
    pub fn max_x_density_diff(&self) -> f64 {
        max_diff(&self.x_plus, &self.x_minus)
    }

    pub fn max_k_density_diff(&self) -> f64 {
        max_diff(&self.k_plus, &self.k_minus)
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Uniform grid over ±`span_sigmas` position standard deviations.
pub fn symmetric_grid(p: &GaussianPairParams, span_sigmas: f64, points: usize) -> Vec<f64> {
    let half = span_sigmas * p.x_sigma();
    let h = 2.0 * half / (points - 1) as f64;
    (0..points).map(|i| -half + i as f64 * h).collect()
}

fn trapezoid<F: Fn(f64) -> Complex64>(grid: &[f64], f: F) -> Complex64 {
    grid.windows(2)
        .map(|w| (f(w[0]) + f(w[1])) * (0.5 * (w[1] - w[0])))
        .sum()
}

/// Position and momentum densities of `ψ±` on `grid`, with a quadrature
/// self-test of the overlap against the closed form.
pub fn gaussian_pair_densities(p: &GaussianPairParams, grid: &[f64]) -> Result<PairDensities> {
    if grid.len() < 3
        || grid
            .windows(2)
            .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
    {
        return Err(Error::param(
            "grid",
            "need at least 3 strictly increasing points",
        ));
    }
    let span = grid[grid.len() - 1] - grid[0];
    if span < 8.0 * p.x_sigma() {
        return Err(Error::param(
            "grid",
            format!("span {span} is narrower than 8 position standard deviations"),
        ));
    }
    let dens = |f: &dyn Fn(f64) -> Complex64| grid.iter().map(|&x| f(x).norm_sqr()).collect();
    let x_plus = dens(&|x| p.wavefunction(x, true));
    let x_minus = dens(&|x| p.wavefunction(x, false));
    let k_plus = dens(&|k| p.momentum_wavefunction(k, true));
    let k_minus = dens(&|k| p.momentum_wavefunction(k, false));
    let quadrature_overlap = trapezoid(grid, |x| {
        p.wavefunction(x, false).conj() * p.wavefunction(x, true)
    });
    let err = (quadrature_overlap - gaussian_pair_overlap(p)).norm();
    if err > QUADRATURE_TOL {
        return Err(Error::GridTooCoarse(err));
    }
    Ok(PairDensities {
        x_plus,
        x_minus,
        k_plus,
        k_minus,
        quadrature_overlap,
    })
}
