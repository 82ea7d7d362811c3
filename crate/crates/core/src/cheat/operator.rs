//! The operator `Ô_α = ∫ exp(−(1+λ)|β|² + 2 Re(α*β)) |β⟩⟨β| d²β` whose top
//! eigenvector is Bob's best repreparation for heterodyne outcome `α`.
//!
//! It equals `e^{|α|²/(1+λ)} D(ν) P̂ D†(ν)` with `ν = α/(1+λ)` and
//! `P̂ = π Σ (2+λ)^{−(n+1)} |n⟩⟨n|`, so `μ₁(Ô_α) = e^{|α|²/(1+λ)} π/(2+λ)` with
//! eigenvector `|ν⟩`. Both the displaced-diagonal form and a direct phase-space
//! quadrature are provided.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::eigen::top_eigenpair;
use crate::error::{Error, Result};
use crate::fock::{coherent_fock, Truncation};
use crate::operator::{displacement_matrix, HermitianOperator, Matrix};
use crate::quadrature::gauss_legendre;

/// Refinement stops once successive grids agree entrywise to this.
const QUAD_SETTLE: f64 = 1e-9;
/// Larger final changes are reported as non-convergence.
const QUAD_FAIL: f64 = 1e-6;
const MAX_RADIAL_NODES: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorMethod {
    ClosedForm,
    Quadrature,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::LambdaNonPositive(lambda));
    }
    Ok(())
}

/// `P̂` truncated to levels `0..=max_level`.
pub fn prior_operator(lambda: f64, max_level: usize) -> Result<HermitianOperator> {
    check_lambda(lambda)?;
    let diag: Vec<f64> = (0..=max_level)
        .scan(PI, |w, _| {
            *w /= 2.0 + lambda;
            Some(*w)
        })
        .collect();
    Ok(HermitianOperator::diagonal(&diag))
}

pub fn build_o_alpha(
    alpha: Complex64,
    lambda: f64,
    trunc: impl Into<Truncation>,
    method: OperatorMethod,
) -> Result<HermitianOperator> {
    check_lambda(lambda)?;
    let trunc = trunc.into();
    let nu = alpha / (1.0 + lambda);
    // the optimal output must itself fit in the truncation
    coherent_fock(nu, trunc)?;
    match method {
        OperatorMethod::ClosedForm => closed_form(alpha, lambda, trunc.max_level),
        OperatorMethod::Quadrature => quadrature(alpha, lambda, trunc.max_level),
    }
}

fn closed_form(alpha: Complex64, lambda: f64, max_level: usize) -> Result<HermitianOperator> {
    let nu = alpha / (1.0 + lambda);
    let d = displacement_matrix(nu, max_level);
    let q = prior_operator(lambda, max_level)?.conjugated_by(&d)?;
    Ok(q.scale((alpha.norm_sqr() / (1.0 + lambda)).exp()))
}

fn quadrature(alpha: Complex64, lambda: f64, max_level: usize) -> Result<HermitianOperator> {
    // Envelope of the integrand is bounded by exp(−(1+λ)(r − |ν|)² + |α|²/(1+λ)),
    // so beyond |ν| + √(45/(1+λ)) it is e^{−45} below the peak.
    let radius = alpha.norm() / (1.0 + lambda) + (45.0 / (1.0 + lambda)).sqrt();
    let mut n_r = 64;
    let mut n_theta = 2 * (max_level + 1) + 64;
    let mut prev = polar_grid(alpha, lambda, max_level, radius, n_r, n_theta);
    let mut change = f64::INFINITY;
    while n_r < MAX_RADIAL_NODES {
        n_r *= 2;
        n_theta *= 2;
        let next = polar_grid(alpha, lambda, max_level, radius, n_r, n_theta);
        change = max_entry_diff(&prev, &next);
        prev = next;
        if change <= QUAD_SETTLE {
            break;
        }
    }
    if change > QUAD_FAIL {
        return Err(Error::QuadratureNotConverged(change));
    }
    Ok(HermitianOperator::hermitize(prev))
}

fn max_entry_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Polar-grid evaluation: Gauss–Legendre in `r ∈ [0, radius]`, trapezoid in
/// angle. With `β = r e^{iθ}`,
/// `⟨m|Ô_α|n⟩ = ∫ r dr dθ e^{−(2+λ)r² + 2 Re(α*β)} rᵐ⁺ⁿ e^{i(m−n)θ} / √(m!n!)`,
/// so the angle integral reduces to Fourier sums `G_k(r)`.
fn polar_grid(
    alpha: Complex64,
    lambda: f64,
    max_level: usize,
    radius: f64,
    n_r: usize,
    n_theta: usize,
) -> Matrix {
    let dim = max_level + 1;
    let (nodes, weights) = gauss_legendre(n_r, 0.0, radius);
    let dtheta = 2.0 * PI / n_theta as f64;
    let phases: Vec<Complex64> = (0..n_theta)
        .map(|j| Complex64::from_polar(1.0, j as f64 * dtheta))
        .collect();

    let mut out = Matrix::zeros((dim, dim));
    let mut fourier = vec![Complex64::new(0.0, 0.0); dim];
    let mut scaled = vec![0.0; dim];
    let mut terms = vec![Complex64::new(0.0, 0.0); n_theta];
    for (&r, &w) in nodes.iter().zip(&weights) {
        // G_k = Σ_j e^{2 Re(α* r e^{iθ_j})} e^{ikθ_j} dθ, k ≥ 0; G_{−k} = conj(G_k)
        for (t, ph) in terms.iter_mut().zip(&phases) {
            let beta = ph * r;
            *t = Complex64::new((2.0 * (alpha.conj() * beta).re).exp() * dtheta, 0.0);
        }
        for g in fourier.iter_mut() {
            *g = terms.iter().sum();
            for (t, ph) in terms.iter_mut().zip(&phases) {
                *t *= ph;
            }
        }
        // s_m = e^{−(2+λ)r²/2} rᵐ/√m!
        let mut s = (-0.5 * (2.0 + lambda) * r * r).exp();
        for (m, v) in scaled.iter_mut().enumerate() {
            if m > 0 {
                s *= r / (m as f64).sqrt();
            }
            *v = s;
        }
        let jac = w * r;
        for m in 0..dim {
            for n in 0..dim {
                let g = if m >= n {
                    fourier[m - n]
                } else {
                    fourier[n - m].conj()
                };
                out[[m, n]] += g * (jac * scaled[m] * scaled[n]);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalEigenCheck {
    pub mu1: f64,
    pub mu1_analytic: f64,
    pub relative_error: f64,
    /// `|⟨v|α/(1+λ)⟩|²` for the computed top eigenvector `v`.
    pub match_fidelity: f64,
}

/// Diagonalizes `Ô_α` and compares its top eigenpair with
/// `e^{|α|²/(1+λ)} π/(2+λ)` and `|α/(1+λ)⟩`.
pub fn verify_optimal_eigenvector(
    alpha: Complex64,
    lambda: f64,
    trunc: impl Into<Truncation>,
    method: OperatorMethod,
) -> Result<OptimalEigenCheck> {
    let trunc = trunc.into();
    let op = build_o_alpha(alpha, lambda, trunc, method)?;
    let (mu1, v) = top_eigenpair(&op)?;
    let mu1_analytic = (alpha.norm_sqr() / (1.0 + lambda)).exp() * PI / (2.0 + lambda);
    let target = coherent_fock(alpha / (1.0 + lambda), trunc)?;
    Ok(OptimalEigenCheck {
        mu1,
        mu1_analytic,
        relative_error: (mu1 - mu1_analytic).abs() / mu1_analytic,
        match_fidelity: v.inner(&target)?.norm_sqr(),
    })
}
