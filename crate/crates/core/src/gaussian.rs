//! Gaussian-state model of coherent-state teleportation through a two-mode
//! squeezed resource.
//!
//! Quadratures are ordered `(x₁, p₁, x₂, p₂)`; vacuum covariance is `½·I`.
//! Alice mixes the input with her half of the resource and measures
//! `x_in − x_a` and `p_in + p_a`; Bob displaces his mode by `g` times the
//! results, so `x_out = x_b + g(x_in − x_a)` and `p_out = p_b + g(p_in + p_a)`.

use ndarray::{arr2, Array1, Array2};
use num_complex::Complex64;

use crate::eigen::eigh;
use crate::error::{Error, Result};
use crate::fock::{coherent_fock, Truncation};
use crate::operator::{displacement_matrix, fidelity_pure_mixed, HermitianOperator, Matrix};

/// Slack on the uncertainty relation, `ν ≥ ½ − UNCERTAINTY_SLACK`.
pub const UNCERTAINTY_SLACK: f64 = 1e-10;
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: Array1<f64>,
    cov: Array2<f64>,
}

impl GaussianState {
    /// Validates shape, symmetry and the uncertainty relation.
    pub fn new(mean: Array1<f64>, cov: Array2<f64>) -> Result<Self> {
        let n = mean.len();
        if n != 2 && n != 4 {
            return Err(Error::param(
                "mean",
                format!("need 2 or 4 entries, got {n}"),
            ));
        }
        if cov.dim() != (n, n) {
            return Err(Error::ShapeMismatch {
                expected: n,
                found: cov.nrows(),
            });
        }
        let asym = (&cov - &cov.t()).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if asym > SYMMETRY_TOL * (1.0 + cov.iter().fold(0.0f64, |m, v| m.max(v.abs()))) {
            return Err(Error::param(
                "cov",
                format!("not symmetric (asymmetry {asym:.3e})"),
            ));
        }
        let st = Self { mean, cov };
        let nu_min = st
            .symplectic_eigenvalues()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if nu_min.is_nan() || nu_min < 0.5 - UNCERTAINTY_SLACK {
            return Err(Error::param(
                "cov",
                format!("violates the uncertainty relation (symplectic eigenvalue {nu_min})"),
            ));
        }
        Ok(st)
    }

    pub fn vacuum() -> Self {
        Self::thermal(Complex64::new(0.0, 0.0), 0.0)
    }

    /// Coherent state `|β⟩`: mean `√2(Re β, Im β)`, covariance `½I`.
    pub fn coherent(beta: Complex64) -> Self {
        Self::thermal(beta, 0.0)
    }

    /// Displaced thermal state with occupation `n̄`, covariance `(½ + n̄)I`.
    pub fn thermal(beta: Complex64, n_bar: f64) -> Self {
        Self {
            mean: quadrature_mean(beta),
            cov: Array2::eye(2) * (0.5 + n_bar),
        }
    }

    pub fn mean(&self) -> &Array1<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &Array2<f64> {
        &self.cov
    }

    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }

    /// Complex amplitude `⟨a⟩` of a single-mode state.
    pub fn amplitude(&self) -> Complex64 {
        Complex64::new(self.mean[0], self.mean[1]) / 2f64.sqrt()
    }

    fn block(&self, i: usize, j: usize) -> Array2<f64> {
        self.cov
            .slice(ndarray::s![2 * i..2 * i + 2, 2 * j..2 * j + 2])
            .to_owned()
    }

    /// `⟨a†a⟩` of one mode: `(V_xx + V_pp + x̄² + p̄²)/2 − ½`.
    pub fn mean_photon_number(&self, mode: usize) -> f64 {
        let b = self.block(mode, mode);
        let (x, p) = (self.mean[2 * mode], self.mean[2 * mode + 1]);
        0.5 * (b[[0, 0]] + b[[1, 1]] + x * x + p * p) - 0.5
    }

    /// Symplectic spectrum in ascending order; every entry is ½ for a pure
    /// state.
    ///
    /// Two-mode values are the positive eigenvalues of the Hermitian matrix
    /// `V^{1/2}(iΩ)V^{1/2}`, which stays accurate when they are degenerate.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        if self.modes() == 1 {
            return Ok(vec![det2(&self.cov).max(0.0).sqrt()]);
        }
        let v = HermitianOperator::hermitize(self.cov.mapv(|x| Complex64::new(x, 0.0)));
        let dec = eigh(&v)?;
        let mut root = Matrix::zeros((4, 4));
        for (k, &lam) in dec.values.iter().enumerate() {
            let col = dec.vectors.column(k);
            let w = lam.max(0.0).sqrt();
            for i in 0..4 {
                for j in 0..4 {
                    root[[i, j]] += col[i] * col[j].conj() * w;
                }
            }
        }
        let mut i_omega = Matrix::zeros((4, 4));
        for m in 0..2 {
            i_omega[[2 * m, 2 * m + 1]] = Complex64::new(0.0, 1.0);
            i_omega[[2 * m + 1, 2 * m]] = Complex64::new(0.0, -1.0);
        }
        let h = HermitianOperator::hermitize(root.dot(&i_omega).dot(&root));
        let values = eigh(&h)?.values;
        Ok(values[2..].to_vec())
    }

    /// Reduced state of one mode.
    pub fn reduced(&self, mode: usize) -> GaussianState {
        GaussianState {
            mean: self
                .mean
                .slice(ndarray::s![2 * mode..2 * mode + 2])
                .to_owned(),
            cov: self.block(mode, mode),
        }
    }
}

fn quadrature_mean(beta: Complex64) -> Array1<f64> {
    Array1::from(vec![2f64.sqrt() * beta.re, 2f64.sqrt() * beta.im])
}

fn det2(m: &Array2<f64>) -> f64 {
    m[[0, 0]] * m[[1, 1]] - m[[0, 1]] * m[[1, 0]]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeleportParams {
    r: f64,
    gain: f64,
}

impl TeleportParams {
    pub fn new(r: f64, gain: f64) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::param("r", format!("must be >= 0, got {r}")));
        }
        if !(gain >= 0.0 && gain.is_finite()) {
            return Err(Error::param("gain", format!("must be >= 0, got {gain}")));
        }
        Ok(Self { r, gain })
    }

    pub fn unit_gain(r: f64) -> Result<Self> {
        Self::new(r, 1.0)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }
}

/// Two-mode squeezed vacuum with squeezing `r`.
pub fn epr_gaussian(r: f64) -> Result<GaussianState> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::param("r", format!("must be >= 0, got {r}")));
    }
    let (c, s) = (0.5 * (2.0 * r).cosh(), 0.5 * (2.0 * r).sinh());
    let cov = arr2(&[
        [c, 0.0, s, 0.0],
        [0.0, c, 0.0, -s],
        [s, 0.0, c, 0.0],
        [0.0, -s, 0.0, c],
    ]);
    Ok(GaussianState {
        mean: Array1::zeros(4),
        cov,
    })
}

/// Teleports an arbitrary single-mode Gaussian input. The joint state
/// `input ⊗ resource` is pushed through the linear map of the protocol.
pub fn bk_teleport(input: &GaussianState, p: TeleportParams) -> Result<GaussianState> {
    if input.modes() != 1 {
        return Err(Error::ShapeMismatch {
            expected: 2,
            found: input.mean.len(),
        });
    }
    let epr = epr_gaussian(p.r)?;
    let mut joint = Array2::<f64>::zeros((6, 6));
    joint.slice_mut(ndarray::s![0..2, 0..2]).assign(&input.cov);
    joint.slice_mut(ndarray::s![2..6, 2..6]).assign(&epr.cov);
    let mut joint_mean = Array1::<f64>::zeros(6);
    joint_mean.slice_mut(ndarray::s![0..2]).assign(&input.mean);

    let g = p.gain;
    // rows: x_out = g x_in − g x_a + x_b ; p_out = g p_in + g p_a + p_b
    let l = arr2(&[[g, 0.0, -g, 0.0, 1.0, 0.0], [0.0, g, 0.0, g, 0.0, 1.0]]);
    let cov = l.dot(&joint).dot(&l.t());
    let mean = l.dot(&joint_mean);
    GaussianState::new(mean, cov)
}

pub fn bk_teleport_coherent(beta: Complex64, p: TeleportParams) -> Result<GaussianState> {
    bk_teleport(&GaussianState::coherent(beta), p)
}

/// Added noise per quadrature, `½[(1+g²)cosh 2r − 2g sinh 2r]`; at unit gain
/// this is `e^{−2r}`.
pub fn teleport_added_noise(p: TeleportParams) -> f64 {
    let (g, r) = (p.gain, p.r);
    0.5 * ((1.0 + g * g) * (2.0 * r).cosh() - 2.0 * g * (2.0 * r).sinh())
}

/// `⟨β|ρ|β⟩` for a single-mode Gaussian `ρ`:
/// `exp(−½ δᵀ(V + ½I)⁻¹ δ)/√det(V + ½I)` with `δ` the mean offset.
pub fn coherent_vs_gaussian_fidelity(beta: Complex64, st: &GaussianState) -> Result<f64> {
    if st.modes() != 1 {
        return Err(Error::ShapeMismatch {
            expected: 2,
            found: st.mean.len(),
        });
    }
    let s = &st.cov + &(Array2::<f64>::eye(2) * 0.5);
    let det = det2(&s);
    let d = &st.mean - &quadrature_mean(beta);
    // δᵀ S⁻¹ δ with the 2×2 adjugate
    let quad =
        (s[[1, 1]] * d[0] * d[0] - 2.0 * s[[0, 1]] * d[0] * d[1] + s[[0, 0]] * d[1] * d[1]) / det;
    Ok((-0.5 * quad).exp() / det.sqrt())
}

/// Fidelity of teleporting the vacuum at each `r`. At unit gain it is the
/// same for every coherent input, `1/(1 + e^{−2r})`.
pub fn fidelity_vs_r_curve(r_grid: &[f64], gain: f64) -> Result<Vec<f64>> {
    let zero = Complex64::new(0.0, 0.0);
    r_grid
        .iter()
        .map(|&r| {
            let out = bk_teleport_coherent(zero, TeleportParams::new(r, gain)?)?;
            coherent_vs_gaussian_fidelity(zero, &out)
        })
        .collect()
}

/// Unit-gain fidelity in closed form.
pub fn unit_gain_fidelity(r: f64) -> f64 {
    1.0 / (1.0 + (-2.0 * r).exp())
}

/// Squeezing at which the unit-gain fidelity reaches `target ∈ [½, 1)`.
pub fn squeezing_for_fidelity(target: f64) -> Result<f64> {
    if !(0.5..1.0).contains(&target) {
        return Err(Error::param(
            "target",
            format!("must lie in [0.5, 1), got {target}"),
        ));
    }
    Ok(-0.5 * (1.0 / target - 1.0).ln())
}

/// Builds `D(β) ρ_th D†(β)` with `n̄ = e^{−2r}` in Fock space and evaluates
/// `⟨β|ρ|β⟩` directly.
pub fn fock_cross_check(beta: Complex64, r: f64, trunc: impl Into<Truncation>) -> Result<f64> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::param("r", format!("must be >= 0, got {r}")));
    }
    let trunc = trunc.into();
    let n_bar = (-2.0 * r).exp();
    let q = n_bar / (1.0 + n_bar);
    trunc.check_leak(q.powi(trunc.max_level as i32 + 1))?;
    let psi = coherent_fock(beta, trunc)?;
    let weights: Vec<f64> = (0..trunc.dim())
        .scan(1.0 / (1.0 + n_bar), |w, _| {
            let cur = *w;
            *w *= q;
            Some(cur)
        })
        .collect();
    let thermal = HermitianOperator::diagonal(&weights);
    let rho = thermal.conjugated_by(&displacement_matrix(beta, trunc.max_level))?;
    // remove the residual truncation loss before the trace check
    let rho = rho.scale(1.0 / rho.trace());
    fidelity_pure_mixed(&psi, &rho)
}
