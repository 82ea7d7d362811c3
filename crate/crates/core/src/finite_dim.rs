//! Finite-dimensional cheating benchmarks: two equiprobable nonorthogonal
//! qubit states, and Haar-uniform pure states in dimension `d`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mc::{run_chunked, Estimate, SeedStream};
use crate::random::haar_vector;

/// Two real qubit states `|ψ₀⟩ = (1, 0)` and `|ψ₁⟩ = (cos θ, sin θ)`, each
/// sent with probability ½.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStateSet {
    theta: f64,
}

impl TwoStateSet {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= FRAC_PI_2) {
            return Err(Error::ThetaOutOfRange(theta));
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Inner product `x = ⟨ψ₀|ψ₁⟩ = cos θ`.
    pub fn x(&self) -> f64 {
        self.theta.cos()
    }

    pub fn psi0(&self) -> [f64; 2] {
        [1.0, 0.0]
    }

    pub fn psi1(&self) -> [f64; 2] {
        [self.theta.cos(), self.theta.sin()]
    }

    /// Angle by which Bob's output states are rotated toward each other.
    pub fn tweak(&self) -> f64 {
        let s = self.theta.sin();
        if s >= 1.0 {
            return 0.0;
        }
        let t = 2.0 * self.theta;
        0.5 * (t.sin() / ((1.0 + s) / (1.0 - s) + t.cos())).atan()
    }

    /// Bob's outputs: `|ψ̃₀⟩` at angle `φ`, `|ψ̃₁⟩` at angle `θ − φ`.
    pub fn tweaked_states(&self) -> ([f64; 2], [f64; 2]) {
        let phi = self.tweak();
        let b = self.theta - phi;
        ([phi.cos(), phi.sin()], [b.cos(), b.sin()])
    }

    /// `½(1 + √(1 − x² + x⁴))`.
    pub fn cheat_fidelity(&self) -> f64 {
        let x2 = self.x().powi(2);
        0.5 * (1.0 + (1.0 - x2 + x2 * x2).sqrt())
    }
}

pub fn two_state_optimal_angle(theta: f64) -> Result<f64> {
    Ok(TwoStateSet::new(theta)?.tweak())
}

pub fn two_state_cheat_fidelity(theta: f64) -> Result<f64> {
    Ok(TwoStateSet::new(theta)?.cheat_fidelity())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForceResult {
    pub best_fidelity: f64,
    /// Angle of one basis vector of Alice's measurement, reduced to `[0, π/2)`.
    pub best_measurement_angle: f64,
    /// Rotation of Bob's output for the `ψ₀`-like outcome, positive toward `ψ₁`.
    pub best_tweak: f64,
    /// Spacing of the angle grids.
    pub grid_step: f64,
}

/// Exhaustive search over real projective measurements `{e_a, e_a⊥}` and
/// Bob's two real output states, all on a grid of spacing `π/resolution`.
///
/// For a fixed measurement the two outputs decouple, so each is maximized
/// over the grid independently.
pub fn two_state_brute_force(theta: f64, resolution: usize) -> Result<BruteForceResult> {
    TwoStateSet::new(theta)?;
    if resolution < 100 {
        return Err(Error::param(
            "resolution",
            format!("must be at least 100, got {resolution}"),
        ));
    }
    let step = PI / resolution as f64;
    let angles: Vec<f64> = (0..resolution).map(|k| k as f64 * step).collect();
    let trig: Vec<(f64, f64)> = angles.iter().map(|a| (a.cos(), a.sin())).collect();
    let states = [0.0, theta];

    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for &a in &angles {
        // outcome k projects on the vector at angle a + kπ/2
        let mut total = 0.0;
        let mut out_angle = [0.0; 2];
        let mut p_given_psi0 = [0.0; 2];
        for k in 0..2 {
            let e = a + k as f64 * FRAC_PI_2;
            let p: Vec<f64> = states.iter().map(|t| (e - t).cos().powi(2)).collect();
            p_given_psi0[k] = p[0];
            // ½ Σ_i p_i cos²(b − t_i) = ¼ Σ_i p_i (1 + cos 2t_i cos 2b + sin 2t_i sin 2b)
            // with p_i the probability of this outcome given ψ_i
            let (sin0, cos0) = (2.0 * states[0]).sin_cos();
            let (sin1, cos1) = (2.0 * states[1]).sin_cos();
            let cc = p[0] * cos0 + p[1] * cos1;
            let ss = p[0] * sin0 + p[1] * sin1;
            let base = p[0] + p[1];
            let (mut val, mut arg) = (f64::NEG_INFINITY, 0.0);
            for (j, &(cb, sb)) in trig.iter().enumerate() {
                // cos 2b, sin 2b by double angle
                let v = base + cc * (cb * cb - sb * sb) + ss * (2.0 * sb * cb);
                if v > val {
                    val = v;
                    arg = angles[j];
                }
            }
            total += 0.25 * val;
            out_angle[k] = arg;
        }
        if total > best.0 {
            let k0 = if p_given_psi0[0] >= p_given_psi0[1] {
                0
            } else {
                1
            };
            best = (total, a, wrap_half_turn(out_angle[k0]));
        }
    }
    Ok(BruteForceResult {
        best_fidelity: best.0,
        best_measurement_angle: best.1.rem_euclid(FRAC_PI_2),
        best_tweak: best.2,
        grid_step: step,
    })
}

/// Real state angles are defined modulo π; map into `(−π/2, π/2]`.
fn wrap_half_turn(b: f64) -> f64 {
    let w = b.rem_euclid(PI);
    if w > FRAC_PI_2 {
        w - PI
    } else {
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaarBenchConfig {
    pub d: usize,
    pub n_samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaarEstimate {
    /// Estimate of the cheat fidelity, converging to `2/(d+1)`.
    pub fidelity: Estimate,
    /// Estimate of `E[d·|⟨ψ|χ⟩|²]`, which must be 1.
    pub weight: Estimate,
}

/// Measure-and-reprepare with the covariant POVM `{d|χ⟩⟨χ| dχ}`: Bob outputs
/// the measured `|χ⟩`. Sampling `ψ` and `χ` independently from the Haar
/// measure and weighting by the outcome density `d|⟨ψ|χ⟩|²` gives the
/// estimator `d|⟨ψ|χ⟩|⁴`.
pub fn haar_avg_fidelity_mc(cfg: &HaarBenchConfig) -> Result<HaarEstimate> {
    if cfg.d < 1 {
        return Err(Error::DimensionTooSmall);
    }
    if cfg.n_samples < 2 {
        return Err(Error::param("n_samples", "need at least 2 samples"));
    }
    let d = cfg.d;
    let [fid, weight] =
        run_chunked::<2, _>(cfg.n_samples, SeedStream::new(cfg.seed), |rng, acc| {
            let psi = haar_vector(rng, d);
            let chi = haar_vector(rng, d);
            let ov: Complex64 = psi.iter().zip(&chi).map(|(a, b)| a.conj() * b).sum();
            let w = d as f64 * ov.norm_sqr();
            acc[0].push(w * ov.norm_sqr());
            acc[1].push(w);
            Ok(())
        })?;
    Ok(HaarEstimate {
        fidelity: fid.estimate(),
        weight: weight.estimate(),
    })
}
