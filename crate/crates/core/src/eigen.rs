//! Dense Hermitian eigen-decomposition by cyclic complex Jacobi rotations.
//!
//! Matrices here are at most a few hundred levels, where Jacobi is accurate to
//! working precision on every eigenvalue, including the tiny ones that decide
//! positive semi-definiteness.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::operator::HermitianOperator;

const MAX_SWEEPS: usize = 100;
const RESIDUAL_TOL: f64 = 1e-9;
/// Eigenvalues closer than this (relative to the spectral radius) are ties.
const TIE_TOL: f64 = 1e-12;

/// Eigenvalues in ascending order; `vectors` column `k` belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Array2<Complex64>,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> FockVector {
        FockVector::from_amplitudes(self.vectors.column(k).to_vec())
    }

    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Full spectrum of `h`.
pub fn eigh(h: &HermitianOperator) -> Result<EigenDecomposition> {
    let mut a = h.entries().clone();
    let n = a.nrows();
    let mut v = Array2::<Complex64>::eye(n);
    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if total == 0.0 {
        return Ok(EigenDecomposition {
            values: vec![0.0; n],
            vectors: v,
        });
    }

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= 1e-15 * total {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off / total,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q, total);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[[i, i]].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = Array2::from_shape_fn((n, n), |(r, c)| v[[r, order[c]]]);
    Ok(EigenDecomposition { values, vectors })
}

fn off_diagonal_norm(a: &Array2<Complex64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[[i, j]].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One Jacobi rotation annihilating `a[p][q]`.
fn rotate(a: &mut Array2<Complex64>, v: &mut Array2<Complex64>, p: usize, q: usize, total: f64) {
    let b = a[[p, q]];
    let mag = b.norm();
    if mag <= 1e-300 || mag <= 1e-18 * total {
        return;
    }
    let phase = b / mag;
    let theta = (a[[q, q]].re - a[[p, p]].re) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = diag(1, e^{-iφ})·[[c, s], [-s, c]]
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.nrows();
    for k in 0..n {
        let akp = a[[k, p]];
        let akq = a[[k, q]];
        a[[k, p]] = akp * jpp + akq * jqp;
        a[[k, q]] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[[p, k]];
        let aqk = a[[q, k]];
        a[[p, k]] = jpp.conj() * apk + jqp.conj() * aqk;
        a[[q, k]] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[[p, q]] = Complex64::new(0.0, 0.0);
    a[[q, p]] = Complex64::new(0.0, 0.0);
    a[[p, p]] = Complex64::new(a[[p, p]].re, 0.0);
    a[[q, q]] = Complex64::new(a[[q, q]].re, 0.0);
    for k in 0..n {
        let vkp = v[[k, p]];
        let vkq = v[[k, q]];
        v[[k, p]] = vkp * jpp + vkq * jqp;
        v[[k, q]] = vkp * jpq + vkq * jqq;
    }
}

/// Index of the largest-magnitude component, lowest index on ties.
fn dominant_index(v: &[Complex64]) -> usize {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mag * (1.0 + 1e-12) {
            best = i;
            best_mag = m;
        }
    }
    best
}

/// Largest eigenvalue and a unit eigenvector whose largest-magnitude
/// component is real and positive.
///
/// Among (numerically) degenerate top eigenvalues the eigenvector whose
/// dominant component has the lowest Fock index is returned.
pub fn top_eigenpair(h: &HermitianOperator) -> Result<(f64, FockVector)> {
    let dec = eigh(h)?;
    let n = dec.values.len();
    let top = dec.values[n - 1];
    let scale = dec.spectral_radius().max(f64::MIN_POSITIVE);
    let pick = (0..n)
        .filter(|&k| top - dec.values[k] <= TIE_TOL * scale)
        .min_by_key(|&k| (dominant_index(&dec.vectors.column(k).to_vec()), k))
        .unwrap_or(n - 1);
    let amps = dec.vectors.column(pick).to_vec();
    let lead = amps[dominant_index(&amps)];
    let phase = lead.conj() / lead.norm();
    let v = FockVector::from_amplitudes(amps.iter().map(|z| z * phase).collect());

    let hv = h.apply(&v)?;
    let residual = hv
        .amplitudes()
        .iter()
        .zip(v.amplitudes())
        .map(|(a, b)| (a - b * top).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > RESIDUAL_TOL * scale {
        return Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            residual: residual / scale,
        });
    }
    Ok((top, v))
}

/// Smallest eigenvalue.
pub fn min_eigenvalue(h: &HermitianOperator) -> Result<f64> {
    Ok(eigh(h)?.values[0])
}

/// `λ_min ≥ −tol·max(|λ_max|, tiny)`.
pub fn is_psd(h: &HermitianOperator, tol: f64) -> Result<bool> {
    let dec = eigh(h)?;
    let top = dec.values.last().copied().unwrap_or(0.0).abs();
    Ok(dec.values[0] >= -tol * top.max(f64::MIN_POSITIVE))
}
