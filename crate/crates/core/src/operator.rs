//! Dense operators on the truncated Fock space.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{coherent_amplitudes, FockVector};

pub type Matrix = Array2<Complex64>;

/// Relative tolerance for the Hermiticity check.
const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on unit trace and unit norm for the fidelity inputs.
const STATE_TOL: f64 = 1e-9;

/// A Hermitian matrix over `|0⟩ … |N⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    entries: Matrix,
}

impl HermitianOperator {
    /// Checks squareness and `|H_ij − conj(H_ji)| ≤ 1e-12·max|H|`.
    pub fn new(entries: Matrix) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(Error::ShapeMismatch {
                expected: rows,
                found: cols,
            });
        }
        if rows == 0 {
            return Err(Error::param("entries", "empty matrix"));
        }
        let scale = entries.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let asym = hermitian_defect(&entries);
        if asym > HERMITIAN_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self { entries })
    }

    /// Symmetrizes `(M + M†)/2`; for matrices that are Hermitian up to rounding.
    pub fn hermitize(entries: Matrix) -> Self {
        let h = (&entries + &entries.t().mapv(|z| z.conj())) * Complex64::new(0.5, 0.0);
        Self { entries: h }
    }

    pub fn identity(max_level: usize) -> Self {
        Self {
            entries: Matrix::eye(max_level + 1),
        }
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Matrix::zeros((diag.len(), diag.len()));
        for (i, d) in diag.iter().enumerate() {
            m[[i, i]] = Complex64::new(*d, 0.0);
        }
        Self { entries: m }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(psi: &FockVector) -> Self {
        let a = psi.amplitudes();
        let n = a.len();
        Self {
            entries: Matrix::from_shape_fn((n, n), |(i, j)| a[i] * a[j].conj()),
        }
    }

    /// `Σ w_k |ψ_k⟩⟨ψ_k|`.
    pub fn mixture(terms: &[(f64, FockVector)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::param("terms", "empty mixture"))?;
        let mut acc = Self::zeros(first.max_level());
        for (w, psi) in terms {
            acc = acc.add(&Self::projector(psi).scale(*w))?;
        }
        Ok(acc)
    }

    pub fn zeros(max_level: usize) -> Self {
        Self {
            entries: Matrix::zeros((max_level + 1, max_level + 1)),
        }
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn max_level(&self) -> usize {
        self.dim() - 1
    }

    pub fn trace(&self) -> f64 {
        self.entries.diag().iter().map(|z| z.re).sum()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            entries: self.entries.mapv(|z| z * factor),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self {
            entries: &self.entries + &other.entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self {
            entries: &self.entries - &other.entries,
        })
    }

    /// `H|ψ⟩`.
    pub fn apply(&self, psi: &FockVector) -> Result<FockVector> {
        self.check_dim(psi.dim())?;
        let v = ndarray::ArrayView1::from(psi.amplitudes());
        Ok(FockVector::from_amplitudes(self.entries.dot(&v).to_vec()))
    }

    /// `⟨ψ|H|ψ⟩`, real for Hermitian `H`.
    pub fn expectation(&self, psi: &FockVector) -> Result<f64> {
        let hpsi = self.apply(psi)?;
        Ok(psi.inner(&hpsi)?.re)
    }

    /// `tr(H·E)`.
    pub fn trace_product(&self, other: &Self) -> Result<f64> {
        self.check_dim(other.dim())?;
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.entries[[i, j]] * other.entries[[j, i]]).re;
            }
        }
        Ok(acc)
    }

    /// `U H U†`, re-symmetrized against rounding.
    pub fn conjugated_by(&self, u: &Matrix) -> Result<Self> {
        self.check_dim(u.nrows())?;
        let udag = u.t().mapv(|z| z.conj());
        Ok(Self::hermitize(u.dot(&self.entries).dot(&udag)))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other.dim())?;
        Ok(self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            Err(Error::ShapeMismatch {
                expected: self.dim(),
                found,
            })
        } else {
            Ok(())
        }
    }
}

fn hermitian_defect(m: &Matrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    worst
}

/// Fock matrix elements `⟨m|D(ν)|n⟩` of the displacement operator for
/// `m, n ≤ N`.
///
/// For `m ≥ n` the element is `√(n!/m!) ν^{m−n} e^{−|ν|²/2} L_n^{(m−n)}(|ν|²)`,
/// and `⟨m|D(ν)|n⟩ = ⟨n|D(−ν*)|m⟩` covers `m < n`. Along each diagonal the
/// Laguerre recurrence is carried in the scaled variable
/// `t_n = √(n!/(n+k)!)·L_n^{(k)}`, which keeps every term O(1).
///
/// These are the exact elements of the infinite operator, so only the block
/// well inside the truncation is unitary.
pub fn displacement_matrix(nu: Complex64, max_level: usize) -> Matrix {
    let dim = max_level + 1;
    let x = nu.norm_sqr();
    let mut d = Matrix::zeros((dim, dim));
    let lower = coherent_amplitudes(nu, max_level);
    let upper = coherent_amplitudes(-nu.conj(), max_level);
    for k in 0..dim {
        fill_diagonal(&mut d, k, x, lower[k], false);
        if k > 0 {
            fill_diagonal(&mut d, k, x, upper[k], true);
        }
    }
    d
}

/// Fills the `k`-th sub-diagonal (`m = n + k`), or super-diagonal when
/// `transpose` is set, starting from `start = ⟨k|D|0⟩`.
fn fill_diagonal(d: &mut Matrix, k: usize, x: f64, start: Complex64, transpose: bool) {
    let len = d.nrows() - k;
    let kf = k as f64;
    let mut put = |n: usize, v: Complex64| {
        if transpose {
            d[[n, n + k]] = v;
        } else {
            d[[n + k, n]] = v;
        }
    };
    let mut prev = Complex64::new(0.0, 0.0);
    let mut cur = start;
    put(0, cur);
    for n in 0..len.saturating_sub(1) {
        let nf = n as f64;
        let next = (cur * (2.0 * nf + 1.0 + kf - x) - prev * (nf * (nf + kf)).sqrt())
            / ((nf + 1.0) * (nf + 1.0 + kf)).sqrt();
        prev = cur;
        cur = next;
        put(n + 1, cur);
    }
}

/// `⟨ψ|ρ|ψ⟩` for a normalized pure state and a density operator.
pub fn fidelity_pure_mixed(psi: &FockVector, rho: &HermitianOperator) -> Result<f64> {
    if psi.dim() != rho.dim() {
        return Err(Error::ShapeMismatch {
            expected: rho.dim(),
            found: psi.dim(),
        });
    }
    let norm = psi.norm_sqr();
    if (norm - 1.0).abs() > STATE_TOL {
        return Err(Error::param("psi", format!("norm² {norm} is not 1")));
    }
    let tr = rho.trace();
    if (tr - 1.0).abs() > STATE_TOL {
        return Err(Error::param("rho", format!("trace {tr} is not 1")));
    }
    rho.expectation(psi)
}
