//! Measurement statistics and the overlap–fidelity inequality.
//!
//! For any POVM, the Bhattacharyya overlap of the outcome distributions of
//! `|ψ⟩` and `ρ` satisfies `overlap² ≥ ⟨ψ|ρ|ψ⟩`, with equality for the
//! two-outcome measurement `{|ψ⟩⟨ψ|, I − |ψ⟩⟨ψ|}` when `ψ` is pure.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::eigen;
use crate::error::{Error, Result};
use crate::fock::{coherent_amplitudes, FockVector};
use crate::mc::SeedStream;
use crate::operator::{fidelity_pure_mixed, HermitianOperator};
use crate::random;

const COMPLETENESS_TOL: f64 = 1e-9;
const PSD_TOL: f64 = 1e-10;
const SUM_TOL: f64 = 1e-8;
const BOUND_SLACK: f64 = 1e-9;
/// Negatives below this magnitude are round-off, not an invalid state.
const NEGATIVE_ROUNDOFF: f64 = 1e-12;
/// Probabilities under this are read as exact zeros: a few ulps of 1 would
/// otherwise enter the overlap as their square root.
const ZERO_FLOOR: f64 = 1e-14;

/// Finite-outcome POVM `{E_k}` on a truncated Fock space.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<HermitianOperator>,
    labels: Vec<String>,
}

impl Povm {
    /// Validates positivity of each element and `Σ E_k = I` entrywise.
    pub fn new(elements: Vec<HermitianOperator>, labels: Vec<String>) -> Result<Self> {
        for (k, e) in elements.iter().enumerate() {
            if !eigen::is_psd(e, PSD_TOL)? {
                return Err(Error::InvalidPovm(format!("element {k} is not positive")));
            }
        }
        Self::checked(elements, labels)
    }

    /// Rank-one POVM `{|b_k⟩⟨b_k|}` from an orthonormal basis.
    pub fn projective(basis: &[FockVector]) -> Result<Self> {
        Self::rank_one(basis)
    }

    /// Rank-one POVM `{|v_k⟩⟨v_k|}`; the vectors need not be normalized, only
    /// complete. Positivity holds by construction.
    pub fn rank_one(vectors: &[FockVector]) -> Result<Self> {
        let elements = vectors.iter().map(HermitianOperator::projector).collect();
        let labels = (0..vectors.len()).map(|k| k.to_string()).collect();
        Self::checked(elements, labels)
    }

    /// Sums of projectors onto disjoint groups of an orthonormal basis.
    pub fn coarse_grained(basis: &[FockVector], groups: &[Vec<usize>]) -> Result<Self> {
        let max_level = basis
            .first()
            .ok_or_else(|| Error::InvalidPovm("empty basis".into()))?
            .max_level();
        let mut elements = Vec::with_capacity(groups.len());
        for g in groups {
            let mut e = HermitianOperator::zeros(max_level);
            for &k in g {
                let b = basis
                    .get(k)
                    .ok_or_else(|| Error::InvalidPovm(format!("basis index {k} out of range")))?;
                e = e.add(&HermitianOperator::projector(b))?;
            }
            elements.push(e);
        }
        let labels = (0..groups.len()).map(|k| k.to_string()).collect();
        Self::checked(elements, labels)
    }

    /// `{|ψ⟩⟨ψ|, I − |ψ⟩⟨ψ|}` for a normalized `ψ`.
    pub fn binary(psi: &FockVector) -> Result<Self> {
        let p = HermitianOperator::projector(psi);
        let q = HermitianOperator::identity(psi.max_level()).sub(&p)?;
        Self::checked(vec![p, q], vec!["psi".into(), "complement".into()])
    }

    fn checked(elements: Vec<HermitianOperator>, labels: Vec<String>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidPovm("no elements".into()))?;
        if labels.len() != elements.len() {
            return Err(Error::InvalidPovm("one label per element required".into()));
        }
        let mut total = HermitianOperator::zeros(first.max_level());
        for e in &elements {
            total = total.add(e)?;
        }
        let defect = total.max_abs_diff(&HermitianOperator::identity(first.max_level()))?;
        if defect > COMPLETENESS_TOL {
            return Err(Error::InvalidPovm(format!(
                "elements sum to identity only within {defect:.3e}"
            )));
        }
        Ok(Self { elements, labels })
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn clean_probability(index: usize, p: f64) -> Result<f64> {
    if p < -NEGATIVE_ROUNDOFF {
        Err(Error::NegativeProbability { index, value: p })
    } else if p < ZERO_FLOOR {
        Ok(0.0)
    } else {
        Ok(p)
    }
}

/// `(P_in, P_out)` with `P_in,k = ⟨ψ|E_k|ψ⟩` and `P_out,k = tr(ρ E_k)`.
pub fn outcome_distributions(
    psi_in: &FockVector,
    rho_out: &HermitianOperator,
    povm: &Povm,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut p_in = Vec::with_capacity(povm.len());
    let mut p_out = Vec::with_capacity(povm.len());
    for (k, e) in povm.elements().iter().enumerate() {
        p_in.push(clean_probability(k, e.expectation(psi_in)?)?);
        p_out.push(clean_probability(k, rho_out.trace_product(e)?)?);
    }
    for p in [&p_in, &p_out] {
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > SUM_TOL {
            return Err(Error::NotNormalized(s));
        }
    }
    Ok((p_in, p_out))
}

/// `Σ_k √(P_in,k · P_out,k)`.
pub fn bhattacharyya_overlap(p_in: &[f64], p_out: &[f64]) -> Result<f64> {
    if p_in.len() != p_out.len() {
        return Err(Error::ShapeMismatch {
            expected: p_in.len(),
            found: p_out.len(),
        });
    }
    for p in [p_in, p_out] {
        if let Some((index, &value)) = p.iter().enumerate().find(|(_, v)| **v < 0.0) {
            return Err(Error::NegativeProbability { index, value });
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > SUM_TOL {
            return Err(Error::NotNormalized(s));
        }
    }
    Ok(p_in.iter().zip(p_out).map(|(a, b)| (a * b).sqrt()).sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapCheck {
    pub overlap: f64,
    pub fidelity: f64,
    pub satisfied: bool,
}

pub fn check_overlap_bound(
    psi_in: &FockVector,
    rho_out: &HermitianOperator,
    povm: &Povm,
) -> Result<OverlapCheck> {
    let (p_in, p_out) = outcome_distributions(psi_in, rho_out, povm)?;
    let overlap = bhattacharyya_overlap(&p_in, &p_out)?;
    let fidelity = fidelity_pure_mixed(psi_in, rho_out)?;
    Ok(OverlapCheck {
        overlap,
        fidelity,
        satisfied: overlap * overlap >= fidelity - BOUND_SLACK,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapSweep {
    pub triples: usize,
    pub violations: usize,
    /// Smallest `overlap² − fidelity` seen.
    pub worst_margin: f64,
}

/// Checks the bound on `triples` random (Haar `ψ`, random mixed `ρ` of rank
/// 1 to 4, random POVM) at truncation `max_level`. Triple `i` draws from its
/// own substream, so the result does not depend on scheduling.
pub fn overlap_bound_sweep(triples: usize, max_level: usize, seed: u64) -> Result<OverlapSweep> {
    let streams = SeedStream::new(seed);
    let margins: Vec<Result<(bool, f64)>> = (0..triples)
        .into_par_iter()
        .map(|i| {
            let mut rng = streams.rng(i as u32);
            let psi = random::haar_state(&mut rng, max_level);
            let rank = rng.random_range(1..=4);
            let rho = random::random_density(&mut rng, max_level, rank);
            let povm = random::random_povm(&mut rng, max_level);
            let chk = check_overlap_bound(&psi, &rho, &povm)?;
            Ok((chk.satisfied, chk.overlap * chk.overlap - chk.fidelity))
        })
        .collect();
    let mut sweep = OverlapSweep {
        triples,
        violations: 0,
        worst_margin: f64::INFINITY,
    };
    for m in margins {
        let (ok, margin) = m?;
        sweep.violations += usize::from(!ok);
        sweep.worst_margin = sweep.worst_margin.min(margin);
    }
    Ok(sweep)
}

/// Husimi density `⟨α|ρ|α⟩/π`, the heterodyne outcome density of `ρ`.
pub fn husimi(rho: &HermitianOperator, alpha: Complex64) -> f64 {
    let a = coherent_amplitudes(alpha, rho.max_level());
    let m = rho.entries();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, ai) in a.iter().enumerate() {
        let row: Complex64 = a.iter().enumerate().map(|(j, aj)| m[[i, j]] * aj).sum();
        acc += ai.conj() * row;
    }
    acc.re.max(0.0) / std::f64::consts::PI
}

/// Overlap of the binned heterodyne statistics of `|ψ⟩` and `ρ` on a square
/// of half-width `half_width` with `bins × bins` midpoint cells.
pub fn binned_heterodyne_overlap(
    psi_in: &FockVector,
    rho_out: &HermitianOperator,
    half_width: f64,
    bins: usize,
) -> Result<f64> {
    if psi_in.dim() != rho_out.dim() {
        return Err(Error::ShapeMismatch {
            expected: rho_out.dim(),
            found: psi_in.dim(),
        });
    }
    let rho_in = HermitianOperator::projector(psi_in);
    let h = 2.0 * half_width / bins as f64;
    let mut acc = 0.0;
    for i in 0..bins {
        let x = -half_width + (i as f64 + 0.5) * h;
        for j in 0..bins {
            let y = -half_width + (j as f64 + 0.5) * h;
            let alpha = Complex64::new(x, y);
            acc += (husimi(&rho_in, alpha) * husimi(rho_out, alpha)).sqrt();
        }
    }
    Ok(acc * h * h)
}

/// Heterodyne overlap with the bin count doubled until successive values
/// differ by less than `1e-6`.
pub fn heterodyne_overlap(
    psi_in: &FockVector,
    rho_out: &HermitianOperator,
    half_width: f64,
) -> Result<f64> {
    let mut bins = 32;
    let mut prev = binned_heterodyne_overlap(psi_in, rho_out, half_width, bins)?;
    let mut change = f64::INFINITY;
    while bins < 1024 {
        bins *= 2;
        let next = binned_heterodyne_overlap(psi_in, rho_out, half_width, bins)?;
        change = (next - prev).abs();
        if change < 1e-6 {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNotConverged(change))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::coherent_fock;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn vacuum_povm(n: usize) -> Povm {
        Povm::binary(&FockVector::vacuum(n)).unwrap()
    }

    #[test]
    fn identical_states_identical_statistics() {
        let psi = FockVector::vacuum(5);
        let rho = HermitianOperator::projector(&psi);
        let (pi, po) = outcome_distributions(&psi, &rho, &vacuum_povm(5)).unwrap();
        assert_eq!(pi, vec![1.0, 0.0]);
        assert_eq!(po, vec![1.0, 0.0]);
    }

    #[test]
    fn orthogonal_output() {
        let psi = FockVector::vacuum(5);
        let rho = HermitianOperator::projector(&FockVector::number_state(1, 5));
        let (pi, po) = outcome_distributions(&psi, &rho, &vacuum_povm(5)).unwrap();
        assert_eq!(pi, vec![1.0, 0.0]);
        assert_eq!(po, vec![0.0, 1.0]);
    }

    #[test]
    fn mixed_output_by_direct_trace() {
        let psi = FockVector::vacuum(5);
        let rho = HermitianOperator::mixture(&[
            (0.5, FockVector::vacuum(5)),
            (0.5, FockVector::number_state(1, 5)),
        ])
        .unwrap();
        let (_, po) = outcome_distributions(&psi, &rho, &vacuum_povm(5)).unwrap();
        // tr(ρ|0⟩⟨0|) = ρ_00
        assert!((po[0] - rho.entries()[[0, 0]].re).abs() < 1e-15);
        assert!((po[0] - 0.5).abs() < 1e-15 && (po[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bhattacharyya_examples() {
        let p = [0.2, 0.3, 0.5];
        assert!((bhattacharyya_overlap(&p, &p).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(
            bhattacharyya_overlap(&[1.0, 0.0], &[0.0, 1.0]).unwrap(),
            0.0
        );
        let f = 0.37;
        let o = bhattacharyya_overlap(&[1.0, 0.0], &[f, 1.0 - f]).unwrap();
        assert!((o - f.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bhattacharyya_rejects_bad_input() {
        assert!(matches!(
            bhattacharyya_overlap(&[1.1, -0.1], &[0.5, 0.5]),
            Err(Error::NegativeProbability { index: 1, .. })
        ));
        assert!(matches!(
            bhattacharyya_overlap(&[0.5, 0.4], &[0.5, 0.5]),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn binary_projector_saturates_bound() {
        let psi = FockVector::vacuum(30);
        let rho = HermitianOperator::projector(&coherent_fock(c(1.0, 0.0), 30).unwrap());
        let chk = check_overlap_bound(&psi, &rho, &Povm::binary(&psi).unwrap()).unwrap();
        assert!((chk.overlap.powi(2) - (-1.0f64).exp()).abs() < 1e-9);
        assert!((chk.overlap.powi(2) - chk.fidelity).abs() < 1e-9);
        assert!(chk.satisfied);
    }

    #[test]
    fn equal_pure_states() {
        let psi = coherent_fock(c(0.5, 0.5), 20).unwrap();
        let rho = HermitianOperator::projector(&psi);
        let chk = check_overlap_bound(&psi, &rho, &vacuum_povm(20)).unwrap();
        assert!((chk.overlap - 1.0).abs() < 1e-12);
        assert!((chk.fidelity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn incomplete_povm_rejected() {
        let e = HermitianOperator::projector(&FockVector::vacuum(3));
        assert!(matches!(
            Povm::new(vec![e], vec!["0".into()]),
            Err(Error::InvalidPovm(_))
        ));
    }

    #[test]
    fn non_positive_element_rejected() {
        let p0 = HermitianOperator::projector(&FockVector::vacuum(1));
        let p1 = HermitianOperator::projector(&FockVector::number_state(1, 1));
        // {2|0⟩⟨0|, |1⟩⟨1| − |0⟩⟨0|} sums to I but the second is indefinite
        let bad = p1.sub(&p0).unwrap();
        let res = Povm::new(vec![p0.scale(2.0), bad], vec!["a".into(), "b".into()]);
        assert!(matches!(res, Err(Error::InvalidPovm(_))));
    }

    #[test]
    fn heterodyne_overlap_of_coherent_pair() {
        // Husimi functions of |β⟩ and |γ⟩ are Gaussians of unit variance per
        // quadrature-pair; their Bhattacharyya overlap is e^{-|β−γ|²/4}.
        let n = 30;
        let psi = coherent_fock(c(0.5, 0.0), n).unwrap();
        let rho = HermitianOperator::projector(&coherent_fock(c(-0.5, 0.5), n).unwrap());
        let got = heterodyne_overlap(&psi, &rho, 6.0).unwrap();
        let d2: f64 = 1.0 + 0.25;
        assert!((got - (-d2 / 4.0).exp()).abs() < 1e-5, "{got}");
        let fid = fidelity_pure_mixed(&psi, &rho).unwrap();
        assert!(got * got >= fid);
    }
}
