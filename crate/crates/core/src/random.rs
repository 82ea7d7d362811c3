//! Random states for property sweeps and the Haar benchmark.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::fock::FockVector;
use crate::measures::Povm;
use crate::operator::HermitianOperator;

/// Complex vector with i.i.d. standard complex Gaussian entries.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

/// Haar-random unit vector in `C^dim`.
pub fn haar_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    let v = complex_gaussian(rng, dim);
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn haar_state<R: Rng + ?Sized>(rng: &mut R, max_level: usize) -> FockVector {
    FockVector::from_amplitudes(haar_vector(rng, max_level + 1))
}

/// Haar-random orthonormal basis (Gram–Schmidt, two passes).
pub fn haar_basis<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut v = complex_gaussian(rng, dim);
        for _ in 0..2 {
            for b in &basis {
                let proj: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= proj * bi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    basis
}

/// Mixture of `rank` Haar pure states with Dirichlet(1,…,1) weights.
pub fn random_density<R: Rng + ?Sized>(
    rng: &mut R,
    max_level: usize,
    rank: usize,
) -> HermitianOperator {
    let raw: Vec<f64> = (0..rank.max(1))
        .map(|_| -rng.random::<f64>().max(f64::MIN_POSITIVE).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    let terms: Vec<(f64, FockVector)> = raw
        .iter()
        .map(|w| (w / total, haar_state(rng, max_level)))
        .collect();
    HermitianOperator::mixture(&terms).expect("non-empty mixture")
}

/// Random POVM on levels `0..=max_level`. Half the draws are rank-one
/// POVMs obtained by compressing a Haar basis of a larger space; the others
/// group a Haar basis into a random number of projectors.
pub fn random_povm<R: Rng + ?Sized>(rng: &mut R, max_level: usize) -> Povm {
    let d = max_level + 1;
    let povm = if rng.random::<bool>() {
        let big = d + rng.random_range(1..=d);
        let vectors: Vec<FockVector> = haar_basis(rng, big)
            .into_iter()
            .map(|v| FockVector::from_amplitudes(v[..d].to_vec()))
            .collect();
        Povm::rank_one(&vectors)
    } else {
        let basis: Vec<FockVector> = haar_basis(rng, d)
            .into_iter()
            .map(FockVector::from_amplitudes)
            .collect();
        let n_groups = rng.random_range(2..=d.max(2));
        let mut groups = vec![Vec::new(); n_groups];
        for k in 0..d {
            groups[rng.random_range(0..n_groups)].push(k);
        }
        groups.retain(|g| !g.is_empty());
        Povm::coarse_grained(&basis, &groups)
    };
    povm.expect("random POVM is complete by construction")
}
