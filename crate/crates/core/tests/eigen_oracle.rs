use cvtele_core::eigen::{eigh, top_eigenpair};
use cvtele_core::mc::SeedStream;
use cvtele_core::random::complex_gaussian;
use cvtele_core::{Complex64, HermitianOperator};
use nalgebra::DMatrix;
use ndarray::Array2;

fn random_hermitian(seed: u64, n: usize) -> Array2<Complex64> {
    let mut rng = SeedStream::new(seed).rng(0);
    let raw = complex_gaussian(&mut rng, n * n);
    let a = Array2::from_shape_vec((n, n), raw).unwrap();
    let h = &a + &a.t().mapv(|z| z.conj());
    h.mapv(|z| z * 0.5)
}

fn to_nalgebra(m: &Array2<Complex64>) -> DMatrix<Complex64> {
    let n = m.nrows();
    DMatrix::from_fn(n, n, |i, j| m[[i, j]])
}

#[test]
fn eigenvalues_match_nalgebra() {
    for seed in 0..5 {
        let m = random_hermitian(seed, 30);
        let ours = eigh(&HermitianOperator::new(m.clone()).unwrap()).unwrap();
        let mut theirs: Vec<f64> = to_nalgebra(&m)
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        theirs.sort_by(f64::total_cmp);
        for (a, b) in ours.values.iter().zip(&theirs) {
            assert!((a - b).abs() <= 1e-10, "seed {seed}: {a} vs {b}");
        }
    }
}

#[test]
fn top_eigenvector_residual_and_oracle_agreement() {
    let m = random_hermitian(42, 30);
    let op = HermitianOperator::new(m.clone()).unwrap();
    let (mu, v) = top_eigenpair(&op).unwrap();
    let hv = op.apply(&v).unwrap();
    let resid = hv
        .amplitudes()
        .iter()
        .zip(v.amplitudes())
        .map(|(a, b)| (a - b * mu).norm())
        .fold(0.0, f64::max);
    assert!(resid <= 1e-9 * mu.abs().max(1.0), "{resid}");

    let eig = to_nalgebra(&m).symmetric_eigen();
    let k = eig.eigenvalues.imax();
    let col = eig.eigenvectors.column(k);
    let overlap: Complex64 = v
        .amplitudes()
        .iter()
        .zip(col.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    assert!((overlap.norm() - 1.0).abs() < 1e-10);
}
