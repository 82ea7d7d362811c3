//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use cvtele_core::cheat::{
    build_o_alpha, extrapolate_to_flat_prior, mc_average_fidelity, verify_optimal_eigenvector,
    CheatStrategy, GaussianPrior, OperatorMethod,
};
use cvtele_core::finite_dim::{
    haar_avg_fidelity_mc, two_state_brute_force, HaarBenchConfig, TwoStateSet,
};
use cvtele_core::gaussian::{
    bk_teleport_coherent, coherent_vs_gaussian_fidelity, fock_cross_check, TeleportParams,
};
use cvtele_core::gaussian_pair::{gaussian_pair_densities, symmetric_grid, GaussianPairParams};
use cvtele_core::mc::{Estimate, SeedStream};
use cvtele_core::measures::{check_overlap_bound, overlap_bound_sweep, Povm};
use cvtele_core::random::{haar_state, random_density};
use cvtele_core::verdict::{verdict, Verdict, DEFAULT_CONFIDENCE_Z};
use cvtele_core::Complex64;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fmax(lambda: f64) -> f64 {
    (1.0 + lambda) / (2.0 + lambda)
}

fn optimal_mc(lambda: f64, n: usize, stream: SeedStream) -> Result<Estimate, String> {
    let prior = GaussianPrior::new(lambda).map_err(|e| e.to_string())?;
    mc_average_fidelity(&prior, &CheatStrategy::optimal(&prior), n, stream)
        .map_err(|e| e.to_string())
}

fn classical_bound() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let start = Instant::now();
    let est = pool.install(|| optimal_mc(0.01, 1_000_000, SeedStream::new(101)))?;
    let secs = start.elapsed().as_secs_f64();
    let target = fmax(0.01);
    ensure(est.within_sigmas(target, 3.0), || {
        format!(
            "λ=0.01 mean {:.6} ± {:.1e} vs {target:.6}",
            est.mean, est.std_error
        )
    })?;
    ensure((target - 0.50249).abs() < 5e-6, || {
        format!("target {target}")
    })?;
    ensure(secs < 30.0, || format!("single-thread runtime {secs:.1} s"))?;

    let points: Vec<(f64, Estimate)> = [0.01, 0.05, 0.1]
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            optimal_mc(l, 1_000_000, SeedStream::new(202).for_task(i as u32)).map(|e| (l, e))
        })
        .collect::<Result<_, _>>()?;
    let ext = extrapolate_to_flat_prior(&points).map_err(|e| e.to_string())?;
    ensure(ext.within_sigmas(0.5, 3.0), || {
        format!("extrapolated {:.6} ± {:.1e}", ext.mean, ext.std_error)
    })?;
    Ok(format!(
        "λ=0.01: {:.6} ± {:.1e} (target {target:.6}, {secs:.2} s on 1 thread); λ→0: {:.5} ± {:.1e}",
        est.mean, est.std_error, ext.mean, ext.std_error
    ))
}

fn fmax_formula() -> Outcome {
    let mut worst: f64 = 0.0;
    for (i, lambda) in [0.1, 0.5, 1.0, 2.0, 5.0].into_iter().enumerate() {
        let stream = SeedStream::new(303).for_task(i as u32);
        let est = optimal_mc(lambda, 1_000_000, stream)?;
        let z = est.z_score(fmax(lambda));
        ensure(z.abs() <= 3.0, || format!("λ={lambda}: z = {z:.2}"))?;
        worst = worst.max(z.abs());
        let prior = GaussianPrior::new(lambda).map_err(|e| e.to_string())?;
        for factor in [0.5, 1.5] {
            let g = factor / (1.0 + lambda);
            let strategy = CheatStrategy::gain(g).map_err(|e| e.to_string())?;
            // same stream, so the comparison shares its random numbers
            let off = mc_average_fidelity(&prior, &strategy, 1_000_000, stream)
                .map_err(|e| e.to_string())?;
            ensure(off.mean < est.mean, || {
                format!(
                    "λ={lambda}, g={g:.4}: {:.6} not below optimum {:.6}",
                    off.mean, est.mean
                )
            })?;
        }
    }
    Ok(format!(
        "5 priors within 3·SE (max |z| = {worst:.2}); perturbed gains lower"
    ))
}

fn operator_core() -> Outcome {
    let alphas = [
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, -1.0),
        Complex64::new(0.0, 3.0),
    ];
    let (mut diff, mut rel, mut fid) = (0.0f64, 0.0f64, 1.0f64);
    for alpha in alphas {
        for lambda in [0.2, 1.0, 3.0] {
            let e = |e: cvtele_core::Error| e.to_string();
            let a = build_o_alpha(alpha, lambda, 60, OperatorMethod::ClosedForm).map_err(e)?;
            let b = build_o_alpha(alpha, lambda, 60, OperatorMethod::Quadrature).map_err(e)?;
            diff = diff.max(a.max_abs_diff(&b).map_err(e)?);
            for method in [OperatorMethod::ClosedForm, OperatorMethod::Quadrature] {
                let chk = verify_optimal_eigenvector(alpha, lambda, 60, method).map_err(e)?;
                let analytic = (alpha.norm_sqr() / (1.0 + lambda)).exp() * PI / (2.0 + lambda);
                rel = rel.max((chk.mu1 - analytic).abs() / analytic);
                fid = fid.min(chk.match_fidelity);
            }
        }
    }
    let detail = format!(
        "max entry diff {diff:.1e}, max eigenvalue rel err {rel:.1e}, min fidelity {fid:.9}"
    );
    ensure(diff <= 1e-6 && rel <= 1e-5 && fid >= 0.999, || {
        detail.clone()
    })?;
    Ok(detail)
}

fn two_state_bench() -> Outcome {
    let grid: Vec<f64> = (1..=1000).map(|k| PI / 2.0 * k as f64 / 1000.0).collect();
    let mut min = (f64::INFINITY, 0.0);
    for &theta in &grid {
        let x = theta.cos();
        // independent closed form ½(1 + √(1 − x² + x⁴))
        let oracle = 0.5 * (1.0 + (1.0 - x * x + x.powi(4)).sqrt());
        let f = TwoStateSet::new(theta)
            .map_err(|e| e.to_string())?
            .cheat_fidelity();
        ensure((f - oracle).abs() < 1e-12, || {
            format!("θ={theta}: {f} vs {oracle}")
        })?;
        if f < min.0 {
            min = (f, x);
        }
    }
    ensure((min.0 - 0.93301).abs() <= 1e-5, || {
        format!("minimum {:.7}", min.0)
    })?;
    ensure((min.1 - FRAC_1_SQRT_2).abs() < 2e-3, || {
        format!("minimum at x = {:.5}", min.1)
    })?;

    let start = Instant::now();
    let mut worst_f: f64 = 0.0;
    let mut worst_steps: f64 = 0.0;
    for theta in [0.2, 0.5, PI / 4.0, 1.0, 1.3] {
        let set = TwoStateSet::new(theta).map_err(|e| e.to_string())?;
        let bf = two_state_brute_force(theta, 2000).map_err(|e| e.to_string())?;
        worst_f = worst_f.max((bf.best_fidelity - set.cheat_fidelity()).abs());
        worst_steps = worst_steps.max((bf.best_tweak - set.tweak()).abs() / bf.grid_step);
    }
    let secs = start.elapsed().as_secs_f64();
    let detail = format!(
        "min F {:.7} at x = {:.4}; brute force |ΔF| ≤ {worst_f:.1e}, |Δφ| ≤ {worst_steps:.2} steps, {secs:.2} s",
        min.0, min.1
    );
    ensure(worst_f <= 1e-3 && worst_steps <= 2.0 && secs < 60.0, || {
        detail.clone()
    })?;
    Ok(detail)
}

fn haar_bench() -> Outcome {
    let mut parts = Vec::new();
    for d in 2..=5usize {
        let est = haar_avg_fidelity_mc(&HaarBenchConfig {
            d,
            n_samples: 1_000_000,
            seed: 404 + d as u64,
        })
        .map_err(|e| e.to_string())?;
        let target = 2.0 / (d as f64 + 1.0);
        let z = est.fidelity.z_score(target);
        ensure(z.abs() <= 3.0, || {
            format!("d={d}: {:.6} vs {target:.6}, z = {z:.2}", est.fidelity.mean)
        })?;
        ensure(est.weight.within_sigmas(1.0, 3.0), || {
            format!("d={d}: weight {:?}", est.weight)
        })?;
        parts.push(format!("d={d} z={z:+.2}"));
    }
    Ok(parts.join(", "))
}

fn overlap_bound() -> Outcome {
    let sweep = overlap_bound_sweep(1000, 20, 505).map_err(|e| e.to_string())?;
    ensure(sweep.violations == 0, || format!("{sweep:?}"))?;
    let mut rng = SeedStream::new(506).rng(0);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let psi = haar_state(&mut rng, 20);
        let rho = random_density(&mut rng, 20, 3);
        let povm = Povm::binary(&psi).map_err(|e| e.to_string())?;
        let chk = check_overlap_bound(&psi, &rho, &povm).map_err(|e| e.to_string())?;
        worst = worst.max((chk.overlap * chk.overlap - chk.fidelity).abs());
    }
    ensure(worst <= 1e-9, || {
        format!("binary projector gap {worst:.1e}")
    })?;
    Ok(format!(
        "0 violations in {} triples (worst margin {:.1e}); binary gap ≤ {worst:.1e}",
        sweep.triples, sweep.worst_margin
    ))
}

fn gaussian_pair() -> Outcome {
    let mut worst = (0.0f64, 0.0f64);
    for b in [0.0, 1.0, 5.0, 100.0] {
        let p = GaussianPairParams::new(1.0, b).map_err(|e| e.to_string())?;
        let d = gaussian_pair_densities(&p, &symmetric_grid(&p, 8.0, 200_001))
            .map_err(|e| e.to_string())?;
        // closed form √(a(a+ib)/(a²+b²)) at a = 1
        let oracle = (Complex64::new(1.0, b) / (1.0 + b * b)).sqrt();
        let err = (d.quadrature_overlap - oracle).norm();
        ensure(err <= 1e-6, || format!("b={b}: overlap error {err:.1e}"))?;
        let dens = d.max_x_density_diff().max(d.max_k_density_diff());
        ensure(dens <= 1e-12, || {
            format!("b={b}: density difference {dens:.1e}")
        })?;
        worst = (worst.0.max(err), worst.1.max(dens));
    }
    Ok(format!(
        "overlap error ≤ {:.1e}, density difference ≤ {:.1e}",
        worst.0, worst.1
    ))
}

fn gaussian_fidelity(r: f64) -> Result<f64, String> {
    let beta = Complex64::new(0.0, 0.0);
    let out = bk_teleport_coherent(
        beta,
        TeleportParams::unit_gain(r).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    coherent_vs_gaussian_fidelity(beta, &out).map_err(|e| e.to_string())
}

fn teleport_curve() -> Outcome {
    let f0 = gaussian_fidelity(0.0)?;
    ensure(f0 == 0.5, || format!("F(0) = {f0:.17}"))?;
    let mut worst: f64 = 0.0;
    for k in 0..=7 {
        let r = 0.1 * k as f64;
        for beta in [0.0, 1.0, 2.0] {
            let beta = Complex64::new(beta, 0.0);
            let out = bk_teleport_coherent(
                beta,
                TeleportParams::unit_gain(r).map_err(|e| e.to_string())?,
            )
            .map_err(|e| e.to_string())?;
            let g = coherent_vs_gaussian_fidelity(beta, &out).map_err(|e| e.to_string())?;
            let f = fock_cross_check(beta, r, 80).map_err(|e| e.to_string())?;
            worst = worst.max((g - f).abs());
        }
    }
    ensure(worst <= 1e-3, || {
        format!("Fock cross-check gap {worst:.1e}")
    })?;
    // bisection on the Gaussian calculus, not on a closed form
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if gaussian_fidelity(mid)? < 0.58 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r58 = 0.5 * (lo + hi);
    ensure((r58 - 0.1614).abs() <= 1e-3, || {
        format!("crossing at r = {r58:.5}")
    })?;
    Ok(format!(
        "F(0) = ½ exactly; Fock gap ≤ {worst:.1e}; F = 0.58 at r = {r58:.5}"
    ))
}

fn cvtele(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_cvtele"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        String::from_utf8_lossy(&out.stderr).into_owned()
    })?;
    Ok(out.stdout)
}

fn verdict_and_determinism() -> Outcome {
    let e = |e: cvtele_core::Error| e.to_string();
    let v = verdict(0.58, 0.02, 1, DEFAULT_CONFIDENCE_Z).map_err(e)?;
    ensure(v.verdict == Verdict::Quantum, || {
        format!("(0.58, 0.02) → {}", v.verdict)
    })?;
    let v = verdict(0.505, 0.02, 1, DEFAULT_CONFIDENCE_Z).map_err(e)?;
    ensure(v.verdict == Verdict::Inconclusive, || {
        format!("(0.505, 0.02) → {}", v.verdict)
    })?;
    let cli = cvtele(&["verdict", "--mean", "0.58", "--std-error", "0.02"])?;
    ensure(
        String::from_utf8_lossy(&cli)
            .trim_end()
            .ends_with(",quantum"),
        || "binary verdict".into(),
    )?;

    let runs: [&[&str]; 3] = [
        &[
            "bound-sweep",
            "--lambda",
            "0.01,0.05,0.1",
            "--n",
            "200000",
            "--seed",
            "9",
        ],
        &[
            "haar", "--d", "2,3", "--n", "200000", "--seed", "9", "--format", "json",
        ],
        &[
            "cheat-mc", "--lambda", "1", "--gain", "0.3", "--n", "200000", "--seed", "9",
        ],
    ];
    for args in runs {
        let a = cvtele(args)?;
        let b = cvtele(args)?;
        let c = cvtele(&[args, &["--workers", "3"]].concat())?;
        ensure(a == b && a == c, || {
            format!("{} output differs between runs", args[0])
        })?;
    }
    Ok("(0.58, 0.02) quantum, (0.505, 0.02) inconclusive; seeded runs byte-identical".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("classical bound", classical_bound),
        ("optimal gain formula", fmax_formula),
        ("operator core", operator_core),
        ("two-state bench", two_state_bench),
        ("haar bench", haar_bench),
        ("overlap bound", overlap_bound),
        ("gaussian pair", gaussian_pair),
        ("teleport curve", teleport_curve),
        ("verdict", verdict_and_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
