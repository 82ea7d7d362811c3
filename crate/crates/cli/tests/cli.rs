use std::path::Path;
use std::process::{Command, Output};

use cvtele_cli::{read_config, render, run, Table};

fn cvtele(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvtele"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_to_file(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let mut full = args.to_vec();
    let p = path.to_str().unwrap();
    full.extend_from_slice(&["--output", p]);
    let out = cvtele(&full);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    std::fs::read_to_string(path).unwrap()
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

fn col(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let k = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[k].parse().unwrap()).collect()
}

#[test]
fn same_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "bound-sweep",
        "--lambda",
        "0.1,1",
        "--n",
        "50000",
        "--seed",
        "11",
    ];
    let a = run_to_file(dir.path(), "a.csv", &args);
    let b = run_to_file(dir.path(), "b.csv", &args);
    assert_eq!(a, b);
    let c = run_to_file(
        dir.path(),
        "c.csv",
        &[
            "bound-sweep",
            "--lambda",
            "0.1,1",
            "--n",
            "50000",
            "--seed",
            "12",
        ],
    );
    assert_ne!(a, c);
}

#[test]
fn worker_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, extra) in [
        ("haar", vec!["--d", "2,3", "--n", "100000"]),
        ("cheat-mc", vec!["--lambda", "0.5", "--n", "100000"]),
    ] {
        let mut args = vec![cmd, "--seed", "5"];
        args.extend(extra);
        let one = run_to_file(
            dir.path(),
            "one",
            &[args.as_slice(), &["--workers", "1"]].concat(),
        );
        let four = run_to_file(
            dir.path(),
            "four",
            &[args.as_slice(), &["--workers", "4"]].concat(),
        );
        assert_eq!(one, four, "{cmd}");
    }
}

#[test]
fn embedded_config_reproduces_the_file() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args) in [
        (
            "sweep.csv",
            vec![
                "bound-sweep",
                "--lambda",
                "0.2",
                "--n",
                "20000",
                "--seed",
                "3",
            ],
        ),
        (
            "haar.json",
            vec!["haar", "--d", "3", "--n", "20000", "--format", "json"],
        ),
        (
            "curve.json",
            vec![
                "teleport-curve",
                "--r-max",
                "0.7",
                "--r-steps",
                "7",
                "--format",
                "json",
            ],
        ),
        (
            "op.csv",
            vec![
                "operator-check",
                "--alpha",
                "-1+0.5i",
                "--lambda",
                "0.5",
                "--method",
                "closed-form",
            ],
        ),
        (
            "verdict.csv",
            vec![
                "verdict",
                "--mean",
                "0.58",
                "--std-error",
                "0.02",
                "--lambda",
                "0.1",
            ],
        ),
    ] {
        let text = run_to_file(dir.path(), name, &args);
        let cfg = read_config(&text).unwrap();
        let again = render(&cfg, &run(&cfg).unwrap()).unwrap();
        assert_eq!(text, again, "{name}");
    }
}

#[test]
fn generated_seed_is_recorded() {
    let out = cvtele(&["haar", "--n", "1000"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let cfg = read_config(&text).unwrap();
    let table: Table = run(&cfg).unwrap();
    assert_eq!(render(&cfg, &table).unwrap(), text);
}

#[test]
fn two_state_grid_minimum() {
    let out = cvtele(&["two-state", "--theta-grid", "100"]);
    assert!(out.status.success());
    let (h, rows) = parse_csv(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(
        h,
        [
            "theta",
            "x",
            "analytic_F",
            "brute_force_F",
            "phi_analytic",
            "phi_found"
        ]
    );
    let f = col(&h, &rows, "analytic_F");
    let min = f.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!((min - 0.93301).abs() < 1e-5, "{min}");
    for (a, b) in f.iter().zip(col(&h, &rows, "brute_force_F")) {
        assert!((a - b).abs() < 1e-3);
    }
}

#[test]
fn bound_sweep_matches_analytic() {
    let out = cvtele(&[
        "bound-sweep",
        "--lambda",
        "0.01,0.1,1",
        "--n",
        "1e6",
        "--seed",
        "7",
    ]);
    assert!(out.status.success());
    let (h, rows) = parse_csv(&String::from_utf8(out.stdout).unwrap());
    let z = col(&h, &rows, "z_vs_analytic");
    assert_eq!(rows.len(), 4);
    for z in z {
        assert!(z.abs() <= 3.0, "{z}");
    }
}

#[test]
fn verdict_labels() {
    for (mean, se, label) in [
        ("0.58", "0.02", "quantum"),
        ("0.505", "0.02", "inconclusive"),
        ("0.48", "0.005", "classical-consistent"),
    ] {
        let out = cvtele(&["verdict", "--mean", mean, "--std-error", se]);
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.trim_end().ends_with(&format!(",{label}")), "{text}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(
        cvtele(&["verdict", "--mean", "0.5", "--std-error", "-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cvtele(&["bound-sweep", "--lambda", "0", "--n", "1000"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(cvtele(&["haar", "--n", "10"]).status.code(), Some(2));
    assert_eq!(cvtele(&["no-such-command"]).status.code(), Some(2));
    // the Fock cross-check cannot hold a thermal state at N = 5
    assert_eq!(
        cvtele(&["teleport-curve", "--r", "0", "--n-max", "5"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        cvtele(&["verdict", "--mean", "0.6", "--std-error", "0.01"])
            .status
            .code(),
        Some(0)
    );
}
