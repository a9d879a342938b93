use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;

use walklab::cli::{run_with, EXIT_OK, EXIT_USAGE};
use walklab::io::{measure_from_csv, state_from_csv, state_from_json, state_to_csv};
use walklab::{fourier_coin_ms, C64};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn walklab(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["walklab"];
    full.extend_from_slice(args);
    let code = run_with(full, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Eigenvalue columns of a spectrum CSV.
fn spectrum_rows(csv: &str) -> Vec<([C64; 4], f64)> {
    csv.lines()
        .skip(1)
        .map(|line| {
            let f: Vec<f64> = line.split(',').skip(2).map(|x| x.parse().unwrap()).collect();
            let ev = [0, 1, 2, 3].map(|j| C64::new(f[2 * j], f[2 * j + 1]));
            (ev, f[8])
        })
        .collect()
}

#[test]
fn help_and_usage_codes() {
    assert_eq!(walklab(&["--help"]).code, EXIT_OK);
    assert_eq!(walklab(&["--version"]).code, EXIT_OK);
    assert_eq!(walklab(&["evolve", "--nope"]).code, EXIT_USAGE);
    assert_eq!(walklab(&[]).code, EXIT_USAGE);
    assert_eq!(walklab(&["evolve", "--coin", "hadamard"]).code, EXIT_USAGE);
    assert_eq!(walklab(&["evolve", "--init", "spiral"]).code, EXIT_USAGE);
    assert_eq!(walklab(&["verify", "--suite", "everything"]).code, EXIT_USAGE);
}

#[test]
fn alpha_normalisation_rules() {
    let exact = walklab(&["evolve", "--alpha", "0,0,0.6,0,0,0.8,0,0", "--steps", "0"]);
    assert_eq!(exact.code, EXIT_OK);
    assert!(exact.err.is_empty());
    let close = walklab(&["evolve", "--alpha", "1.0002,0,0,0,0,0,0,0", "--steps", "0"]);
    assert_eq!(close.code, EXIT_OK);
    assert!(close.err.contains("warning"));
    let s = state_from_csv(&close.out).unwrap();
    assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    assert_eq!(walklab(&["evolve", "--alpha", "1.01,0,0,0,0,0,0,0"]).code, EXIT_USAGE);
    assert_eq!(walklab(&["evolve", "--alpha", "1,0,0"]).code, EXIT_USAGE);
    assert_eq!(walklab(&["evolve", "--alpha", "-1,0,0,0,0,0,0,0", "--steps", "1"]).code, EXIT_OK);
}

#[test]
fn fourier_pi2_returns_after_sixteen_steps() {
    let alpha = "0.5,0,0,0.5,-0.5,0,0,-0.5";
    let start = walklab(&["evolve", "--size", "2", "--steps", "0", "--alpha", alpha]);
    let end = walklab(&["evolve", "--coin", "fourier", "--shift", "ms", "--size", "2", "--steps", "16", "--init", "delta", "--alpha", alpha]);
    assert_eq!(end.code, EXIT_OK);
    let (a, b) = (state_from_csv(&start.out).unwrap(), state_from_csv(&end.out).unwrap());
    assert!(a.max_abs_diff(&b) < 1e-12);
}

#[test]
fn files_round_trip_and_zero_steps_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let r = walklab(&["evolve", "--init", "random", "--seed", "4", "--size", "5", "--steps", "9", "--format", "json", "--out", path_str(&first)]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.is_empty());
    let loaded = state_from_json(&std::fs::read_to_string(&first).unwrap()).unwrap();

    let init = format!("file:{}", path_str(&first));
    let again = dir.path().join("again.csv");
    assert_eq!(walklab(&["evolve", "--init", &init, "--steps", "0", "--out", path_str(&again)]).code, EXIT_OK);
    let reloaded = state_from_csv(&std::fs::read_to_string(&again).unwrap()).unwrap();
    assert_eq!(reloaded, loaded);
    assert_eq!(state_to_csv(&reloaded), std::fs::read_to_string(&again).unwrap());
}

#[test]
fn engines_produce_matching_csv() {
    let args = ["evolve", "--init", "random", "--seed", "17", "--size", "6", "--steps", "23", "--coin", "grover", "--shift", "ff"];
    let pos = walklab(&[&args[..], &["--engine", "position"]].concat());
    let mom = walklab(&[&args[..], &["--engine", "momentum"]].concat());
    let (a, b) = (state_from_csv(&pos.out).unwrap(), state_from_csv(&mom.out).unwrap());
    assert!(a.max_abs_diff(&b) < 1e-9);
}

#[test]
fn measure_output() {
    let r = walklab(&["evolve", "--coin", "grover", "--steps", "2", "--output", "measure"]);
    let m = measure_from_csv(&r.out).unwrap();
    assert!((m.total() - 1.0).abs() < 1e-14);
    // Grover on π₂² from e₁ at n = 2.
    assert!((m.prob(0, 0) - 0.5).abs() < 1e-15);
    assert!((m.prob(1, 1) - 0.5).abs() < 1e-15);
    assert!(m.prob(0, 1).abs() < 1e-15);
}

#[test]
fn custom_coin_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coin.json");
    std::fs::write(&path, fourier_coin_ms().to_json()).unwrap();
    let spec = format!("custom:{}", path_str(&path));
    let custom = walklab(&["evolve", "--coin", &spec, "--size", "3", "--steps", "5", "--init", "uniform"]);
    let builtin = walklab(&["evolve", "--coin", "fourier", "--size", "3", "--steps", "5", "--init", "uniform"]);
    assert_eq!(custom.code, EXIT_OK);
    assert_eq!(custom.out, builtin.out);
    assert_eq!(walklab(&["evolve", "--coin", &spec, "--shift", "ff"]).code, EXIT_USAGE);

    std::fs::write(&path, r#"{"shift":"ms","matrix":[[[1,0],[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[1,0],[0,0]],[[0,0],[0,0],[0,0],[1,0]]]}"#).unwrap();
    let bad = walklab(&["evolve", "--coin", &spec]);
    assert_eq!(bad.code, EXIT_USAGE);
    assert!(bad.err.contains("unitary"));
}

#[test]
fn ff_diagonal_spectrum_is_constant() {
    let r = walklab(&["spectrum", "--coin", "fourier", "--shift", "ff", "--line", "diagonal", "--grid", "16"]);
    assert_eq!(r.code, EXIT_OK);
    let roots: Vec<C64> = (0..4).map(|j| C64::from_polar(1.0, PI * (1 + 4 * j) as f64 / 8.0)).collect();
    let rows = spectrum_rows(&r.out);
    assert_eq!(rows.len(), 16);
    for (ev, residual) in rows {
        assert!(residual < 1e-9);
        for root in &roots {
            assert!(ev.iter().any(|l| (l - root).norm() < 1e-9));
        }
    }
}

#[test]
fn grover_spectrum_contains_plus_minus_one() {
    let r = walklab(&["spectrum", "--coin", "grover", "--shift", "ms", "--grid", "8"]);
    let rows = spectrum_rows(&r.out);
    assert_eq!(rows.len(), 64);
    for (ev, residual) in rows {
        assert!(residual < 1e-9);
        for target in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0)] {
            assert!(ev.iter().any(|l| (l - target).norm() < 1e-9));
        }
    }
}

#[test]
fn certificate_output() {
    let g = walklab(&["spectrum", "--coin", "grover", "--certificate", "--grid", "16"]);
    let v: serde_json::Value = serde_json::from_str(&g.out).unwrap();
    assert_eq!(v["verdict"], "ConstantRoots");
    let f = walklab(&["spectrum", "--coin", "fourier", "--shift", "ff", "--certificate", "--grid", "16"]);
    let v: serde_json::Value = serde_json::from_str(&f.out).unwrap();
    assert_eq!(v["verdict"], "NoConstantRoot");
    assert_eq!(walklab(&["spectrum", "--certificate", "--grid", "4"]).code, EXIT_USAGE);
}

#[test]
fn closed_form_sources_agree() {
    for args in [
        vec!["--coin", "fourier", "--shift", "ff", "--size", "2", "--steps", "11"],
        vec!["--coin", "grover", "--size", "2", "--steps", "6"],
        vec!["--coin", "fourier", "--init", "uniform", "--size", "5", "--steps", "7"],
        vec!["--coin", "fourier", "--init", "diagonal", "--size", "6", "--steps", "13"],
    ] {
        let alpha = ["--alpha", "0.5,0.1,-0.3,0.2,0.4,-0.5,0.1,0.4357"];
        let closed = walklab(&[&["closed-form"][..], &args, &alpha].concat());
        let evolved = walklab(&[&["closed-form", "--source", "evolution"][..], &args, &alpha].concat());
        assert_eq!(closed.code, EXIT_OK, "{}", closed.err);
        let (a, b) = (state_from_csv(&closed.out).unwrap(), state_from_csv(&evolved.out).unwrap());
        assert!(a.max_abs_diff(&b) < 1e-11, "{args:?}");
    }
    let none = walklab(&["closed-form", "--coin", "grover", "--size", "3"]);
    assert_eq!(none.code, EXIT_USAGE);
}

#[test]
fn probe_localization_contrast() {
    let avg_at = |out: &str, n: usize| -> f64 {
        out.lines().nth(n).unwrap().split(',').nth(2).unwrap().parse().unwrap()
    };
    let g = walklab(&["probe-localization", "--coin", "grover", "--shift", "ms", "--horizon", "64"]);
    assert!(avg_at(&g.out, 64) > 0.05);
    let f = walklab(&["probe-localization", "--coin", "fourier", "--shift", "ms", "--horizon", "64"]);
    assert!(avg_at(&f.out, 64) < avg_at(&f.out, 16));
    let one = walklab(&["probe-localization", "--horizon", "1"]);
    assert_eq!(one.out.lines().count(), 2);
    assert!(one.out.lines().nth(1).unwrap().starts_with("0,1.0000000000000000e0"));
    assert_eq!(walklab(&["probe-localization", "--horizon", "0"]).code, EXIT_USAGE);
}

#[test]
fn period_subcommand() {
    let r = walklab(&["period", "--coin", "grover", "--shift", "ff", "--alpha", "0.5,0,0.5,0,0.5,0,0,0.5"]);
    assert!(r.out.lines().nth(1).unwrap().starts_with("4,64,"));
    let j = walklab(&["period", "--format", "json", "--horizon", "10"]);
    let v: serde_json::Value = serde_json::from_str(&j.out).unwrap();
    assert!(v["period"].is_null());
}

#[test]
fn verify_suite_passes() {
    let r = walklab(&["verify", "--suite", "pi2"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.out.lines().filter(|l| l.starts_with("[PASS]")).count(), 3);
}

#[test]
fn output_is_identical_across_thread_counts() {
    let bin = env!("CARGO_BIN_EXE_walklab");
    let outputs: Vec<Vec<u8>> = ["1", "2", "8"]
        .iter()
        .map(|threads| {
            let out = Command::new(bin)
                .args(["evolve", "--init", "random", "--seed", "3", "--size", "12", "--steps", "30", "--engine", "momentum"])
                .env("WALKLAB_THREADS", threads)
                .output()
                .unwrap();
            assert!(out.status.success());
            out.stdout
        })
        .collect();
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let bad = Command::new(bin).arg("verify").env("WALKLAB_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
}
