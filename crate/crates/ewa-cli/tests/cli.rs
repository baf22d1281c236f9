//! End-to-end tests of the `ewa` binary: artifact schemas, exit codes,
//! failure cleanup, and the byte-identical-rerun determinism check.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ewa() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ewa"))
}

/// A per-test scratch directory under the system temp dir.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ewa-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("run.conf");
    fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    ewa()
        .args(args)
        .output()
        .expect("the ewa binary should spawn")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

const BASE: &str = "n = 64\nsigma = 1\nbeta = 20\ntrials = 200\nmaster_seed = 42\n";

#[test]
fn criterion_12_identical_runs_produce_byte_identical_csv() {
    let dir = scratch("determinism");
    let config = write_config(&dir, BASE);
    for out in ["first", "second"] {
        let output = run(&[
            "simulate",
            "--config",
            config.to_str().unwrap(),
            "--out",
            dir.join(out).to_str().unwrap(),
        ]);
        assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));
    }
    let first = fs::read(dir.join("first/trials.csv")).unwrap();
    let second = fs::read(dir.join("second/trials.csv")).unwrap();
    let summaries_match = fs::read(dir.join("first/summary.json")).unwrap()
        == fs::read(dir.join("second/summary.json")).unwrap();

    let pass = first == second && summaries_match;
    println!(
        "acceptance 12 (identical config and seed rerun byte-identically): {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance criterion 12 failed");
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn simulate_with_one_trial_writes_a_header_and_one_row() {
    let dir = scratch("one-trial");
    let config = write_config(&dir, BASE);
    let out = dir.join("out");
    let output = run(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--trials",
        "1",
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));

    let csv = fs::read_to_string(out.join("trials.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2, "header plus exactly one data row:\n{csv}");
    assert_eq!(
        lines[0],
        "trial,seed,lhs,rhs,holds,best_t,nu_star,gamma,pen_total,price_total,kl_term"
    );
    assert!(lines[1].starts_with("0,42,"), "row: {}", lines[1]);
    assert!(csv.ends_with('\n'));

    let summary = fs::read_to_string(out.join("summary.json")).unwrap();
    assert!(summary.contains("\"command\": \"simulate\""), "{summary}");
    assert!(summary.contains("\"n_trials\": 1"), "{summary}");
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn seed_override_changes_the_rows() {
    let dir = scratch("seed-override");
    let config = write_config(&dir, BASE);
    for (out, seed) in [("a", "42"), ("b", "43")] {
        let output = run(&[
            "simulate",
            "--config",
            config.to_str().unwrap(),
            "--out",
            dir.join(out).to_str().unwrap(),
            "--trials",
            "5",
            "--seed",
            seed,
        ]);
        assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));
    }
    let a = fs::read(dir.join("a/trials.csv")).unwrap();
    let b = fs::read(dir.join("b/trials.csv")).unwrap();
    assert_ne!(a, b, "different seeds must produce different draws");
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn sweep_beta_writes_one_row_per_grid_point_with_flags_set() {
    let dir = scratch("sweep-beta");
    let config = write_config(&dir, BASE);
    let out = dir.join("out");
    let output = run(&[
        "sweep-beta",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--grid",
        "20,24,28",
        "--trials",
        "50",
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));

    let csv = fs::read_to_string(out.join("sweep_beta.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4, "header plus three grid rows:\n{csv}");
    assert_eq!(
        lines[0],
        "beta,coverage,mean_lhs,expectation_rhs,coverage_ok"
    );
    for line in &lines[1..] {
        assert!(line.ends_with(",true"), "coverage flag not set: {line}");
    }
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn sweep_delta_rejects_an_inadmissible_grid_point() {
    let dir = scratch("sweep-delta");
    // β = 8: fine for δ = 0, but the δ-floor 4σ²V(1+4δ) already asks for
    // β ≥ 12 at the next grid point.
    let config = write_config(
        &dir,
        "n = 16\nsigma = 1\nbeta = 8\ndelta = 0\nmaster_seed = 1\n",
    );
    let out = dir.join("out");
    let output = run(&[
        "sweep-delta",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--grid",
        "0,0.5,1",
        "--trials",
        "20",
    ]);
    assert_eq!(output.status.code(), Some(1), "{}", stderr_of(&output));
    let err = stderr_of(&output);
    assert!(err.contains("delta = 0.5"), "{err}");
    assert!(err.contains("4σ²V(1+4δ)"), "{err}");
    // The failed run must not leave artifacts behind.
    assert!(!out.join("sweep_delta.csv").exists());
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn check_mgf_on_rademacher_passes_every_direction() {
    let dir = scratch("mgf");
    let config = write_config(
        &dir,
        "n = 8\nsigma = 1\nbeta = 20\nmaster_seed = 9\nnoise.kind = rademacher\n",
    );
    let out = dir.join("out");
    let output = run(&[
        "check-mgf",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--directions",
        "10",
        "--samples",
        "200000",
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));

    let csv = fs::read_to_string(out.join("mgf.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 11, "header plus ten directions:\n{csv}");
    assert_eq!(
        lines[0],
        "direction,direction_norm,empirical,bound,stderr,ok"
    );
    for line in &lines[1..] {
        assert!(line.ends_with(",true"), "direction not ok: {line}");
    }
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn check_moments_covers_every_ordered_pair() {
    let dir = scratch("moments");
    let config = write_config(
        &dir,
        "n = 8\nsigma = 1\nbeta = 20\nmaster_seed = 4\ncollection.ranks = 2,4,8\n",
    );
    let out = dir.join("out");
    let output = run(&[
        "check-moments",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));

    let csv = fs::read_to_string(out.join("moments.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 7, "header plus 3·2 ordered pairs:\n{csv}");
    assert_eq!(lines[0], "t,u,empirical,bound,stderr,ok");
    assert!(lines[1].starts_with("0,1,"));
    for line in &lines[1..] {
        assert!(line.ends_with(",true"), "pair not ok: {line}");
    }
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn missing_config_file_reports_the_path_and_exits_nonzero() {
    let dir = scratch("missing-config");
    let bogus = dir.join("absent.conf");
    let output = run(&[
        "simulate",
        "--config",
        bogus.to_str().unwrap(),
        "--out",
        dir.join("out").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(
        stderr_of(&output).contains("absent.conf"),
        "{}",
        stderr_of(&output)
    );
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn inadmissible_temperature_is_reported_and_exits_nonzero() {
    let dir = scratch("bad-temperature");
    let config = write_config(&dir, "n = 8\nsigma = 1\nbeta = 4\n");
    let output = run(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.join("out").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(
        stderr_of(&output).contains("temperature must exceed 4σ²V"),
        "{}",
        stderr_of(&output)
    );
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn failed_write_cleans_up_already_written_artifacts() {
    let dir = scratch("cleanup");
    let config = write_config(&dir, BASE);
    let out = dir.join("out");
    // Block the second artifact: a directory named summary.json makes the
    // write fail after trials.csv already succeeded.
    fs::create_dir_all(out.join("summary.json")).unwrap();
    let output = run(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--trials",
        "2",
    ]);
    assert_eq!(output.status.code(), Some(1), "{}", stderr_of(&output));
    assert!(
        stderr_of(&output).contains("summary.json"),
        "{}",
        stderr_of(&output)
    );
    assert!(
        !out.join("trials.csv").exists(),
        "the partial trials.csv should have been removed"
    );
    let _ = fs::remove_dir_all(&dir);
}
