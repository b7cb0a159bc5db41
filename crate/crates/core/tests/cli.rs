//! End-to-end tests of the `spincat` binary: exit codes, output determinism,
//! and both output formats.

use std::path::Path;
use std::process::{Command, Output};

fn spincat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spincat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn evolve_polar_cat_matches_exact_law_per_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.cfg",
        "j = 10\nstate = polar_cat\ntau_max = 2\nsamples = 21\n",
    );
    let out = spincat(&["evolve", "--config", &cfg]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("tau,n1,n2,"));
    let mut rows = 0;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let tau: f64 = cells[0].parse().unwrap();
        let n1: f64 = cells[1].parse().unwrap();
        let n2: f64 = cells[2].parse().unwrap();
        assert!((n1 - (-2.0 * tau).exp()).abs() < 1e-8);
        assert!((n2 - (-tau).exp()).abs() < 1e-8);
        rows += 1;
    }
    assert_eq!(rows, 21);
}

#[test]
fn identical_config_gives_byte_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.cfg",
        "j = 9.5\nstate = coherent\ntheta = 0.9\nphi = 0.3\ntau_max = 1.5\nsamples = 13\n",
    );
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    for (path, _) in [(&out_a, 0), (&out_b, 1)] {
        let out = spincat(&["evolve", "--config", &cfg, "--out", path.to_str().unwrap()]);
        assert!(out.status.success());
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn set_overrides_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.cfg",
        "j = 5\nstate = polar_cat\ntau_max = 2\nsamples = 21\n",
    );
    let out = spincat(&[
        "evolve",
        "--config",
        &cfg,
        "--set",
        "samples=5",
        "--set",
        "tau_max=1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 6); // header + 5 rows
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("1,"));
}

#[test]
fn config_errors_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    // Unparseable line.
    let cfg = write_config(dir.path(), "bad.cfg", "j = 10\nwhat is this\n");
    let out = spincat(&["evolve", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    // Invalid values.
    let cfg = write_config(
        dir.path(),
        "bad2.cfg",
        "j = 10\nstate = polar_cat\ntau_max = 0\nsamples = 2\n",
    );
    let out = spincat(&["evolve", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));

    // Prepare without physical parameters.
    let cfg = write_config(
        dir.path(),
        "bad3.cfg",
        "j = 10\nstate = prepared\ntheta = 1.0\ntau_max = 1\n",
    );
    let out = spincat(&["prepare", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));

    // Missing config entirely.
    let out = spincat(&["evolve"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_with_code_3() {
    let dir = tempfile::tempdir().unwrap();
    // The dense oracle refuses large systems.
    let cfg = write_config(
        dir.path(),
        "big.cfg",
        "j = 40\nstate = polar_cat\ntau_max = 1\nmethod = dense_expm_oracle\n",
    );
    let out = spincat(&["evolve", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("numerical"));
}

#[test]
fn structured_format_emits_valid_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.cfg",
        "j = 4\nstate = coherent\ntheta = 1.0\ntau_max = 0.5\nsamples = 3\n",
    );
    let out = spincat(&["evolve", "--config", &cfg, "--format", "structured"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["rows"].as_array().unwrap().len(), 3);

    let cfg = write_config(
        dir.path(),
        "prep.cfg",
        "j = 6\nstate = prepared\ntheta = 1.0471975511965976\ntau_max = 1\ng = 0.05\nkappa = 4\ndelta = 70\n",
    );
    let out = spincat(&["prepare", "--config", &cfg, "--format", "structured"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let captured = value["symmetric_fit"]["captured"].as_f64().unwrap();
    assert!(captured > 1.0 - 1e-8);
    let amps = value["steps"]["final"]["state"]["amplitudes"]
        .as_array()
        .unwrap();
    assert_eq!(amps.len(), 13);
}

#[test]
fn sweep_runs_a_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "sweep.cfg",
        "sweep_j = 5, 10\nsweep_pairs = 1:0.4, 2:0.5\nfit_samples = 10\n",
    );
    let out = spincat(&["sweep", "--config", &cfg]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5); // header + 2x2 grid
    assert!(text.lines().nth(1).unwrap().contains("asymmetric"));
    assert!(text.lines().nth(2).unwrap().contains("symmetric"));

    let bad = write_config(dir.path(), "bad.cfg", "sweep_j = 5\nsweep_pairs = nope\n");
    let out = spincat(&["sweep", "--config", &bad]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_reproduces_the_decay_law_scalings() {
    let dir = tempfile::tempdir().unwrap();
    // Mirror pair: fitted rates agree across j (no fast decoherence);
    // interior asymmetric pair: fitted rate grows linearly with j and lands
    // on the predicted coefficient.
    let cfg = write_config(
        dir.path(),
        "sweep.cfg",
        "sweep_j = 25, 50, 100\nsweep_pairs = 2:0.5, 1:0.4\n",
    );
    let out = spincat(&["sweep", "--config", &cfg]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();

    let mut symmetric_rates = Vec::new();
    let mut asymmetric: Vec<(f64, f64, f64)> = Vec::new(); // (j, rate, ref)
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let j: f64 = cells[0].parse().unwrap();
        let rate: f64 = cells[6].parse().unwrap();
        match cells[3] {
            "symmetric" => symmetric_rates.push(rate),
            "asymmetric" => {
                let reference: f64 = cells[8].parse().unwrap();
                asymmetric.push((j, rate, reference));
            }
            other => panic!("unexpected kind {other}"),
        }
    }
    assert_eq!(symmetric_rates.len(), 3);
    let max = symmetric_rates.iter().cloned().fold(f64::MIN, f64::max);
    let min = symmetric_rates.iter().cloned().fold(f64::MAX, f64::min);
    assert!(
        (max - min) / max < 0.25,
        "mirror-pair rates vary with j: {symmetric_rates:?}"
    );

    assert_eq!(asymmetric.len(), 3);
    for (j, rate, reference) in &asymmetric {
        // Reference itself is linear in j; the fit lands within 5/j of it.
        assert!(
            (rate - reference).abs() / reference < 5.0 / j,
            "j={j}: rate {rate} vs {reference}"
        );
    }
    let slope_small = asymmetric[0].1 / asymmetric[0].0;
    let slope_large = asymmetric[2].1 / asymmetric[2].0;
    assert!(
        (slope_small - slope_large).abs() / slope_large < 0.15,
        "rate is not linear in j: {asymmetric:?}"
    );
}
