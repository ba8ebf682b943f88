//! End-to-end checks of the command-line surface: every subcommand, the
//! output files it promises, and the error JSON contract.

use std::path::Path;
use std::process::{Command, Output};

use mvcovh::harness::read_trace;
use mvcovh::mvdata::{load_manifest, read_matrix_csv};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mvcovh"))
}

fn run_ok(dir: &Path, args: &[&str]) -> Output {
    let output = bin().current_dir(dir).args(args).output().unwrap();
    assert!(
        output.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

fn json_file(path: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(path).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn synth(dir: &Path) {
    run_ok(
        dir,
        &[
            "synth",
            "--clusters",
            "3",
            "--samples",
            "75",
            "--view-dims",
            "6,4",
            "--separation",
            "7",
            "--noise",
            "0.1",
            "--seed",
            "13",
            "--out",
            "data",
        ],
    );
}

#[test]
fn synth_writes_a_loadable_dataset() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path());
    let dataset = load_manifest(dir.path().join("data/manifest.json")).unwrap();
    assert_eq!(dataset.n_samples(), 75);
    assert_eq!(dataset.n_views(), 2);
    assert_eq!(dataset.n_classes(), Some(3));
    for view in dataset.views() {
        for &v in view.data.iter() {
            assert!((0.0..=1.0).contains(&v));
        }
    }
}

#[test]
fn extract_hidden_exports_model_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path());
    run_ok(
        dir.path(),
        &[
            "extract-hidden",
            "--manifest",
            "data/manifest.json",
            "--hidden-dim",
            "3",
            "--lambda",
            "2",
            "--max-iter",
            "60",
            "--seed",
            "3",
            "--out",
            "hidden",
        ],
    );
    let model = json_file(&dir.path().join("hidden/model.json"));
    assert_eq!(model["r"], 3);
    assert_eq!(model["lambda"], 2.0);
    let q = model["q"].as_array().unwrap();
    assert_eq!(q.len(), 2);
    let trace = model["objective_trace"].as_array().unwrap();
    assert!(!trace.is_empty());

    let h = read_matrix_csv(dir.path().join("hidden/hidden_H.csv")).unwrap();
    assert_eq!(h.dim(), (3, 75));
    assert!(read_matrix_csv(dir.path().join("hidden/W_1.csv")).is_ok());
    assert!(read_matrix_csv(dir.path().join("hidden/W_2.csv")).is_ok());

    let rows = read_trace(dir.path().join("hidden/trace.csv")).unwrap();
    assert_eq!(rows.len(), trace.len());
    for pair in rows.windows(2) {
        assert!(pair[1].1 <= pair[0].1 + 1e-9 * pair[0].1.abs() + 1e-15);
    }
}

#[test]
fn fit_writes_the_promised_files() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path());
    run_ok(
        dir.path(),
        &[
            "fit",
            "--manifest",
            "data/manifest.json",
            "--clusters",
            "3",
            "--hidden-dim",
            "3",
            "--seed",
            "8",
            "--out",
            "fit",
        ],
    );
    let report = json_file(&dir.path().join("fit/report.json"));
    for key in [
        "params",
        "iterations",
        "objective_trace",
        "w",
        "assignment",
        "per_view_dispersions",
    ] {
        assert!(report.get(key).is_some(), "report.json missing key {key}");
    }
    assert_eq!(report["assignment"].as_array().unwrap().len(), 75);
    assert_eq!(report["w"].as_array().unwrap().len(), 2);
    assert_eq!(report["per_view_dispersions"].as_array().unwrap().len(), 2);

    let h = read_matrix_csv(dir.path().join("fit/hidden_H.csv")).unwrap();
    assert_eq!(h.dim(), (3, 75));
    let assignment = std::fs::read_to_string(dir.path().join("fit/assignment.csv")).unwrap();
    assert_eq!(assignment.lines().count(), 75);
    assert!(read_trace(dir.path().join("fit/trace.csv")).is_ok());
}

#[test]
fn eval_scores_an_assignment() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path());
    run_ok(
        dir.path(),
        &[
            "fit",
            "--manifest",
            "data/manifest.json",
            "--clusters",
            "3",
            "--hidden-dim",
            "3",
            "--seed",
            "8",
            "--out",
            "fit",
        ],
    );
    run_ok(
        dir.path(),
        &[
            "eval",
            "--manifest",
            "data/manifest.json",
            "--assignment",
            "fit/assignment.csv",
            "--out",
            "eval",
        ],
    );
    let report = json_file(&dir.path().join("eval/report.json"));
    for key in ["nmi", "rand_index", "precision"] {
        let value = report[key].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&value), "{key} = {value}");
    }
}

#[test]
fn sweep_beta_emits_rows_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path());
    run_ok(
        dir.path(),
        &[
            "sweep-beta",
            "--manifest",
            "data/manifest.json",
            "--clusters",
            "3",
            "--hidden-dim",
            "3",
            "--repeats",
            "2",
            "--betas",
            "0,0.5,1",
            "--seed",
            "6",
            "--out",
            "sweep",
        ],
    );
    let report = json_file(&dir.path().join("sweep/report.json"));
    assert_eq!(report["rows"].as_array().unwrap().len(), 3);
    let csv = std::fs::read_to_string(dir.path().join("sweep/beta_sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("beta,nmi_mean,nmi_sd"));
}

#[test]
fn grid_reports_the_best_cell() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path());
    run_ok(
        dir.path(),
        &[
            "grid",
            "--manifest",
            "data/manifest.json",
            "--clusters",
            "3",
            "--repeats",
            "2",
            "--eta-grid",
            "1",
            "--beta-grid",
            "0,0.5",
            "--r-grid",
            "2,3",
            "--lambda-grid",
            "1",
            "--seed",
            "2",
            "--out",
            "grid",
        ],
    );
    let report = json_file(&dir.path().join("grid/report.json"));
    assert_eq!(report["cells"].as_array().unwrap().len(), 4);
    let best = &report["best"];
    assert!(best["cell_index"].as_u64().unwrap() < 4);
    // wall clock is runtime-only information
    assert!(report.get("wall_clock_secs").is_none());
}

#[test]
fn ablate_writes_both_arms_and_rejects_beta_zero() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path());
    run_ok(
        dir.path(),
        &[
            "ablate",
            "--manifest",
            "data/manifest.json",
            "--clusters",
            "3",
            "--hidden-dim",
            "3",
            "--beta",
            "0.5",
            "--repeats",
            "2",
            "--seed",
            "6",
            "--out",
            "ablate",
        ],
    );
    let report = json_file(&dir.path().join("ablate/report.json"));
    assert_eq!(report["without_hidden"]["beta"], 0.0);
    assert_eq!(report["with_hidden"]["beta"], 0.5);

    let output = bin()
        .current_dir(dir.path())
        .args([
            "ablate",
            "--manifest",
            "data/manifest.json",
            "--clusters",
            "3",
            "--hidden-dim",
            "3",
            "--beta",
            "0",
            "--out",
            "ablate0",
        ])
        .output()
        .unwrap();
    assert!(!output.status.success());
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&output.stderr).trim()).unwrap();
    assert_eq!(err["kind"], "invalid_param");
}

#[test]
fn missing_manifest_yields_error_json_and_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .current_dir(dir.path())
        .args([
            "fit",
            "--manifest",
            "nope/manifest.json",
            "--clusters",
            "2",
            "--hidden-dim",
            "2",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&output.stderr).trim()).unwrap();
    assert_eq!(err["kind"], "missing_file");
    assert!(err["error"].as_str().unwrap().contains("manifest.json"));
}

#[test]
fn usage_errors_are_machine_readable() {
    let output = bin().arg("fit").arg("--bogus-flag").output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&output.stderr).trim()).unwrap();
    assert_eq!(err["kind"], "usage");
}

#[test]
fn help_prints_every_subcommand() {
    let output = bin().arg("--help").output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    for name in [
        "synth",
        "extract-hidden",
        "fit",
        "eval",
        "sweep-beta",
        "grid",
        "ablate",
    ] {
        assert!(text.contains(name), "--help missing subcommand {name}");
    }
}
