//! Black-box tests of the `mtr` binary.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mtr"))
}

fn dataset_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../datasets")
        .join(format!("{name}.arff"))
}

fn write_toy_csv(dir: &Path) -> PathBuf {
    let mut text = String::from("x1,x2,t1,t2\n");
    for i in 0..30 {
        let x = i as f64;
        text.push_str(&format!(
            "{x},{:.4},{},{}\n",
            (x * 0.7).sin(),
            2.0 * x,
            x % 5.0
        ));
    }
    let path = dir.join("toy.csv");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn train_then_predict_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_toy_csv(dir.path());
    let model = dir.path().join("model.json");

    let out = bin()
        .args(["train", "--method", "rcc", "--targets", "2", "--trees", "3"])
        .args(["--internal-folds", "2", "--evaluate", "cv:3"])
        .arg("--data")
        .arg(&data)
        .arg("--out")
        .arg(&model)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("aRRMSE"), "missing evaluation: {stdout}");

    let out = bin()
        .arg("predict")
        .arg("--model")
        .arg(&model)
        .arg("--data")
        .arg(&data)
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "t1,t2");
    assert_eq!(lines.len(), 31); // header + one row per input
    for line in &lines[1..] {
        assert_eq!(line.split(',').count(), 2);
        for v in line.split(',') {
            v.parse::<f64>().unwrap();
        }
    }
}

#[test]
fn predict_rejects_width_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_toy_csv(dir.path());
    let model = dir.path().join("model.json");
    let status = bin()
        .args(["train", "--method", "st", "--targets", "2", "--trees", "2"])
        .arg("--data")
        .arg(&data)
        .arg("--out")
        .arg(&model)
        .status()
        .unwrap();
    assert!(status.success());

    // one feature column fewer than the model expects
    let narrow = dir.path().join("narrow.csv");
    std::fs::write(&narrow, "x1\n1.0\n2.0\n").unwrap();
    let out = bin()
        .arg("predict")
        .arg("--model")
        .arg(&model)
        .arg("--data")
        .arg(&narrow)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn saved_model_predicts_identically_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_toy_csv(dir.path());
    let mut outputs = Vec::new();
    for run in 0..2 {
        let model = dir.path().join(format!("model_{run}.json"));
        let status = bin()
            .args(["train", "--method", "ercc", "--targets", "2", "--trees", "3"])
            .args(["--internal-folds", "2", "--seed", "11"])
            .arg("--data")
            .arg(&data)
            .arg("--out")
            .arg(&model)
            .status()
            .unwrap();
        assert!(status.success());
        let predictions = dir.path().join(format!("pred_{run}.csv"));
        let status = bin()
            .arg("predict")
            .arg("--model")
            .arg(&model)
            .arg("--data")
            .arg(&data)
            .arg("--out")
            .arg(&predictions)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(std::fs::read(&predictions).unwrap());
    }
    assert_eq!(outputs[0], outputs[1], "same seed must reproduce predictions bitwise");
}

#[test]
fn stats_subcommand_matches_experiment_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.toml");
    std::fs::write(
        &config,
        format!(
            r#"
seed = 3
folds = 3
methods = ["st", "mts", "mtsc"]

[learner]
trees = 4
internal_folds = 2

[[datasets]]
name = "edm"
path = "{}"
targets = 2

[[datasets]]
name = "sf1"
path = "{}"
targets = 3

[[datasets]]
name = "sf2"
path = "{}"
targets = 3
"#,
            dataset_path("edm").display(),
            dataset_path("sf1").display(),
            dataset_path("sf2").display()
        ),
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["experiment", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out_dir)
        .args(["--format", "machine"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    // replaying the exported matrix through `stats` reproduces the
    // bundle's embedded analysis
    let replay = bin()
        .args(["stats", "--scores"])
        .arg(out_dir.join("scores.csv"))
        .args(["--format", "machine"])
        .output()
        .unwrap();
    assert!(replay.status.success());
    let from_replay: serde_json::Value =
        serde_json::from_slice(&replay.stdout).unwrap();
    let from_bundle: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out_dir.join("stats.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(
        from_replay["avg_ranks"], from_bundle["avg_ranks"],
        "stats replay must match the experiment bundle"
    );
    assert_eq!(from_replay["friedman_chi2"], from_bundle["friedman_chi2"]);
    assert_eq!(from_replay["nemenyi_cd"], from_bundle["nemenyi_cd"]);

    // svg rendering works too
    let svg_path = dir.path().join("cd.svg");
    let status = bin()
        .args(["stats", "--scores"])
        .arg(out_dir.join("scores.csv"))
        .args(["--format", "svg", "--out"])
        .arg(&svg_path)
        .status()
        .unwrap();
    assert!(status.success());
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn experiment_reports_partial_failures_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.toml");
    std::fs::write(
        &config,
        format!(
            r#"
folds = 3
methods = ["st"]

[learner]
trees = 2

[[datasets]]
name = "edm"
path = "{}"
targets = 2

[[datasets]]
name = "missing"
path = "/nonexistent.arff"
targets = 2
"#,
            dataset_path("edm").display()
        ),
    )
    .unwrap();
    let out = bin()
        .args(["experiment", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAILED missing/ST"), "{stdout}");
    // the completed cell is still in the records
    let records = std::fs::read_to_string(dir.path().join("out/records.json")).unwrap();
    assert!(records.contains("\"edm\""));
}

#[test]
fn invalid_config_is_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    std::fs::write(&config, "methods = [\"nope\"]\n[[datasets]]\nname = \"d\"\npath = \"d\"\ntargets = 1\n").unwrap();
    let out = bin()
        .args(["experiment", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn datasets_info_reports_shapes() {
    let out = bin()
        .arg("datasets-info")
        .arg(dataset_path("edm"))
        .args(["--targets", "2", "--format", "machine"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let info: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(info[0]["rows"], 154);
    assert_eq!(info[0]["features"], 16);
    assert_eq!(info[0]["targets"], 2);
}
