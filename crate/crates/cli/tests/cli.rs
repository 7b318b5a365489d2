use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_ecoepi");

fn preset_file(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../presets").join(format!("{name}.ini"))
}

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(BIN).args(args).arg("--out").arg(out).output().expect("binary runs")
}

fn edited(dir: &Path, preset: &str, from: &str, to: &str) -> PathBuf {
    let text = fs::read_to_string(preset_file(preset)).unwrap();
    assert!(text.contains(from), "{from} not in {preset}");
    let path = dir.join(format!("{preset}-edited.ini"));
    fs::write(&path, text.replace(from, to)).unwrap();
    path
}

fn manifest(out: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap()
}

fn checksums(m: &Value) -> Vec<(String, String)> {
    m["artifacts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| (a["path"].as_str().unwrap().to_string(), a["sha256"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn every_bundled_preset_parses() {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(preset_file("x").parent().unwrap()).unwrap() {
        let path = entry.unwrap().path();
        let out = run(&["equilibria", "--config", path.to_str().unwrap()], dir.path());
        assert!(out.status.success(), "{}: {}", path.display(), String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn negative_growth_rate_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = edited(dir.path(), "row-a", "\nr = 0.4\n", "\nr = -0.4\n");
    let out = run(&["equilibria", "--config", cfg.to_str().unwrap()], &dir.path().join("o"));
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("`r`"), "{err}");
}

#[test]
fn missing_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = edited(dir.path(), "row-a", "gamma = 10\n", "");
    let out = run(&["turing-check", "--config", cfg.to_str().unwrap()], &dir.path().join("o"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gamma"));
}

#[test]
fn stability_guard_violation_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = edited(dir.path(), "row-a", "d2 = 0.001", "d2 = 10");
    let out = run(&["simulate", "--config", cfg.to_str().unwrap()], &dir.path().join("o"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("guard"));
}

#[test]
fn config_is_required() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["bounds"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table2_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["reproduce", "table2"], dir.path());
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("table2.csv")).unwrap();
    let printed = [
        ("A", 0.0, [0.0942, 0.0297, 0.0024, 0.0004]),
        ("A", 15.0, [0.3215, 0.0455, -0.0019, 0.0165]),
        ("B", 0.0, [0.0942, 0.0297, 0.0024, 0.0004]),
        ("B", 15.0, [0.3194, 0.0446, -0.0020, 0.0162]),
    ];
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    for (row, (label, k, want)) in rows.iter().zip(printed) {
        assert_eq!(row[0], label);
        assert_eq!(row[2].parse::<f64>().unwrap(), k);
        for (got, want) in row[3..].iter().zip(want) {
            let got: f64 = got.parse().unwrap();
            assert!((got - want).abs() <= 2e-3, "{label} k={k}: {got} vs {want}");
        }
    }
    let m = manifest(dir.path());
    assert_eq!(m["command"], "reproduce table2");
}

#[test]
fn serial_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = edited(dir.path(), "row-a", "times = 200, 400, 600, 800, 1000", "times = 0, 2, 4");
    let cfg = cfg.to_str().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let p = dir.path().join("p");
    for out in [&a, &b] {
        assert!(run(&["simulate", "--config", cfg, "--serial", "--coarse"], out).status.success());
    }
    assert!(run(&["simulate", "--config", cfg, "--coarse"], &p).status.success());
    let (ma, mb, mp) = (manifest(&a), manifest(&b), manifest(&p));
    assert_eq!(ma["execution"], "serial");
    assert_eq!(checksums(&ma), checksums(&mb));
    assert_eq!(checksums(&ma), checksums(&mp));
    assert_eq!(ma["config_sha256"], mb["config_sha256"]);
}

#[test]
fn config_hash_tracks_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let changed = edited(dir.path(), "row-a", "sigma = 0.026", "sigma = 0.027");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let orig = preset_file("row-a");
    assert!(run(&["turing-check", "--config", orig.to_str().unwrap()], &a).status.success());
    assert!(run(&["turing-check", "--config", changed.to_str().unwrap()], &b).status.success());
    assert_ne!(manifest(&a)["config_sha256"], manifest(&b)["config_sha256"]);
}

#[test]
fn several_equilibria_need_a_choice() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = edited(dir.path(), "row-a", "[output]", "[analysis]\nequilibrium = 3\n\n[output]");
    let out = run(&["turing-check", "--config", cfg.to_str().unwrap()], &dir.path().join("o"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("only 1 exist"));
}

#[test]
fn simulate_then_classify() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = edited(dir.path(), "row-a", "times = 200, 400, 600, 800, 1000", "times = 0, 100, 200");
    let cfg = cfg.to_str().unwrap();
    let out = dir.path().join("o");
    assert!(run(&["simulate", "--config", cfg, "--coarse"], &out).status.success());
    let classified = run(&["classify", "--config", cfg], &out);
    assert!(classified.status.success(), "{}", String::from_utf8_lossy(&classified.stderr));
    let report = fs::read_to_string(out.join("pattern.txt")).unwrap();
    assert!(report.contains("label = "), "{report}");
    assert!(fs::read_to_string(out.join("distances.csv")).unwrap().starts_with("t_a,t_b,field,distance"));
}

#[test]
fn fig8_manifest_lists_all_fields() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["reproduce", "fig8", "--coarse"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m = manifest(dir.path());
    let paths: Vec<String> = checksums(&m).into_iter().map(|(p, _)| p).collect();
    for field in ['u', 'v', 'w'] {
        let n = paths.iter().filter(|p| p.starts_with(&format!("fig8_{field}_t"))).count();
        assert!(n >= 2, "{field}: {n} snapshots in {paths:?}");
    }
    assert!(paths.iter().any(|p| p == "fig8_pattern.txt"));
}
