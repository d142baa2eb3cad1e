use std::path::Path;
use std::process::Command;

use monitored_entropy::experiment::ExperimentConfig;

fn cnt(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cnt")).args(args).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("config.json");
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const SMALL_FIG3: &str = r#"{"fig3": {"log_points": 40, "linear_points": 80, "random_starts": 1}}"#;

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"chain": {"stepz": 3}}"#);
    let o = cnt(&["fig2a", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    let cfg = write_config(dir.path(), r#"{"experiment": "fig3"}"#);
    assert_eq!(cnt(&["bounds", "--config", &cfg]).status.code(), Some(2));
    assert_eq!(cnt(&["fig4"]).status.code(), Some(2));
    let cfg = write_config(dir.path(), r#"{"chain": {"microscopic_sizes": [14]}}"#);
    assert_eq!(cnt(&["fig2c", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn budget_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"chain": {"steps": 40}}"#);
    let o = cnt(&["fig2c", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!dir.path().join("fig2c.csv").exists());
}

#[test]
fn outputs_are_deterministic_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL_FIG3);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for (out, threads) in [(&a, "1"), (&b, "3")] {
        let o = cnt(&["fig3", "--config", &cfg, "--out", out.to_str().unwrap(), "--threads", threads]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["fig3.csv", "fig3_manifest.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let csv = std::fs::read_to_string(a.join("fig3.csv")).unwrap();
    assert!(csv.starts_with("# "));
    let row = csv.lines().find(|l| !l.starts_with('#') && !l.starts_with('y')).unwrap();
    for cell in row.split(',') {
        let mantissa = cell.trim_start_matches('-').split('e').next().unwrap();
        assert_eq!(mantissa.replace('.', "").len(), 12, "{cell}");
    }
    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(a.join("fig3_manifest.json")).unwrap()).unwrap();
    let config: ExperimentConfig = serde_json::from_str(SMALL_FIG3).unwrap();
    assert_eq!(manifest["config_sha256"], config.sha256());
    assert_eq!(manifest["experiment"], "fig3");
}
