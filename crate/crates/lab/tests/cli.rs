use std::path::Path;
use std::process::Command;

fn liftoff() -> Command {
    Command::new(env!("CARGO_BIN_EXE_liftoff"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const SMALL: &str = r#"
name = "small"
[profile]
kind = "powerlaw"
A = 3.0
beta = -1.0
[domain]
n = 2
r_max = 10.0
num_nodes = 101
[initial]
kind = "gaussian"
sigma = 1.0
[solver]
dt = 0.05
[run]
t_end = 0.5
"#;

#[test]
fn classify_prints_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", SMALL);
    let out = liftoff().arg("classify").arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("verdict:  LiftOff"), "{stdout}");
    assert!(stdout.contains("L:        3"), "{stdout}");
}

#[test]
fn simulate_writes_artifacts_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", SMALL);
    let out_dir = dir.path().join("out");
    let out = liftoff()
        .args(["--quiet", "--out"])
        .arg(&out_dir)
        .arg("simulate")
        .arg(&cfg)
        .output()
        .unwrap();
    // lift-off is not reached by t = 0.5: reported as a mismatch
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    for f in ["frames.csv", "diagnostics.csv", "report.json"] {
        assert!(out_dir.join(f).is_file(), "{f}");
    }
}

#[test]
fn invalid_config_reports_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", &SMALL.replace("A = 3.0", "A = \"3\""));
    let out = liftoff().arg("classify").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("profile.A"), "{stderr}");
}

#[test]
fn sweep_prints_one_row_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", SMALL);
    let out = liftoff()
        .args(["--threads", "2", "sweep"])
        .arg(&cfg)
        .args(["--param", "A", "--values", "1,2,3"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.trim_end().lines().count(), 4, "{stdout}");
    assert!(stdout.contains("CriticalResolved(Decay)"));

    let out = liftoff()
        .arg("sweep")
        .arg(&cfg)
        .args(["--param", "gamma", "--values", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_suite_is_an_error() {
    let out = liftoff().args(["verify", "everything"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("oracle, conservation, liftoff, decay, critical, invariants, convergence"));
}

#[test]
fn verify_critical_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = liftoff()
        .args(["--out"])
        .arg(dir.path())
        .args(["verify", "critical"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("criterion  6 critical-family      PASS"), "{stdout}");
    assert!(dir.path().join("verify-critical.json").is_file());
}
