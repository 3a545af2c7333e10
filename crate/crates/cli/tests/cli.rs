use std::path::PathBuf;
use std::process::{Command, Output};

fn kdirac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kdirac")).args(args).output().expect("binary runs")
}

fn golden(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name).display().to_string()
}

#[test]
fn passing_run_exits_zero() {
    let out = kdirac(&["--n", "3", "--k", "2", "--level", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("rhs 32 prolongation 32 -> involutive"), "{text}");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["--n", "2"][..],
        &["--k", "3", "--level", "1"],
        &["--level", "3"],
        &["--n", "7", "--level", "2", "--ordering", "greedy"],
        &["--ordering", "random"],
        &["--ordering", "random:1", "--seed", "2"],
        &["--ordering", "greedy", "--seed", "2"],
        &["--ordering", "sideways"],
        &["--operator", "hyperbolic"],
        &["--write-golden"],
    ] {
        let out = kdirac(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn seed_flag_supplies_random_seed() {
    let a = kdirac(&["--k", "3", "--level", "1", "--ordering", "random", "--seed", "1", "--json"]);
    let b = kdirac(&["--k", "3", "--level", "1", "--ordering", "random:1", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn golden_match_and_mismatch() {
    let ok = kdirac(&["--n", "3", "--level", "1", "--json", "--golden", &golden("parabolic_n3_k2_level1_chart.json"), "--operator", "parabolic"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let bad = kdirac(&["--n", "3", "--level", "0", "--json", "--golden", &golden("parabolic_n3_k2_level1_chart.json"), "--operator", "parabolic"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("differs from golden"));
}

#[test]
fn write_golden_round_trip() {
    let path = std::env::temp_dir().join(format!("kdirac-golden-{}.json", std::process::id()));
    let p = path.display().to_string();
    let w = kdirac(&["--n", "4", "--json", "--golden", &p, "--write-golden"]);
    assert_eq!(w.status.code(), Some(0));
    let c = kdirac(&["--n", "4", "--json", "--golden", &p]);
    assert_eq!(c.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), c.stdout);
    std::fs::remove_file(&path).unwrap();
}
