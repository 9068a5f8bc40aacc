use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn hchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hchain")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn unknown_selector_is_a_usage_error() {
    let o = hchain(&["verify", "--system", "octic"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown system"));
    assert_eq!(hchain(&["verify"]).status.code(), Some(2));
    assert_eq!(hchain(&["spectrum", "--chain", "1,3"]).status.code(), Some(2));
}

#[test]
fn bound_zero_gives_only_the_ground_tuple() {
    let o = hchain(&["spectrum", "--chain", "1,2,2", "--bound", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2, "{}", stdout(&o));
}

#[test]
fn coupling_outside_domain_reports_the_bound() {
    let o = hchain(&["spectrum", "--chain", "1,1,2", "--mu3=-3/2"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("mu3 > -1"), "{err}");
}

#[test]
fn config_overrides_flags() {
    let dir = scratch("config");
    let cfg = dir.join("run.toml");
    fs::write(&cfg, "bound = 0\nformat = \"json\"\n").unwrap();
    let o = hchain(&["spectrum", "--chain", "1,1,2", "--bound", "3", "--format", "csv", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    fs::write(&cfg, "bogus_key = 1\n").unwrap();
    assert_eq!(hchain(&["spectrum", "--chain", "1,1,2", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_writes_a_report_and_reruns_identically() {
    let dir = scratch("verify");
    let args = ["verify", "--system", "q-classical", "--format", "md", "--out", dir.to_str().unwrap()];
    let o = hchain(&args);
    assert_eq!(o.status.code(), Some(0));
    let path = dir.join("verify-q-classical.md");
    let first = fs::read_to_string(&path).unwrap();
    assert!(first.contains("0 failed"));
    hchain(&args);
    assert_eq!(fs::read_to_string(&path).unwrap(), first);
}

#[test]
fn oracle_spectrum_and_plot() {
    let dir = scratch("plot");
    let o = hchain(&["spectrum", "--chain", "1,2,4", "--bound", "2", "--oracle", "--plot", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.join("spectrum-1_2_4.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",match")));
    assert!(fs::read_to_string(dir.join("spectrum-1_2_4.svg")).unwrap().starts_with("<svg"));
}
