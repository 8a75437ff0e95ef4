use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const SMALL: &str = r#"{"entries":[[2,240],[3,320],[6,80]],"dc":8,"n":640,"k":400}"#;

fn pnc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pnc"))
        .args(args)
        .output()
        .expect("pnc runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn small_distribution(dir: &Path) -> PathBuf {
    write(dir, "small.json", SMALL)
}

fn exit_config(dir: &Path, code: &str) -> PathBuf {
    let text = format!(
        r#"{{"code": {code}, "order": 4, "csi": "partial", "noise": "bits_per_symbol",
            "grid": {{"start_db": 9.0, "stop_db": 9.4, "step_db": 0.2}}, "seed": 3, "frames": 1}}"#
    );
    write(dir, "exit.json", &text)
}

fn ber_config(dir: &Path, dist: &Path) -> PathBuf {
    let text = format!(
        r#"{{"code": {{"distribution": {:?}}}, "order": 4, "csi": "partial", "feedback": "bicm",
            "snr_db": [9.0], "seed": 5, "max_frames": 40, "iterations": 30}}"#,
        s(dist)
    );
    write(dir, "ber.json", &text)
}

#[test]
fn dry_run_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = exit_config(dir.path(), r#"{"table_row": "V13"}"#);
    let out = dir.path().join("out");
    let o = pnc(&["exit", s(&cfg), "-o", s(&out), "--dry-run", "--snr", "12:12.4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("config hash"));
    assert!(stdout.contains("\"stop_db\": 12.4"));
    assert!(!out.exists());
}

#[test]
fn missing_field_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", r#"{"code": {"table_row": "V13"}, "order": 4}"#);
    let o = pnc(&["exit", s(&cfg), "-o", s(&dir.path().join("out"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("csi"));
}

#[test]
fn bad_override_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = exit_config(dir.path(), r#"{"table_row": "V13"}"#);
    let o = pnc(&["exit", s(&cfg), "--csi", "sometimes", "--dry-run"]);
    assert_eq!(o.status.code(), Some(2));
    let o = pnc(&["exit", s(&cfg), "--feedback", "bicm", "--dry-run"]);
    assert_eq!(o.status.code(), Some(2));
    let o = pnc(&["exit", s(&cfg), "--unknown-flag"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gen_code_output_loads_back() {
    let dir = tempfile::tempdir().unwrap();
    let dist = small_distribution(dir.path());
    let cfg = write(
        dir.path(),
        "gen.json",
        &format!(r#"{{"code": {{"distribution": {:?}}}, "seed": 4}}"#, s(&dist)),
    );
    let out = dir.path().join("out");
    let o = pnc(&["gen-code", s(&cfg), "-o", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let h = pnc_core::ldpc::load_alist(out.join("code.alist")).unwrap();
    assert_eq!((h.rows(), h.cols()), (240, 640));
    let d = pnc_core::DegreeDistribution::load(out.join("distribution.json")).unwrap();
    assert_eq!(d, pnc_core::DegreeDistribution::from_json(SMALL).unwrap());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["subcommand"], "gen-code");
    assert_eq!(manifest["seed"], 4);
}

#[test]
fn exit_run_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let dist = small_distribution(dir.path());
    let cfg = exit_config(dir.path(), &format!(r#"{{"distribution": {:?}}}"#, s(&dist)));
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = pnc(&["exit", s(&cfg), "-o", s(out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["threshold.json", "characteristic.csv", "characteristic.json", "vnd.csv", "cnd_inverse.csv"] {
        let x = fs::read(a.join(f)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, fs::read(b.join(f)).unwrap(), "{f} differs");
    }
    let text = fs::read_to_string(a.join("vnd.csv")).unwrap();
    assert!(text.starts_with("# exit v1 config="));
}

#[test]
fn ber_sweep_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let dist = small_distribution(dir.path());
    let cfg = ber_config(dir.path(), &dist);
    let out = dir.path().join("out");
    let o = pnc(&["ber", s(&cfg), "-o", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let first = fs::read_to_string(out.join("ber.csv")).unwrap();
    assert_eq!(first.lines().count(), 3);

    // every point is already on disk
    let o = pnc(&["ber", s(&cfg), "-o", s(&out)]);
    assert!(o.status.success());
    assert_eq!(first, fs::read_to_string(out.join("ber.csv")).unwrap());

    let o = pnc(&["ber", s(&cfg), "-o", s(&out), "--seed", "6"]);
    assert_eq!(o.status.code(), Some(1), "a changed config must not append to old results");
}

#[test]
fn optimize_ranks_candidates() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "opt.json",
        r#"{"base": "wimax", "order": 8, "csi": "none", "noise": "bits_per_symbol",
            "grid": {"start_db": 12.0, "stop_db": 12.0, "step_db": 0.1}, "seed": 1, "frames": 1,
            "points": 20, "top": 3}"#,
    );
    let out = dir.path().join("out");
    let o = pnc(&["optimize", s(&cfg), "-o", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out.join("ranking.csv")).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert!(lines[0].starts_with("# optimize v1"));
    assert_eq!(lines[1], "rank,degrees,counts,threshold_db");
    assert_eq!(lines.len(), 5);
    assert!(out.join("ranking.json").exists());
}
