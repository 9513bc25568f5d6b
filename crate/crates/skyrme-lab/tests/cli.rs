//! End-to-end checks of the command-line interface: exit codes, file
//! round-trips, and byte-level determinism of emitted series.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skyrme-lab"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary should launch")
}

#[test]
fn vacuum_evolve_emits_all_zero_series_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "\
mode = skyrme
n1 = 0
dr = 0.03125
r_max = 8
t_end = 0.5
data.kind = gaussian
data.amp = 0
out.series = series.csv
out.snapshots = snap
";
    fs::write(dir.path().join("run.cfg"), cfg).unwrap();
    let out = run_in(dir.path(), &["evolve", "--config", "run.cfg"]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let series = fs::read_to_string(dir.path().join("series.csv")).unwrap();
    let mut lines = series.lines();
    assert!(lines.next().unwrap().starts_with("t,E,q,cont"));
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 13);
        // every diagnostic of the vacuum is exactly zero
        for col in &cols[1..] {
            assert_eq!(
                col.parse::<f64>().unwrap(),
                0.0,
                "nonzero vacuum column in {line}"
            );
        }
    }
    assert!(dir.path().join("snap_final.csv").exists());
    assert!(dir.path().join("series.csv.manifest.json").exists());

    // identical config + version → byte-identical series
    let bytes1 = fs::read(dir.path().join("series.csv")).unwrap();
    let out2 = run_in(dir.path(), &["evolve", "--config", "run.cfg"]);
    assert!(out2.status.success());
    assert_eq!(bytes1, fs::read(dir.path().join("series.csv")).unwrap());
}

#[test]
fn series_bytes_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "\
mode = skyrme
n1 = 1
dr = 0.03125
r_max = 8
t_end = 0.25
data.amp = 0.4
out.series = s.csv
out.snapshots = snap
";
    fs::write(dir.path().join("run.cfg"), cfg).unwrap();
    let mut bytes = Vec::new();
    for threads in ["1", "2"] {
        let out = bin()
            .current_dir(dir.path())
            .env("SKYRME_THREADS", threads)
            .args(["evolve", "--config", "run.cfg"])
            .output()
            .unwrap();
        assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
        bytes.push(fs::read(dir.path().join("s.csv")).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
}

#[test]
fn config_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.cfg"), "t_end = 1.0\n").unwrap();
    let out = run_in(dir.path(), &["evolve", "--config", "bad.cfg"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing required key: mode"));

    let out = run_in(dir.path(), &["evolve", "--config", "absent.cfg"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn norms_on_zero_snapshot_prints_zero() {
    let dir = tempfile::tempdir().unwrap();
    let mut snap = String::from("r,u,ut,v,vt,phi,phit\n");
    for j in 0..64 {
        let r = (j as f64 + 0.5) * 0.125;
        snap.push_str(&format!("{r:.16e},0,0,0,0,0,0\n"));
    }
    fs::write(dir.path().join("zero.csv"), snap).unwrap();
    let out = run_in(
        dir.path(),
        &[
            "norms",
            "--snapshot",
            "zero.csv",
            "--sigma",
            "2.5",
            "--dim",
            "5",
        ],
    );
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "0");
}

#[test]
fn norms_round_trip_through_emitted_snapshot() {
    // evolve writes a final snapshot; `norms` must accept it
    let dir = tempfile::tempdir().unwrap();
    let cfg = "\
mode = skyrme
n1 = 1
dr = 0.03125
r_max = 8
t_end = 0.25
data.amp = 0.4
out.series = s.csv
out.snapshots = snap
";
    fs::write(dir.path().join("run.cfg"), cfg).unwrap();
    let out = run_in(dir.path(), &["evolve", "--config", "run.cfg"]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = run_in(
        dir.path(),
        &[
            "norms",
            "--snapshot",
            "snap_final.csv",
            "--sigma",
            "1.0",
            "--dim",
            "5",
            "--field",
            "v",
        ],
    );
    assert!(out.status.success());
    let val: f64 = String::from_utf8_lossy(&out.stdout).trim().parse().unwrap();
    assert!(val.is_finite() && val > 0.0);
}

#[test]
fn validate_data_reports_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "\
mode = skyrme
n1 = 1
dr = 0.0625
r_max = 8
t_end = 1
data.amp = 0.4
";
    fs::write(dir.path().join("v.cfg"), cfg).unwrap();
    let out = run_in(
        dir.path(),
        &[
            "validate-data",
            "--config",
            "v.cfg",
            "--s",
            "3.55",
            "--out",
            "report.jsonl",
        ],
    );
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = fs::read_to_string(dir.path().join("report.jsonl")).unwrap();
    let mut names = Vec::new();
    for line in report.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        names.push(v["name"].as_str().unwrap().to_string());
        assert!(v["coarse"].as_f64().unwrap().is_finite());
    }
    assert!(names.contains(&"phitt_l2".to_string()));
    assert!(names.contains(&"energy".to_string()));
}

#[test]
fn static_profile_command_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "static", "--n1", "1", "--rend", "25", "--tol", "1e-6", "--dr", "0.015625", "--rmax",
            "8", "--out", "prof.csv",
        ],
    );
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("b_star"));
    assert!(stdout.contains("virial_balance"));
    let prof = fs::read_to_string(dir.path().join("prof.csv")).unwrap();
    assert!(prof.starts_with("r,u,ur"));
    assert_eq!(prof.lines().count(), 1 + 512);
}

#[test]
fn sigma_blowup_exits_4_with_detection() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "\
mode = sigma
data.T = 1.0
dr = 0.0009765625
monitor_every = 1024
out.series = sigma.csv
out.snapshots = sig
";
    fs::write(dir.path().join("s.cfg"), cfg).unwrap();
    let out = run_in(
        dir.path(),
        &["sigma-blowup", "--T", "1.0", "--config", "s.cfg"],
    );
    assert_eq!(
        out.status.code(),
        Some(4),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("blow-up-detected"), "stdout: {stdout}");
}
