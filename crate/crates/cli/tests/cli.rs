use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lqlab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lqlab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn report(out: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap()
}

const SMALL_SIM: &[&str] = &[
    "simulate", "--set", "sphere", "--d", "8", "--q", "2", "--N", "256", "--trials", "12",
    "--seed", "1", "--net-max-points", "64", "--restarts", "2", "--steps", "40",
];

#[test]
fn bound_example_evaluates_to_four() {
    let dir = tempfile::tempdir().unwrap();
    let out = lqlab(
        &["bound", "--gamma2", "1", "--diam", "1", "--N", "1", "--u", "1", "--q", "2", "--C", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let r = report(dir.path());
    assert_eq!(r["outputs"]["bound"].as_f64(), Some(4.0));
    assert_eq!(r["command"], "bound");
    assert!(r["version"].is_string());
}

#[test]
fn simulate_reruns_are_bit_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(lqlab(SMALL_SIM, a.path()).status.code(), Some(0));
    assert_eq!(lqlab(SMALL_SIM, b.path()).status.code(), Some(0));
    for file in ["report.json", "data.csv"] {
        let x = std::fs::read(a.path().join(file)).unwrap();
        let y = std::fs::read(b.path().join(file)).unwrap();
        assert_eq!(x, y, "{file} differs");
    }
    assert_eq!(report(a.path())["seed"].as_u64(), Some(1));
}

#[test]
fn thread_count_does_not_change_results() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let mut one = SMALL_SIM.to_vec();
    one.extend(["--threads", "1"]);
    assert_eq!(lqlab(&one, a.path()).status.code(), Some(0));
    let status = Command::new(env!("CARGO_BIN_EXE_lqlab"))
        .args(SMALL_SIM)
        .arg("--out")
        .arg(b.path())
        .env("LQLAB_THREADS", "3")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert_eq!(
        std::fs::read(a.path().join("data.csv")).unwrap(),
        std::fs::read(b.path().join("data.csv")).unwrap()
    );
}

#[test]
fn csv_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(lqlab(SMALL_SIM, dir.path()).status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("data.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("trial,N,d,q,statistic,value,seed"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 12);
    for (t, row) in rows.iter().enumerate() {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 7);
        assert_eq!(cols[0], t.to_string());
        assert_eq!(&cols[1..5], &["256", "8", "2", "sup_deviation"]);
        assert!(cols[5].parse::<f64>().unwrap() >= 0.0);
    }
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# small run\ncommand = simulate\nd = 4\nq = 3\nN = 32\ntrials = 3\nsteps = 10\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = lqlab(&["--config", cfg.to_str().unwrap(), "--d", "6"], &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    assert_eq!(r["command"], "simulate");
    assert_eq!(r["inputs"]["set"]["d"].as_u64(), Some(6));
    assert_eq!(r["inputs"]["q"].as_f64(), Some(3.0));
    assert_eq!(r["config"]["d"], "6");
    assert_eq!(r["config"]["trials"], "3");
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = lqlab(&["bound", "--no-such-flag", "1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(lqlab(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(lqlab(&["bound", "--q", "0.5"], dir.path()).status.code(), Some(2));
    assert_eq!(
        lqlab(&["bound", "--config", "/nonexistent/x.cfg"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        lqlab(&["scaling", "--N-grid", "64:32:x2"], dir.path()).status.code(),
        Some(2)
    );
}

#[test]
fn assertion_mode_turns_failures_into_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let mut tiny = SMALL_SIM.to_vec();
    tiny.extend(["--C", "1e-9"]);
    assert_eq!(lqlab(&tiny, dir.path()).status.code(), Some(0));
    assert_eq!(report(dir.path())["assertion"]["passed"], false);
    tiny.push("--assert");
    assert_eq!(lqlab(&tiny, dir.path()).status.code(), Some(3));
    let mut loose = SMALL_SIM.to_vec();
    loose.push("--assert");
    assert_eq!(lqlab(&loose, dir.path()).status.code(), Some(0));
}

#[test]
fn external_matrix_drives_rip_and_sections() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    // Rows: +-1 patterns, so every direction has the same L^2 norm.
    let mut text = String::new();
    for i in 0..16u32 {
        let row: Vec<String> = (0..4)
            .map(|j| if (i >> j) & 1 == 1 { "1" } else { "-1" }.to_string())
            .collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    std::fs::write(&path, text).unwrap();
    let out = dir.path().join("rip");
    let o = lqlab(
        &["rip", "--set", "sphere", "--d", "4", "--q", "2", "--matrix", path.to_str().unwrap(), "--assert"],
        &out,
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let cert = &report(&out)["outputs"]["certificate"];
    assert!((cert["worst_lower"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((cert["worst_upper"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let out = dir.path().join("sec");
    let o = lqlab(
        &["sections", "--set", "ball", "--d", "4", "--p", "2", "--matrix", path.to_str().unwrap()],
        &out,
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    // Orthogonal columns of norm 4: operator norm 4.
    let v = report(&out)["outputs"]["largest"].as_f64().unwrap();
    assert!((v - 4.0).abs() < 1e-6, "{v}");

    let o = lqlab(&["rip", "--d", "5", "--matrix", path.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn diag_and_calibrate_report_their_checks() {
    let dir = tempfile::tempdir().unwrap();
    let o = lqlab(&["diag", "--set", "l1", "--d", "3", "--N", "100", "--assert"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r = report(dir.path());
    let chain = &r["outputs"]["chain"];
    let total = chain["total"].as_f64().unwrap();
    let parts = chain["initial_sum"].as_f64().unwrap() + chain["terminal_sum"].as_f64().unwrap();
    assert_eq!(total, parts);
    assert_eq!(chain["critical_time"].as_u64(), Some(6));

    let o = lqlab(
        &[
            "calibrate", "--d", "4", "--N-grid", "32,128", "--trials", "8", "--steps", "20",
            "--assert",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path());
    assert!(r["outputs"]["constant"].as_f64().unwrap() > 0.0);
    assert_eq!(r["outputs"]["infeasible"], false);
}
