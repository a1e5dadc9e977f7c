use std::net::TcpListener;
use std::path::Path;
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

use serde_json::Value;
use softsnake_core::evaluation::EvaluationReport;
use softsnake_core::kinematics::WorkspaceSummary;
use softsnake_core::optimizer::DesignReport;
use softsnake_core::snake::SnakeReport;

fn softsnake(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_softsnake"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_json(o: &Output) -> Value {
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    serde_json::from_str(err.lines().last().unwrap()).unwrap()
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> T {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn design_reference_module() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("design.json");
    let o = softsnake(&["design", "--paper-defaults", "--n-fringes", "5", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("Thickness          T       45.6435  mm"), "{text}");
    assert!(text.contains("Outer radius       R       55.0000  mm"));
    assert!(text.contains("Number of fringes  N             5"));
    let report: DesignReport = read_json(&out);
    let m = report.module;
    assert_eq!(m.fringe_count, 5);
    assert!((m.fringe_base - 0.020).abs() < 1e-12);
    assert!((m.inner_radius - 0.025).abs() < 1e-12);
    assert!((m.fringe_height - 0.030).abs() < 1e-12);
    assert!((m.outer_radius - 0.055).abs() < 1e-12);
    assert!(report.fringe_check.mismatch);
}

#[test]
fn design_rejects_zero_iterations() {
    let o = softsnake(&["design", "--max-n", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"]["kind"], "validation");
}

#[test]
fn design_thickness_scales_with_root_of_force() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("a.json");
    let heavy = dir.path().join("b.json");
    assert!(softsnake(&["design", "--n-fringes", "5", "--out", base.to_str().unwrap()]).status.success());
    assert!(softsnake(&["design", "--n-fringes", "5", "--force", "200", "--out", heavy.to_str().unwrap()])
        .status
        .success());
    let a: DesignReport = read_json(&base);
    let b: DesignReport = read_json(&heavy);
    assert!((b.module.thickness / a.module.thickness - 2.0).abs() < 1e-12);
}

#[test]
fn design_defaults_conflict_with_explicit_dimensions() {
    let o = softsnake(&["design", "--paper-defaults", "--length", "50"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn workspace_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cloud.csv");
    let json = dir.path().join("extents.json");
    let o = softsnake(&[
        "workspace",
        "--steps",
        "2",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x_m,y_m,z_m"));
    assert_eq!(lines.count(), 16);
    let s: WorkspaceSummary = read_json(&json);
    assert_eq!(s.count, 16);
    assert!((s.extents.max[0] - 0.4).abs() < 1e-12);
}

#[test]
fn workspace_default_extents() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("extents.json");
    let o = softsnake(&["workspace", "--json", json.to_str().unwrap()]);
    assert!(o.status.success());
    let s: WorkspaceSummary = read_json(&json);
    assert_eq!(s.count, 160_000);
    for (got, want) in s.extents.max.iter().zip([0.4, 0.4, 0.3]) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn snake_end_point() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("pose.json");
    let csv = dir.path().join("pose.csv");
    let o = softsnake(&[
        "snake",
        "--angles",
        "25,25,25,25",
        "--json",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let r: SnakeReport = read_json(&json);
    let end = r.joints.last().unwrap();
    assert!((end.x - 0.16343).abs() < 1e-5);
    assert!((end.y - 0.31393).abs() < 2e-5);
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().next(), Some("joint,x_m,y_m"));
    assert_eq!(rows.lines().count(), 6);
}

#[test]
fn snake_straight_chain() {
    let o = softsnake(&["snake", "--si", "--angles", "0,0,0,0"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("    4  0.4000  0.0000"));
}

#[test]
fn snake_malformed_angles() {
    for bad in [&["snake", "--angles", "25,abc"][..], &["snake", "--angles", "25,25", "--lengths", "100"]] {
        let o = softsnake(bad);
        assert_eq!(o.status.code(), Some(2), "{bad:?}");
        assert_eq!(error_json(&o)["error"]["kind"], "validation");
    }
}

#[test]
fn snake_debug_trace_on_stderr() {
    let o = softsnake(&["snake", "--angles", "10,20", "--debug"]);
    assert!(o.status.success());
    let err = String::from_utf8(o.stderr).unwrap();
    let trace: Value = serde_json::from_str(&err).unwrap();
    assert_eq!(trace["difference_pinv"], serde_json::json!([0.5, -0.5, 0.0, 0.0]));
}

#[test]
fn evaluate_prototype() {
    let o = softsnake(&["evaluate"]);
    assert!(o.status.success());
    let classes: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().rev().nth(1).unwrap().to_string())
        .collect();
    assert_eq!(classes, ["Medium", "Medium", "Medium", "High"]);
}

#[test]
fn evaluate_zero_metrics() {
    let o = softsnake(&[
        "evaluate", "--json", "--max-speed", "0", "--step-height", "0", "--obstacle-radius", "0", "--slope", "0",
    ]);
    assert!(o.status.success());
    let r: EvaluationReport = serde_json::from_str(&stdout(&o)).unwrap();
    for (_, _, class) in r.rows() {
        assert_eq!(class.to_string(), "Low");
    }
}

#[test]
fn evaluate_custom_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    let toml = dir.path().join("t.toml");
    std::fs::write(&toml, "[speed]\nlow_upper = 0.6\nmedium_upper = 0.9\n\n[slope_deg]\nlow_upper = 70\nmedium_upper = 80\n").unwrap();
    let o = softsnake(&["evaluate", "--json", "--thresholds", toml.to_str().unwrap()]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["speed"]["class"], "Low");
    assert_eq!(v["step"]["class"], "Medium");
    assert_eq!(v["slope"]["class"], "Low");

    let json = dir.path().join("t.json");
    std::fs::write(&json, r#"{"obstacle": {"low_upper": 0.1, "medium_upper": 0.2}}"#).unwrap();
    let o = softsnake(&["evaluate", "--json", "--thresholds", json.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["obstacle"]["class"], "High");

    let typo = dir.path().join("typo.toml");
    std::fs::write(&typo, "[sped]\nlow_upper = 1\nmedium_upper = 2\n").unwrap();
    assert_eq!(softsnake(&["evaluate", "--thresholds", typo.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for run in 0..2 {
        let d = dir.path().join(format!("d{run}.json"));
        let c = dir.path().join(format!("c{run}.csv"));
        let s = dir.path().join(format!("s{run}.json"));
        assert!(softsnake(&["design", "--out", d.to_str().unwrap()]).status.success());
        assert!(softsnake(&["workspace", "--steps", "5", "--csv", c.to_str().unwrap()]).status.success());
        assert!(softsnake(&["snake", "--angles", "10,-20,30", "--json", s.to_str().unwrap()]).status.success());
        files.push([d, c, s].map(|p| std::fs::read(p).unwrap()));
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.json");
    assert!(softsnake(&["design", "--out", d.to_str().unwrap()]).status.success());
    let report: DesignReport = read_json(&d);
    let again: DesignReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(report, again);
}

fn free_port() -> u16 {
    TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port()
}

#[test]
fn serve_port_in_use_exits_1() {
    let held = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = held.local_addr().unwrap().port().to_string();
    let o = softsnake(&["serve", "--port", &port]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_json(&o)["error"]["kind"], "runtime");
}

#[test]
fn commands_through_a_running_service() {
    let port = free_port();
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("traj.csv");
    let mut child = Command::new(env!("CARGO_BIN_EXE_softsnake"))
        .args(["serve", "--port", &port.to_string(), "--log-trajectory", log.to_str().unwrap()])
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let url = format!("http://127.0.0.1:{port}");
    let deadline = Instant::now() + Duration::from_secs(10);
    while std::net::TcpStream::connect(("127.0.0.1", port)).is_err() {
        assert!(Instant::now() < deadline, "service did not start");
        std::thread::sleep(Duration::from_millis(50));
    }

    let local = softsnake(&["snake", "--angles", "25,25,25,25"]);
    let remote = softsnake(&["--server", &url, "snake", "--angles", "25,25,25,25"]);
    assert!(remote.status.success());
    assert_eq!(local.stdout, remote.stdout);

    let local = softsnake(&["design", "--n-fringes", "5"]);
    let remote = softsnake(&["design", "--n-fringes", "5", "--server", &url]);
    assert_eq!(local.stdout, remote.stdout);

    let bad = softsnake(&["design", "--max-n", "0", "--server", &url]);
    assert_eq!(bad.status.code(), Some(2));

    let o = softsnake(&["teleop", "--server", &url, "--joystick-x", "1", "--frames", "5"]);
    assert!(o.status.success());
    let frames: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(frames.len(), 5);
    assert!(frames.iter().all(|f| f["type"] == "state"));

    let o = softsnake(&["state", "--server", &url]);
    let state: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(state["module_bends"].as_array().unwrap().len(), 4);

    child.kill().unwrap();
    child.wait().unwrap();
    let log = std::fs::read_to_string(&log).unwrap();
    assert!(log.starts_with("t,mode,bend_1"));
}
