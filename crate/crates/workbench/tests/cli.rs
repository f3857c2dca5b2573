use std::net::TcpListener;
use std::path::PathBuf;
use std::sync::Arc;

use quasar_workbench::{cli, FixedClock};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

fn quasar(args: &[&str]) -> (i32, String, String) {
    let clock = Arc::new(FixedClock("2026-01-01T00:00:00Z".parse().unwrap()));
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("quasar").chain(args.iter().copied());
    let code = cli::run(argv, clock, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn assess_prints_pqr() {
    let (code, out, _) = quasar(&["assess", &fixture("snapshot-basic.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("PQR 1.44 (normalized 0.48)"), "{out}");
    assert!(out.contains("Risk vector: 0.34, 0, 0.65"));
}

#[test]
fn extension_may_be_omitted() {
    let (code, out, _) = quasar(&["assess", &fixture("snapshot-basic")]);
    assert_eq!(code, 0);
    assert!(out.contains("PQR 1.44"));
}

#[test]
fn missing_file_exits_1() {
    let (code, _, err) = quasar(&["assess", "missing-file"]);
    assert_eq!(code, 1);
    assert!(err.contains("file not found"), "{err}");
}

#[test]
fn unknown_subcommand_prints_usage() {
    let (code, out, err) = quasar(&["frobnicate"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("Usage"), "{err}");
}

#[test]
fn help_exits_0() {
    let (code, out, _) = quasar(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("inventory"));
}

#[test]
fn rejected_weights_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixtures().join("snapshot-basic.json"))
        .unwrap()
        .replace("\"domainWeights\": [0.4, 0.6]", "\"domainWeights\": [0.4, 0.5]");
    let path = dir.path().join("bad.json");
    std::fs::write(&path, text).unwrap();
    let (code, _, err) = quasar(&["assess", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("domainWeights"), "{err}");
}

#[test]
fn gap_and_risk_components() {
    let (code, out, _) = quasar(&["gap", &fixture("snapshot-basic.json")]);
    assert_eq!(code, 0);
    assert_eq!(
        out.lines().nth(1).unwrap(),
        "1\tNetwork services\t0.466667\t0.9\t0.433333"
    );

    let (code, out, _) = quasar(&["risk", &fixture("snapshot-basic.json")]);
    assert_eq!(code, 0);
    assert_eq!(out, "category 1\t0.34\ncategory 2\t0\ncategory 3\t0.65\n");

    let (code, _, err) = quasar(&["risk", &fixture("snapshot-no-risk.json")]);
    assert_eq!(code, 1);
    assert!(err.contains("riskMatrix"));
}

#[test]
fn project_emits_csv() {
    let (code, out, _) = quasar(&[
        "project",
        "--alpha",
        "0.2",
        "--beta",
        "0.9",
        "--lambda",
        "0.5",
        "--horizon",
        "2",
        "--step",
        "1",
    ]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("t,P,I,ST,MT,LT"));
    let last: Vec<f64> = lines
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(last[0], 2.0);
    assert!((last[1] - 0.642485).abs() <= 1e-6, "{}", last[1]);
}

#[test]
fn project_with_actions_and_prose_mode() {
    let (code, out, _) = quasar(&[
        "project",
        "--alpha",
        "0.2",
        "--beta",
        "0.9",
        "--lambda",
        "0.5",
        "--i0",
        "0.1",
        "--if",
        "0.8",
        "--k",
        "0.3",
        "--horizon",
        "4",
        "--step",
        "0.5",
        "--lt-mode",
        "prose",
        "--actions",
        &fixture("actions.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1 + 9);
    let (code, _, err) = quasar(&[
        "project",
        "--alpha",
        "0.2",
        "--beta",
        "0.9",
        "--lambda",
        "0.5",
        "--horizon",
        "2",
        "--lt-mode",
        "sideways",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("lt-mode"));
}

#[test]
fn optimize_and_sweep() {
    let (code, out, _) = quasar(&["--json", "optimize", &fixture("problems/parabola.json")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["assignment"][0]["value"].as_f64().unwrap() - 0.5).abs() <= 1e-4);
    assert_eq!(v["feasible"], true);

    let (code, out, _) = quasar(&[
        "optimize",
        &fixture("problems/staffing-over-time.json"),
        "--sweep",
        "0:4:2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        out.lines().next(),
        Some("t,objective,feasible,migration,training")
    );
    assert_eq!(out.lines().count(), 4);
}

#[test]
fn inventory_commands() {
    let (code, out, _) = quasar(&[
        "--json",
        "inventory",
        "classify",
        &fixture("inventory-mixed.csv"),
        "--as-of",
        "2026-01-01T00:00:00Z",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ranking"][0], "sig-code");
    assert_eq!(v["classified"].as_array().unwrap().len(), 12);

    let (code, out, _) = quasar(&["inventory", "matrix", &fixture("inventory-mixed.json")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("cryptographic\t0.333333 (1/3)"), "{out}");

    let (code, out, err) = quasar(&["inventory", "scan-certs", &fixture("certs")]);
    assert_eq!(code, 0);
    // rsa pem + der + the valid block of the truncated bundle
    assert_eq!(out.lines().count(), 3, "{out}");
    assert!(err.contains("unreadable certificate"));
}

#[test]
fn probe_needs_opt_in() {
    let (code, _, err) = quasar(&["inventory", "probe", "127.0.0.1:443"]);
    assert_eq!(code, 1);
    assert!(err.contains("--allow-network"));

    let port = TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port();
    let target = format!("127.0.0.1:{port}");
    let (code, _, err) = quasar(&["inventory", "probe", &target, "--allow-network", "--timeout", "2"]);
    assert_eq!(code, 1);
    assert!(err.contains("connection refused"), "{err}");
}

#[test]
fn snapshot_store_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().to_str().unwrap();
    let (code, out, _) = quasar(&[
        "--store",
        store,
        "snapshot",
        "add",
        &fixture("snapshot-basic.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "basic\n");
    let (code, _, err) = quasar(&[
        "--store",
        store,
        "snapshot",
        "add",
        &fixture("snapshot-basic.json"),
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("already exists"));

    let (_, out, _) = quasar(&["--store", store, "snapshot", "list"]);
    assert_eq!(out, "basic\t2026-01-15T09:00:00+00:00\tBasic fixture\n");

    let (code, out, _) = quasar(&["--store", store, "report", "basic"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        std::fs::read_to_string(fixtures().join("reports/snapshot-basic.md")).unwrap()
    );

    let (code, _, _) = quasar(&["--store", store, "snapshot", "show", "nope"]);
    assert_eq!(code, 1);
}

#[test]
fn identical_commands_give_identical_output() {
    let a = quasar(&["--json", "assess", &fixture("snapshot-basic.json")]);
    let b = quasar(&["--json", "assess", &fixture("snapshot-basic.json")]);
    assert_eq!(a, b);
}

#[test]
fn port_in_use_exits_2() {
    let busy = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = busy.local_addr().unwrap().port().to_string();
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = quasar(&["serve", "--port", &port, "--store", dir.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot listen"), "{err}");
}
