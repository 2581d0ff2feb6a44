use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn gallery(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../core/gallery");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn homvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homvar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let mut all: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    all.extend(["--json", p]);
    let out = homvar(&all);
    let text = std::fs::read_to_string(&path).expect("report written");
    (out.status.code().unwrap(), serde_json::from_str(&text).unwrap())
}

#[test]
fn closure_on_jacobian() {
    let (code, v) = json_report(&["verify-closure", &gallery("jacobian.lag")]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "verify-closure");
    assert_eq!(v["problem"]["m"], 2);
    assert_eq!(v["results"][0]["is_null"], true);
    assert_eq!(v["results"][0]["dTheta_m_zero"], true);
    assert_eq!(v["pass"], true);
}

#[test]
fn closure_on_ratio_is_not_null() {
    let (code, v) = json_report(&["verify-closure", &gallery("jacobian_ratio.lag")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][0]["is_null"], false);
    assert_eq!(v["results"][0]["dTheta_m_zero"], false);
}

#[test]
fn theta_q_above_m_is_a_usage_error() {
    let out = homvar(&["theta", "--q", "2", "m=1", "n=2", "k=1", "L", "=", "u[1;1]^2/u[2;1]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("usage"));
}

#[test]
fn identity_sweep_has_thirteen_h_rows() {
    let (code, v) = json_report(&["verify-identities", "--max-q", "12"]);
    assert_eq!(code, 0);
    let rows = v["results"].as_array().unwrap();
    let h: Vec<&Value> = rows
        .iter()
        .filter(|r| r["name"].as_str().unwrap().starts_with("H q="))
        .collect();
    assert_eq!(h.len(), 13);
    assert!(h.iter().all(|r| r["pass"] == true));
    assert!(v["problem"].is_null());
}

#[test]
fn failing_homogeneity_exits_nonzero_with_residual() {
    let out = homvar(&["check-homogeneous", &gallery("not_homogeneous.lag")]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("first failure"));
    assert!(err.contains("-u[1;0]"));
}

#[test]
fn syntax_errors_report_position() {
    let out = homvar(&["hilbert", "m=1 n=1 k=1 L = u[1;1] +* 2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 1, column 25"), "{err}");
}

#[test]
fn order_above_k_is_rejected() {
    let out = homvar(&["hilbert", "m=1 n=1 k=1 L = u[1;2]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("index out of range"));
}

#[test]
fn text_output_is_elided_but_json_is_not() {
    let f = gallery("jacobian_ratio.lag");
    let out = homvar(&["theta", &f, "--max-terms", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("more terms elided"));
    let (_, v) = json_report(&["theta", &f, "--max-terms", "2"]);
    let comps = v["results"][0]["form"]["components"][""].as_array().unwrap();
    assert!(comps.len() > 2);
}

#[test]
fn json_to_stdout() {
    let out = homvar(&["euler-lagrange", &gallery("jacobian.lag"), "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"][0]["is_null"], true);
}

#[test]
fn every_gallery_problem_verifies() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/gallery");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let homogeneous = name != "not_homogeneous.lag";
        let p = path.to_str().unwrap();
        for cmd in ["hilbert", "euler-lagrange", "verify-recovery", "verify-closure", "verify-lemmas"] {
            let out = homvar(&[cmd, p, "--trials", "5"]);
            let want = if homogeneous { 0 } else { 2 };
            assert_eq!(out.status.code(), Some(want), "{cmd} {name}");
        }
    }
}

#[test]
fn unknown_command_is_a_usage_error() {
    let out = homvar(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}
