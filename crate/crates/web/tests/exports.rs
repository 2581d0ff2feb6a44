use homvar_web::{analyze, examples, fundamental_form, identity_sweep};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).expect("valid JSON")
}

const J: &str = "m=2 n=2 k=1 L = u[1;1,0]*u[2;0,1] - u[1;0,1]*u[2;1,0]";

#[test]
fn analyze_jacobian() {
    let v = parse(analyze(J, 50));
    assert_eq!(v["ok"], true);
    assert_eq!(v["pass"], true);
    assert_eq!(v["sections"].as_array().unwrap().len(), 3);
    let el = &v["sections"][2]["report"]["results"][0];
    assert_eq!(el["is_null"], true);
}

#[test]
fn non_homogeneous_stops_early() {
    let v = parse(analyze("m=1 n=1 k=1 L = u[1;0]", 50));
    assert_eq!(v["ok"], true);
    assert_eq!(v["pass"], false);
    assert_eq!(v["sections"].as_array().unwrap().len(), 1);
}

#[test]
fn syntax_error_is_reported() {
    let v = parse(analyze("m=1 n=1 k=1 L = u[1;1] +", 50));
    assert_eq!(v["ok"], false);
    assert!(v["error"].as_str().unwrap().contains("line 1"));
}

#[test]
fn fundamental_form_of_jacobian_is_closed() {
    let v = parse(fundamental_form(J, 50));
    assert_eq!(v["pass"], true);
    let closure = &v["sections"][2]["report"]["results"][0];
    assert_eq!(closure["dTheta_m_zero"], true);
}

#[test]
fn sweep_rows() {
    let v = parse(identity_sweep(6));
    assert_eq!(v["pass"], true);
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.iter().filter(|r| r["name"].as_str().unwrap().starts_with("H q=")).count() == 7);
}

#[test]
fn presets_parse() {
    let v = parse(examples());
    for pair in v.as_array().unwrap() {
        let decl = pair[1].as_str().unwrap();
        assert_eq!(parse(analyze(decl, 10))["ok"], true, "{decl}");
    }
}
