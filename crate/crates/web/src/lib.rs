//! Browser bindings. Every export takes plain strings or numbers and returns
//! a JSON string: `{"ok": true, ...}` on success, `{"ok": false, "error"}`
//! when the input is rejected.

use homvar::cli::{parse_problem, run_command, Command, Options, ProblemDecl, Report};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

fn section(title: &str, report: &Report, max_terms: usize) -> Value {
    json!({
        "title": title,
        "pass": report.pass(),
        "text": report.to_text(max_terms),
        "report": report.to_json(),
    })
}

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(Value::Object(mut body)) => {
            body.insert("ok".into(), json!(true));
            Value::Object(body).to_string()
        }
        Ok(other) => json!({ "ok": true, "value": other }).to_string(),
        Err(error) => json!({ "ok": false, "error": error }).to_string(),
    }
}

fn run_sections(
    problem: &ProblemDecl,
    commands: &[(&str, Command)],
    opts: &Options,
) -> Result<Value, String> {
    let mut sections = Vec::new();
    for (title, cmd) in commands {
        let report = run_command(*cmd, Some(problem), opts).map_err(|e| e.to_string())?;
        let stop = *cmd == Command::CheckHomogeneous && !report.pass();
        sections.push(section(title, &report, opts.max_terms));
        if stop {
            break;
        }
    }
    let pass = sections.iter().all(|s| s["pass"] == true);
    Ok(json!({ "problem": problem.to_json(), "pass": pass, "sections": sections }))
}

fn with_problem(
    src: &str,
    max_terms: usize,
    commands: &[(&str, Command)],
) -> String {
    let opts = Options {
        max_terms,
        ..Options::default()
    };
    respond(
        parse_problem(src)
            .map_err(|e| e.to_string())
            .and_then(|p| run_sections(&p, commands, &opts)),
    )
}

/// Homogeneity, the Hilbert forms and the Euler-Lagrange form of a declared
/// Lagrangian, each computed two ways and compared.
#[wasm_bindgen]
pub fn analyze(src: &str, max_terms: usize) -> String {
    with_problem(
        src,
        max_terms,
        &[
            ("Homogeneity", Command::CheckHomogeneous),
            ("Hilbert forms", Command::Hilbert),
            ("Euler-Lagrange form", Command::EulerLagrange),
        ],
    )
}

/// The fundamental form with its closure and recovery checks.
#[wasm_bindgen]
pub fn fundamental_form(src: &str, max_terms: usize) -> String {
    with_problem(
        src,
        max_terms,
        &[
            ("Homogeneity", Command::CheckHomogeneous),
            ("Fundamental form", Command::Theta),
            ("Closure", Command::VerifyClosure),
            ("Recovery", Command::VerifyRecovery),
        ],
    )
}

/// The coefficient identity sweep as table rows.
#[wasm_bindgen]
pub fn identity_sweep(max_q: usize) -> String {
    let opts = Options {
        max_q,
        ..Options::default()
    };
    respond(
        run_command(Command::VerifyIdentities, None, &opts)
            .map(|r| {
                let rows: Vec<Value> = r
                    .to_json()["results"]
                    .as_array()
                    .cloned()
                    .unwrap_or_default();
                json!({ "pass": r.pass(), "rows": rows })
            })
            .map_err(|e| e.to_string()),
    )
}

/// Gallery declarations offered as presets.
#[wasm_bindgen]
pub fn examples() -> String {
    json!([
        ["(u1')^2 / u2'", include_str!("../../core/gallery/quotient_m1.lag")],
        ["Jacobian J", include_str!("../../core/gallery/jacobian.lag")],
        ["J^2 / J'", include_str!("../../core/gallery/jacobian_ratio.lag")],
        ["Wronskian / (u1')^2", include_str!("../../core/gallery/wronskian_null_m1.lag")],
        ["Wronskian^2 / (u1')^5", include_str!("../../core/gallery/wronskian_sq_m1.lag")],
        ["u (not homogeneous)", include_str!("../../core/gallery/not_homogeneous.lag")],
    ])
    .to_string()
}
