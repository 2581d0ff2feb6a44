//! Problem declarations, command dispatch and reports for the command-line
//! front end. The binary only parses arguments and writes output; everything
//! that decides what is computed and whether it passed lives here.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::checks::operator_suite;
use crate::error::{Error, Result};
use crate::forms::ScalarForm;
use crate::identities::{identity_sweep, IdentityReport};
use crate::multiindex::MultiIndex;
use crate::symbolic::{line_col, parse_expr_at, ExprContext, RatExpr};
use crate::variational::{FormCheck, Lagrangian, ScalarCheck};
use crate::vvforms::VectorValuedForm;

/// A parsed and validated `m=<int> n=<int> k=<int> L = <expr>` declaration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemDecl {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    /// The expression text as written.
    pub lagrangian: String,
    pub expr: RatExpr,
}

impl ProblemDecl {
    pub fn lagrangian_function(&self) -> Result<Lagrangian> {
        Lagrangian::new(self.m, self.n, self.k, self.expr.clone())
    }

    pub fn to_json(&self) -> Value {
        json!({ "m": self.m, "n": self.n, "k": self.k, "L": self.expr.to_string() })
    }
}

impl fmt::Display for ProblemDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} n={} k={} L = {}", self.m, self.n, self.k, self.expr)
    }
}

struct Scanner<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        let (line, column) = line_col(self.src, self.pos);
        Error::SyntaxError {
            line,
            column,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    /// Skips whitespace and `#` comments running to the end of a line.
    fn skip_blank(&mut self) {
        loop {
            let rest = self.rest();
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                return;
            }
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        self.skip_blank();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(self.error(format!("expected '{token}'")))
        }
    }

    fn integer(&mut self, name: &str) -> Result<usize> {
        self.skip_blank();
        let digits = self.rest().chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.error(format!("expected an integer value for {name}")));
        }
        let text = &self.rest()[..digits];
        let value = text
            .parse()
            .map_err(|_| self.error(format!("{name} = {text} is too large")))?;
        if value == 0 {
            return Err(Error::IndexOutOfRange(format!("{name} must be positive")));
        }
        self.pos += digits;
        Ok(value)
    }
}

/// Parses a problem declaration. Lines starting with `#` are comments.
pub fn parse_problem(text: &str) -> Result<ProblemDecl> {
    let mut sc = Scanner { src: text, pos: 0 };
    let mut dims = [0usize; 3];
    for (slot, name) in dims.iter_mut().zip(["m", "n", "k"]) {
        sc.expect(name)?;
        sc.expect("=")?;
        *slot = sc.integer(name)?;
    }
    let [m, n, k] = dims;
    sc.expect("L")?;
    sc.expect("=")?;
    sc.skip_blank();
    let start = sc.pos;
    let expr = parse_expr_at(text, start, &ExprContext::new(m, n, k))?;
    let decl = ProblemDecl {
        m,
        n,
        k,
        lagrangian: text[start..].trim().to_string(),
        expr,
    };
    // Dimension limits beyond what the expression context checks.
    decl.lagrangian_function()?;
    Ok(decl)
}

impl FromStr for ProblemDecl {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_problem(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    CheckHomogeneous,
    Hilbert,
    EulerLagrange,
    Theta,
    VerifyRecovery,
    VerifyClosure,
    VerifyIdentities,
    VerifyLemmas,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::CheckHomogeneous,
        Command::Hilbert,
        Command::EulerLagrange,
        Command::Theta,
        Command::VerifyRecovery,
        Command::VerifyClosure,
        Command::VerifyIdentities,
        Command::VerifyLemmas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::CheckHomogeneous => "check-homogeneous",
            Command::Hilbert => "hilbert",
            Command::EulerLagrange => "euler-lagrange",
            Command::Theta => "theta",
            Command::VerifyRecovery => "verify-recovery",
            Command::VerifyClosure => "verify-closure",
            Command::VerifyIdentities => "verify-identities",
            Command::VerifyLemmas => "verify-lemmas",
        }
    }

    /// Whether the command operates on a declared Lagrangian.
    pub fn needs_problem(self) -> bool {
        self != Command::VerifyIdentities
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown command '{s}'")))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    /// Selects a single `q` for `theta` and `verify-recovery`.
    pub q: Option<usize>,
    pub max_q: usize,
    /// Text-mode size limit; JSON output is never elided.
    pub max_terms: usize,
    pub seed: u64,
    /// Random trials per identity in `verify-lemmas`.
    pub trials: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            q: None,
            max_q: 12,
            max_terms: 200,
            seed: 42,
            trials: 50,
        }
    }
}

/// One entry of a report. `pass` is `None` for purely informational
/// output, which never affects the exit status.
#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub pass: Option<bool>,
    pub data: Value,
    /// Human-readable body, one item per line.
    pub lines: Vec<String>,
}

impl Entry {
    fn info(name: impl Into<String>, data: Value, lines: Vec<String>) -> Self {
        Entry {
            name: name.into(),
            pass: None,
            data,
            lines,
        }
    }

    fn check(name: impl Into<String>, pass: bool, data: Value, lines: Vec<String>) -> Self {
        Entry {
            name: name.into(),
            pass: Some(pass),
            data,
            lines,
        }
    }

    fn from_form_check(c: &FormCheck) -> Self {
        Entry::check(
            &c.name,
            c.pass(),
            json!({ "residual": c.residual.to_json() }),
            if c.pass() { Vec::new() } else { vv_lines(&c.residual) },
        )
    }

    fn from_scalar_check(c: &ScalarCheck) -> Self {
        Entry::check(
            &c.name,
            c.pass(),
            json!({ "residual": c.residual.to_json() }),
            if c.pass() { Vec::new() } else { form_lines(&c.residual) },
        )
    }

    fn from_identity(r: &IdentityReport) -> Self {
        let name = format!("{} {}", r.name, r.parameter_text());
        let line = format!("brute {} closed {}", r.brute, r.closed);
        Entry::check(name, r.pass, r.to_json(), vec![line])
    }

    pub fn to_json(&self) -> Value {
        let mut out = match &self.data {
            Value::Object(map) => map.clone(),
            _ => serde_json::Map::new(),
        };
        out.insert("name".into(), json!(self.name));
        out.insert("pass".into(), json!(self.pass));
        Value::Object(out)
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: Command,
    pub problem: Option<ProblemDecl>,
    pub entries: Vec<Entry>,
}

impl Report {
    /// True when every asserted check holds.
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass != Some(false))
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass() {
            0
        } else {
            1
        }
    }

    pub fn first_failure(&self) -> Option<&Entry> {
        self.entries.iter().find(|e| e.pass == Some(false))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command.name(),
            "problem": self.problem.as_ref().map(ProblemDecl::to_json),
            "results": self.entries.iter().map(Entry::to_json).collect::<Vec<_>>(),
            "pass": self.pass(),
        })
    }

    /// Text rendering; each entry body is cut to `max_terms` lines.
    pub fn to_text(&self, max_terms: usize) -> String {
        let mut out = format!("command: {}\n", self.command);
        if let Some(p) = &self.problem {
            out.push_str(&format!("problem: {p}\n"));
        }
        for e in &self.entries {
            let tag = match e.pass {
                Some(true) => "PASS",
                Some(false) => "FAIL",
                None => "INFO",
            };
            out.push_str(&format!("[{tag}] {}\n", e.name));
            for line in e.lines.iter().take(max_terms) {
                out.push_str(&format!("    {line}\n"));
            }
            if e.lines.len() > max_terms {
                out.push_str(&format!(
                    "    ... {} more terms elided (see --json)\n",
                    e.lines.len() - max_terms
                ));
            }
        }
        let passed = self.entries.iter().filter(|e| e.pass == Some(true)).count();
        let asserted = self.entries.iter().filter(|e| e.pass.is_some()).count();
        out.push_str(&format!(
            "result: {} ({passed}/{asserted} checks passed)\n",
            if self.pass() { "PASS" } else { "FAIL" }
        ));
        out
    }
}

/// One line per term of a scalar form.
pub fn form_lines(w: &ScalarForm) -> Vec<String> {
    if w.is_zero() {
        return vec!["0".into()];
    }
    w.terms()
        .map(|(basis, c)| {
            if basis.is_empty() {
                c.to_string()
            } else {
                let b: Vec<String> = basis.iter().map(|v| v.to_string()).collect();
                format!("({c}) {}", b.join(" ^ "))
            }
        })
        .collect()
}

/// One line per term, each prefixed by its `dt` frame.
pub fn vv_lines(phi: &VectorValuedForm) -> Vec<String> {
    if phi.is_zero() {
        return vec!["0".into()];
    }
    let mut out = Vec::new();
    for (frame, w) in phi.components() {
        if w.is_zero() {
            continue;
        }
        let f: Vec<String> = frame.iter().map(|i| format!("dt{i}")).collect();
        let f = if f.is_empty() { "1".to_string() } else { f.join(" ^ ") };
        out.extend(form_lines(w).into_iter().map(|l| format!("[{f}] {l}")));
    }
    out
}

fn require_problem(cmd: Command, problem: Option<&ProblemDecl>) -> Result<&ProblemDecl> {
    problem.ok_or_else(|| Error::Usage(format!("{cmd} needs a problem declaration")))
}

/// Runs `cmd`. Errors are usage or input problems; failed checks are
/// reported through [`Report::pass`].
pub fn run_command(cmd: Command, problem: Option<&ProblemDecl>, opts: &Options) -> Result<Report> {
    let mut entries = Vec::new();
    let lagrangian = match cmd.needs_problem() {
        true => Some(require_problem(cmd, problem)?.lagrangian_function()?),
        false => None,
    };
    match (cmd, &lagrangian) {
        (Command::VerifyIdentities, _) => {
            for r in identity_sweep(opts.max_q)? {
                entries.push(Entry::from_identity(&r));
            }
        }
        (_, Some(l)) => run_on_lagrangian(cmd, l, opts, &mut entries)?,
        (_, None) => unreachable!("problem required"),
    }
    Ok(Report {
        command: cmd,
        problem: problem.cloned(),
        entries,
    })
}

fn q_range(l: &Lagrangian, opts: &Options, upper: usize) -> Result<Vec<usize>> {
    match opts.q {
        Some(q) if q > upper => Err(Error::Usage(format!(
            "--q {q} out of range: need q ≤ {upper} for m = {}",
            l.m()
        ))),
        Some(q) => Ok(vec![q]),
        None => Ok((0..=upper).collect()),
    }
}

fn run_on_lagrangian(
    cmd: Command,
    l: &Lagrangian,
    opts: &Options,
    entries: &mut Vec<Entry>,
) -> Result<()> {
    let m = l.m();
    match cmd {
        Command::CheckHomogeneous => {
            let h = l.check_homogeneous();
            let lines = h
                .violations
                .iter()
                .map(|v| format!("d^{}_{} L residual {}", v.index, v.j, v.residual))
                .collect();
            entries.push(Entry::check("homogeneous", h.is_homogeneous(), h.to_json(), lines));
        }
        Command::Hilbert => {
            let display = l.hilbert_forms()?;
            let via = l.hilbert_forms_via_homotopy()?;
            for (i, th) in display.iter().enumerate() {
                entries.push(Entry::info(
                    format!("theta^{}", i + 1),
                    json!({ "form": th.to_json() }),
                    form_lines(th),
                ));
            }
            for (i, (a, b)) in display.iter().zip(&via).enumerate() {
                let residual = a.sub(b);
                entries.push(Entry::check(
                    format!("theta^{} equals the component of P d Theta_0", i + 1),
                    residual.is_zero(),
                    json!({ "residual": residual.to_json() }),
                    if residual.is_zero() { Vec::new() } else { form_lines(&residual) },
                ));
            }
        }
        Command::EulerLagrange => {
            let coord = l.euler_lagrange_coordinate();
            let intrinsic = l.euler_lagrange_intrinsic()?;
            entries.push(Entry::info(
                "epsilon",
                json!({ "form": coord.to_json(), "is_null": coord.is_zero() }),
                form_lines(coord),
            ));
            let residual = intrinsic.sub(coord);
            entries.push(Entry::check(
                "dL - d_i theta^i equals the coordinate Euler-Lagrange form",
                residual.is_zero(),
                json!({ "residual": residual.to_json() }),
                if residual.is_zero() { Vec::new() } else { form_lines(&residual) },
            ));
        }
        Command::Theta => {
            let qs = match opts.q {
                None => vec![m],
                Some(_) => q_range(l, opts, m)?,
            };
            for q in qs {
                let t = l.theta(q)?;
                entries.push(Entry::info(
                    format!("Theta_{q}"),
                    json!({ "q": q, "form": t.to_json() }),
                    vv_lines(t),
                ));
            }
        }
        Command::VerifyRecovery => {
            if m == 0 {
                return Ok(());
            }
            for q in q_range(l, opts, m - 1)? {
                entries.push(Entry::from_form_check(&l.verify_recovery(q)?));
            }
        }
        Command::VerifyClosure => {
            let c = l.verify_closure()?;
            let line = format!(
                "is_null {} dTheta_m_zero {}{}",
                c.is_null,
                c.dtheta_m_zero,
                if c.proved_range { "" } else { " (not asserted for m > 2)" }
            );
            entries.push(Entry::check(
                "epsilon = 0 iff dTheta_m = 0",
                c.consistent(),
                json!({
                    "is_null": c.is_null,
                    "dTheta_m_zero": c.dtheta_m_zero,
                    "asserted": c.proved_range,
                }),
                vec![line],
            ));
        }
        Command::VerifyLemmas => structural_entries(l, opts, entries)?,
        Command::VerifyIdentities => unreachable!("handled without a problem"),
    }
    Ok(())
}

fn structural_entries(l: &Lagrangian, opts: &Options, entries: &mut Vec<Entry>) -> Result<()> {
    let m = l.m();
    for c in l.check_hilbert_contractions()? {
        entries.push(Entry::from_scalar_check(&c));
    }
    for len in 1..=2 {
        for index in MultiIndex::enumerate(m, len) {
            for i in 1..=m {
                for j in 1..=m {
                    entries.push(Entry::from_scalar_check(
                        &l.check_hilbert_derivative(&index, i, j)?,
                    ));
                }
            }
        }
    }
    for q in 0..m {
        entries.push(Entry::from_form_check(&l.check_euler_differences(q)?));
        entries.push(Entry::from_form_check(&l.check_euler_recovery(q)?));
    }
    entries.push(Entry::from_form_check(&l.check_euler_top()?));
    for c in l.check_hilbert_symmetry()? {
        entries.push(Entry::from_scalar_check(&c));
    }
    if l.k() == 1 {
        let closed = l.first_order_fundamental()?;
        let residual = closed.sub(&l.fundamental_form()?);
        entries.push(Entry::check(
            "Theta_m = (1/m!) (S^1 d)...(S^m d) L",
            residual.is_zero(),
            json!({ "residual": residual.to_json() }),
            if residual.is_zero() { Vec::new() } else { form_lines(&residual) },
        ));
    }
    for row in operator_suite(opts.seed, opts.trials)? {
        let lines = row.first_failure.iter().cloned().collect();
        entries.push(Entry::check(
            format!("{} ({} trials, seed {})", row.name, row.trials, opts.seed),
            row.pass(),
            row.to_json(),
            lines,
        ));
    }
    Ok(())
}

/// Every expression string in a report (`L`, coefficients, identity values
/// and homogeneity residuals), for round-trip checks.
pub fn report_expressions(report: &Value) -> Vec<String> {
    fn walk(v: &Value, key: Option<&str>, out: &mut Vec<String>) {
        match v {
            Value::String(s) if matches!(key, Some("L" | "coeff" | "residual" | "brute" | "closed")) => {
                out.push(s.clone())
            }
            Value::Array(items) => items.iter().for_each(|x| walk(x, key, out)),
            Value::Object(map) => map.iter().for_each(|(k, x)| walk(x, Some(k), out)),
            _ => {}
        }
    }
    let mut out = Vec::new();
    walk(report, None, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_declarations() {
        let p = parse_problem("m=1 n=2 k=1 L = u[1;1]^2 / u[2;1]").unwrap();
        assert_eq!((p.m, p.n, p.k), (1, 2, 1));
        assert_eq!(p.lagrangian, "u[1;1]^2 / u[2;1]");
        let j = parse_problem("m=2 n=2 k=1 L = u[1;1,0]*u[2;0,1] - u[1;0,1]*u[2;1,0]").unwrap();
        assert_eq!(j.m, 2);
        let spaced = parse_problem("# comment\nm = 2\nn = 2\nk = 1\nL =\n  u[1;1,0]*u[2;0,1]\n  - u[1;0,1]*u[2;1,0]\n").unwrap();
        assert_eq!(spaced.expr, j.expr);
    }

    #[test]
    fn declaration_errors() {
        assert!(matches!(
            parse_problem("m=1 n=1 k=1 L = u[1;2]"),
            Err(Error::IndexOutOfRange(_))
        ));
        assert!(matches!(
            parse_problem("m=1 n=1 k=1 L = u[2;1]"),
            Err(Error::IndexOutOfRange(_))
        ));
        assert!(matches!(
            parse_problem("m=1 n=1 k=1 L = u[1;1,0]"),
            Err(Error::IndexOutOfRange(_))
        ));
        assert!(matches!(
            parse_problem("m=0 n=1 k=1 L = 1"),
            Err(Error::IndexOutOfRange(_))
        ));
        match parse_problem("m=1 n=1 k=1\nL = u[1;1] +* 2") {
            Err(Error::SyntaxError { line, column, .. }) => assert_eq!((line, column), (2, 13)),
            other => panic!("{other:?}"),
        }
        match parse_problem("m=1 k=1") {
            Err(Error::SyntaxError { line, column, .. }) => assert_eq!((line, column), (1, 5)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn command_names_round_trip() {
        for c in Command::ALL {
            assert_eq!(c.name().parse::<Command>().unwrap(), c);
        }
        assert!("frobnicate".parse::<Command>().is_err());
    }

    #[test]
    fn theta_q_above_m_is_usage_error() {
        let p = parse_problem("m=1 n=2 k=1 L = u[1;1]^2/u[2;1]").unwrap();
        let opts = Options {
            q: Some(2),
            ..Options::default()
        };
        assert!(matches!(
            run_command(Command::Theta, Some(&p), &opts),
            Err(Error::Usage(_))
        ));
        let ok = Options {
            q: Some(1),
            ..Options::default()
        };
        assert!(run_command(Command::Theta, Some(&p), &ok).unwrap().pass());
    }

    #[test]
    fn closure_on_jacobian() {
        let p = parse_problem("m=2 n=2 k=1 L = u[1;1,0]*u[2;0,1] - u[1;0,1]*u[2;1,0]").unwrap();
        let r = run_command(Command::VerifyClosure, Some(&p), &Options::default()).unwrap();
        assert!(r.pass());
        let v = &r.to_json()["results"][0];
        assert_eq!(v["is_null"], json!(true));
        assert_eq!(v["dTheta_m_zero"], json!(true));
    }

    #[test]
    fn failing_check_sets_exit_code() {
        let p = parse_problem("m=1 n=1 k=1 L = u[1;0]").unwrap();
        let r = run_command(Command::CheckHomogeneous, Some(&p), &Options::default()).unwrap();
        assert_eq!(r.exit_code(), 1);
        assert_eq!(r.first_failure().unwrap().name, "homogeneous");
        assert!(matches!(
            run_command(Command::Hilbert, Some(&p), &Options::default()),
            Err(Error::NotHomogeneous(_))
        ));
    }

    #[test]
    fn text_elision() {
        let p = parse_problem("m=2 n=4 k=1 L = (u[1;1,0]*u[2;0,1]-u[1;0,1]*u[2;1,0])^2/(u[3;1,0]*u[4;0,1]-u[3;0,1]*u[4;1,0])").unwrap();
        let r = run_command(Command::Theta, Some(&p), &Options::default()).unwrap();
        let text = r.to_text(3);
        assert!(text.contains("more terms elided"));
        let full = r.to_text(usize::MAX);
        assert!(!full.contains("elided"));
    }

    #[test]
    fn identities_need_no_problem() {
        let opts = Options {
            max_q: 4,
            ..Options::default()
        };
        let r = run_command(Command::VerifyIdentities, None, &opts).unwrap();
        assert!(r.pass());
        assert_eq!(r.entries.iter().filter(|e| e.name.starts_with("H q=")).count(), 5);
        assert!(run_command(Command::Hilbert, None, &opts).is_err());
    }

    #[test]
    fn report_expressions_round_trip() {
        let p = parse_problem("m=1 n=2 k=1 L = u[1;1]^2/u[2;1]").unwrap();
        let r = run_command(Command::Hilbert, Some(&p), &Options::default()).unwrap();
        let exprs = report_expressions(&r.to_json());
        assert!(exprs.len() >= 2);
        for s in exprs {
            let e = crate::symbolic::parse_expr(&s, &ExprContext::default()).unwrap();
            assert_eq!(e.to_string(), s);
        }
    }
}
