//! `homvar`: run variational computations and identity checks on a declared
//! Lagrangian and report the outcome as text or JSON.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use homvar::cli::{parse_problem, run_command, Command, Options, ProblemDecl, Report};

#[derive(Parser, Debug)]
#[command(
    name = "homvar",
    version,
    about = "Exact variational calculus for homogeneous Lagrangians",
    after_help = "PROBLEM is either the declaration text, e.g.\n  \
                  homvar verify-closure m=2 n=2 k=1 L = 'u[1;1,0]*u[2;0,1] - u[1;0,1]*u[2;1,0]'\n\
                  or the path of a file holding it, or '-' for standard input.\n\n\
                  Exit status: 0 when every check passes, 1 when one fails, 2 on bad input."
)]
struct Args {
    /// check-homogeneous, hilbert, euler-lagrange, theta, verify-recovery,
    /// verify-closure, verify-identities or verify-lemmas.
    command: String,

    /// Problem declaration (words are joined with spaces) or a file path.
    problem: Vec<String>,

    /// Also write the full JSON report to this path ('-' for stdout).
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Restrict theta or verify-recovery to one q.
    #[arg(long)]
    q: Option<usize>,

    /// Upper end of the identity sweep.
    #[arg(long, default_value_t = 12)]
    max_q: usize,

    /// Elide text output of a result beyond this many terms.
    #[arg(long, default_value_t = 200)]
    max_terms: usize,

    /// Seed for the randomized operator identity trials.
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Random trials per operator identity.
    #[arg(long, default_value_t = 50)]
    trials: usize,
}

fn read_problem(words: &[String]) -> Result<Option<ProblemDecl>, String> {
    let text = match words {
        [] => return Ok(None),
        [one] if one == "-" => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| format!("cannot read standard input: {e}"))?;
            s
        }
        [one] if Path::new(one).is_file() => {
            fs::read_to_string(one).map_err(|e| format!("cannot read {one}: {e}"))?
        }
        _ => words.join(" "),
    };
    parse_problem(&text).map(Some).map_err(|e| e.to_string())
}

fn run(args: &Args) -> Result<Report, String> {
    let command: Command = args.command.parse().map_err(|e: homvar::Error| e.to_string())?;
    let problem = read_problem(&args.problem)?;
    if problem.is_some() && !command.needs_problem() {
        return Err(format!("{command} takes no problem declaration"));
    }
    let opts = Options {
        q: args.q,
        max_q: args.max_q,
        max_terms: args.max_terms,
        seed: args.seed,
        trials: args.trials,
    };
    run_command(command, problem.as_ref(), &opts).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let report = match run(&args) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let json_to_stdout = args.json.as_deref() == Some(Path::new("-"));
    if let Some(path) = &args.json {
        let body = serde_json::to_string_pretty(&report.to_json()).expect("serializable");
        if json_to_stdout {
            println!("{body}");
        } else if let Err(e) = fs::write(path, body + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if !json_to_stdout {
        print!("{}", report.to_text(args.max_terms));
    }
    if let Some(f) = report.first_failure() {
        eprintln!("first failure: {}", f.name);
        for line in &f.lines {
            eprintln!("    {line}");
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
