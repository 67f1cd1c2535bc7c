//! `ea`: evaluate terms, enumerate number systems, run the analyzer and the
//! verification suites, and convert between sets and codes.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage or syntax error, 3 a
//! suite found counterexamples.

use clap::{Parser, Subcommand};
use ea_core::term_lang::{bound_of, eval_term, parse_term, rank_bound_of};
use ea_core::verify::SUITES;
use ea_core::{run_suite, Budget, Env, Error, HFSet, System, Term};
use num_bigint::BigUint;
use serde_json::{json, Value};
use std::process::ExitCode;

/// Brace forms longer than this are replaced by the code alone.
const BRACE_LIMIT: usize = 120;

#[derive(Parser)]
#[command(name = "ea", version, about = "Hereditarily finite sets and finitary number systems")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized check.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Budget overrides as `key=value,...`.
    #[arg(long, global = true, env = "EA_BUDGET")]
    budget: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a term, e.g. `ea eval "{x in P(a) : O in x}" --let a='{{}}'`.
    Eval {
        term: String,
        /// Bind a variable: `name=SET` with SET in brace or `#n` notation.
        #[arg(long = "let", value_name = "NAME=SET")]
        bindings: Vec<String>,
    },
    /// List the first terms of a system: vn, z, ch, lex, ack, ack0,
    /// base:<sys>:<n>, len:<sys>:<n>, ackphi:<double|square|succ|exp>:<K>.
    Enumerate {
        system: String,
        #[arg(short = 'n', default_value_t = 10)]
        count: u64,
    },
    /// Print the syntactic bounds of a term.
    Analyze { term: String },
    /// Run a verification suite (or `all`) and print JSON lines.
    Check { suite: String },
    /// Convert between sets and Ackermann codes.
    Code {
        #[command(subcommand)]
        dir: CodeDir,
    },
}

#[derive(Subcommand)]
enum CodeDir {
    /// Set in brace notation to its code.
    Encode { set: String },
    /// Code (decimal) to the set.
    Decode { code: String },
}

enum Failure {
    Domain(Error),
    Usage(String),
    SuiteFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. } | Error::Hygiene(_) | Error::BadBudget(_) | Error::BadSpec(_) | Error::UnknownSuite(_) => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Domain(e),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::SuiteFailed) => ExitCode::from(3),
    }
}

fn budget(cli: &Cli) -> Result<Budget, Failure> {
    let mut b = Budget::parse(cli.budget.as_deref().unwrap_or(""))?;
    if let Some(seed) = cli.seed {
        b = b.with_seed(seed);
    }
    Ok(b)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let budget = budget(cli)?;
    match &cli.cmd {
        Cmd::Eval { term, bindings } => {
            let t = parse_term(term)?;
            let mut env = Env::new();
            for b in bindings {
                let (name, value) = b
                    .split_once('=')
                    .ok_or_else(|| Failure::Usage(format!("binding `{b}` is not NAME=SET")))?;
                env.insert(name.trim().to_string(), value.trim().parse::<HFSet>()?);
            }
            let v = eval_term(&t, &env, &budget)?;
            if cli.json {
                println!("{}", json!({ "term": term, "value": v.to_json() }));
            } else {
                println!("{}", render(&v));
            }
        }
        Cmd::Enumerate { system, count } => {
            let sys = System::parse(system, &budget)?;
            let terms = sys.enumerate(*count, &budget)?;
            if cli.json {
                let out: Vec<Value> = terms.iter().map(Term::to_json).collect();
                println!("{}", json!({ "system": sys.to_string(), "terms": out }));
            } else {
                for (i, t) in terms.iter().enumerate() {
                    println!("{i}  {}", render_term(t));
                }
            }
        }
        Cmd::Analyze { term } => {
            let t = parse_term(term)?;
            let (k, r) = (bound_of(&t), rank_bound_of(&t));
            if cli.json {
                println!("{}", json!({ "term": term, "k": k, "rank_k": r }));
            } else {
                println!("k={k}, rank_k={r}");
            }
        }
        Cmd::Check { suite } => {
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut passed = true;
            for name in names {
                let report = run_suite(name, &budget)?;
                for line in report.json_lines() {
                    println!("{line}");
                }
                passed &= report.passed();
            }
            if !passed {
                return Err(Failure::SuiteFailed);
            }
        }
        Cmd::Code { dir: CodeDir::Encode { set } } => {
            let s: HFSet = set.parse()?;
            let code = s.encode()?;
            if cli.json {
                println!("{}", json!({ "code": code.to_string() }));
            } else {
                println!("{code}");
            }
        }
        Cmd::Code { dir: CodeDir::Decode { code } } => {
            let n: BigUint = code.trim().parse().map_err(|_| Failure::Usage(format!("`{code}` is not a natural number")))?;
            let s = HFSet::decode(&n);
            if cli.json {
                println!("{}", s.to_json());
            } else {
                println!("{}", spaced(&s));
            }
        }
    }
    Ok(())
}

/// `{{}}  #1`; the brace form is dropped when long, the code when huge.
fn render(s: &HFSet) -> String {
    let code = s.code().map(|c| format!("#{c}")).unwrap_or_else(|| "#<too large>".into());
    match s.braces_limited(BRACE_LIMIT) {
        Some(b) => format!("{b}  {code}"),
        None => code,
    }
}

fn render_term(t: &Term) -> String {
    match t {
        Term::Set(s) => {
            let code = s.code().map(|c| format!("#{c}")).unwrap_or_else(|| "#<too large>".into());
            match s.braces_limited(BRACE_LIMIT) {
                Some(b) => format!("{code}  {b}"),
                None => code,
            }
        }
        Term::Numeral(n) => format!("{t}  value={}", n.value()),
        Term::Ack(_) => t.to_string(),
    }
}

/// Top-level members separated by `, ` inside `{ … }`.
fn spaced(s: &HFSet) -> String {
    if s.is_empty() {
        return "{}".into();
    }
    let parts: Vec<String> = s
        .members()
        .iter()
        .map(|m| m.braces_limited(BRACE_LIMIT).map(|_| m.braces()).unwrap_or_else(|| render(m)))
        .collect();
    format!("{{ {} }}", parts.join(", "))
}
