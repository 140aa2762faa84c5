//! `fpl` — expansions over the graph `F_{p^l}` and best
//! `X_{p^l}`-approximations, with stable text and JSON output.
//!
//! Exit codes: 0 success; 1 parse/usage errors; 2 insufficient precision;
//! 3 domain errors (wrong regime for the operation); 4 verification
//! disagreement or property-suite failure.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use fpl_core::approx::{self, Method};
use fpl_core::enumerate::{enumerate_all_expansions, select_max_plus_one};
use fpl_core::expand::{expand_max_plus_one, ExpandOutcome};
use fpl_core::graph::{self, Classification};
use fpl_core::selftest;
use fpl_core::{Error, Modulus, RealValue};

#[derive(Parser)]
#[command(name = "fpl", version, about = "F_{p^l}-continued fractions, exactly")]
struct Cli {
    /// Prime base of the modulus N = p^l
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Exponent of the modulus (default 1)
    #[arg(long, global = true, default_value_t = 1)]
    l: u32,
    /// Input: "num/den", "quad:a,b,d,c" for (a+b*sqrt(d))/c, or
    /// "dec:<digits>:<error>" for a decimal interval
    #[arg(long, global = true, allow_hyphen_values = true)]
    x: Option<String>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Term budget for irrational expansions
    #[arg(long, global = true, default_value_t = 64)]
    max_terms: usize,
    /// Denominator bound for best-approximation searches
    #[arg(long, global = true)]
    v_max: Option<String>,
    /// Seed for the fuzz suite
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Process one input per line from this file instead of --x
    #[arg(long, global = true, value_name = "FILE")]
    batch: Option<String>,
    /// Denominator bound when deciding whether an interval is irrational
    #[arg(long, global = true, default_value_t = 1000)]
    rational_bound: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Oracle,
    Convergents,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum-+1 expansion(s) with convergents and fins
    Expand,
    /// Every expansion of a vertex; maximal ones are starred
    Enumerate,
    /// Best approximations by the chosen method
    Best {
        #[arg(long, value_enum, default_value_t = MethodArg::Convergents)]
        method: MethodArg,
    },
    /// Run both methods and compare (exit 4 on disagreement)
    Verify,
    /// Which regime the input falls in
    Classify,
    /// The mediant pair R1 ⊕ R2 = x and the path depth N_x
    Decompose,
    /// Seeded cross-module property suite (exit 4 on any failure)
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Denominator bound for generated inputs
        #[arg(long, default_value_t = 300)]
        den_bound: u64,
        /// Also feed the validator a corrupted expansion and report it
        #[arg(long)]
        self_test: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InsufficientPrecision(_) => 2,
            Error::InvalidLiteral(_) | Error::InvalidExpansion(_) | Error::BadModulus(_)
            | Error::ZeroOverZero => 1,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    // die quietly on a closed pipe (`fpl ... | head`) instead of panicking
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message; keep exit 0 for --help/--version
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let modulus = match build_modulus(&cli) {
        Ok(m) => m,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };

    if let Command::Fuzz { trials, den_bound, self_test } = &cli.command {
        return run_fuzz(&cli, &modulus, *trials, *den_bound, *self_test);
    }

    let inputs = match gather_inputs(&cli) {
        Ok(i) => i,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    let batch = inputs.len() > 1;
    let mut worst = 0u8;
    for literal in inputs {
        if batch {
            println!("== {literal}");
        }
        match run_one(&cli, &modulus, &literal) {
            Ok(output) => print!("{output}"),
            Err(f) => {
                eprintln!("error: {}", f.message);
                worst = worst.max(f.code);
                if !batch {
                    break;
                }
            }
        }
    }
    ExitCode::from(worst)
}

fn build_modulus(cli: &Cli) -> Result<Modulus, Failure> {
    let p = cli.p.ok_or_else(|| Failure::new(1, "--p is required"))?;
    Ok(Modulus::new(p, cli.l)?)
}

fn gather_inputs(cli: &Cli) -> Result<Vec<String>, Failure> {
    if let Some(path) = &cli.batch {
        let data = std::fs::read_to_string(path)
            .map_err(|e| Failure::new(1, format!("cannot read {path}: {e}")))?;
        let lines: Vec<String> = data
            .lines()
            .map(str::trim)
            .filter(|s| !s.is_empty() && !s.starts_with('#'))
            .map(String::from)
            .collect();
        if lines.is_empty() {
            return Err(Failure::new(1, "batch file has no inputs"));
        }
        return Ok(lines);
    }
    match &cli.x {
        Some(x) => Ok(vec![x.clone()]),
        None => Err(Failure::new(1, "--x is required (or --batch FILE)")),
    }
}

fn parse_v_max(cli: &Cli, x: &RealValue, modulus: &Modulus) -> Result<BigInt, Failure> {
    if let Some(v) = &cli.v_max {
        let v = BigInt::from_str(v).map_err(|_| Failure::new(1, format!("bad --v-max {v:?}")))?;
        if v < *modulus.n() {
            return Err(Failure::new(1, "--v-max must be at least N".to_string()));
        }
        return Ok(v);
    }
    approx::default_v_max(x, modulus)
        .ok_or_else(|| Failure::new(1, "--v-max is required for irrational inputs"))
}

fn run_one(cli: &Cli, modulus: &Modulus, literal: &str) -> Result<String, Failure> {
    let x: RealValue = literal.parse()?;
    match &cli.command {
        Command::Expand => cmd_expand(cli, modulus, &x),
        Command::Enumerate => cmd_enumerate(cli, modulus, &x),
        Command::Best { method } => {
            let method = match method {
                MethodArg::Oracle => Method::Oracle,
                MethodArg::Convergents => Method::Convergents,
                MethodArg::Both => Method::Both,
            };
            cmd_best(cli, modulus, &x, method).map(|(s, _)| s)
        }
        Command::Verify => {
            let (out, agreement) = cmd_best(cli, modulus, &x, Method::Both)?;
            if agreement == Some(false) {
                print!("{out}");
                return Err(Failure::new(4, "methods disagree"));
            }
            Ok(out)
        }
        Command::Classify => cmd_classify(cli, modulus, &x),
        Command::Decompose => cmd_decompose(cli, modulus, &x),
        Command::Fuzz { .. } => unreachable!("handled in main"),
    }
}

fn classification_text(c: &Classification) -> String {
    match c {
        Classification::Vertex => "vertex".into(),
        Classification::MediantPoint { t } => format!("mediant-point t={t}"),
        Classification::BSet { k, half } => format!("b-set k={k} half={half}"),
        Classification::GeneralRational { r1, r2, s1, s2, nx } => {
            format!("general-rational R1={r1} R2={r2} s1={s1} s2={s2} Nx={nx}")
        }
        Classification::Irrational => "irrational".into(),
    }
}

fn classification_json(c: &Classification) -> serde_json::Value {
    match c {
        Classification::Vertex => serde_json::json!({"regime": "vertex"}),
        Classification::MediantPoint { t } => {
            serde_json::json!({"regime": "mediant-point", "t": t.to_string()})
        }
        Classification::BSet { k, half } => {
            serde_json::json!({"regime": "b-set", "k": k, "half": half})
        }
        Classification::GeneralRational { r1, r2, s1, s2, nx } => serde_json::json!({
            "regime": "general-rational",
            "r1": r1.to_string(),
            "r2": r2.to_string(),
            "s1": s1.to_string(),
            "s2": s2.to_string(),
            "nx": nx,
        }),
        Classification::Irrational => serde_json::json!({"regime": "irrational"}),
    }
}

fn expansion_block(
    e: &fpl_core::expansion::CFExpansion,
    x: &RealValue,
) -> (Vec<String>, Option<Vec<String>>) {
    let shown = e.terms().len() + if e.is_finite() { 1 } else { 3 };
    let convergents: Vec<String> = e
        .convergents(shown)
        .expect("within range")
        .iter()
        .map(|c| c.to_string())
        .collect();
    let fins = match x {
        RealValue::Exact(r) if !r.is_infinite() => e
            .fins(r)
            .ok()
            .map(|fs| fs.iter().map(|f| f.to_string()).collect()),
        _ => None,
    };
    (convergents, fins)
}

fn cmd_expand(cli: &Cli, modulus: &Modulus, x: &RealValue) -> Result<String, Failure> {
    let outcome: ExpandOutcome = expand_max_plus_one(x, modulus, cli.max_terms)?;
    if cli.format == Format::Json {
        let expansions: Vec<serde_json::Value> = outcome
            .expansions
            .iter()
            .map(|e| {
                let (convergents, fins) = expansion_block(e, x);
                let mut obj = serde_json::json!({
                    "expansion": e.to_json(),
                    "text": e.to_text(),
                    "convergents": convergents,
                });
                if let Some(f) = fins {
                    obj["fins"] = serde_json::json!(f);
                }
                obj
            })
            .collect();
        let v = serde_json::json!({
            "classification": classification_json(&outcome.classification),
            "truncated": outcome.truncated,
            "expansions": expansions,
        });
        return Ok(format!("{v}\n"));
    }
    let mut out = String::new();
    writeln!(out, "classification: {}", classification_text(&outcome.classification)).unwrap();
    for e in &outcome.expansions {
        writeln!(out, "expansion: {}", e.to_text()).unwrap();
        let (convergents, fins) = expansion_block(e, x);
        writeln!(out, "convergents: {}", convergents.join(" ")).unwrap();
        if let Some(f) = fins {
            writeln!(out, "fins: {}", f.join(" ")).unwrap();
        }
    }
    if outcome.truncated {
        writeln!(out, "note: truncated at {} terms", cli.max_terms).unwrap();
    }
    Ok(out)
}

fn cmd_enumerate(cli: &Cli, modulus: &Modulus, x: &RealValue) -> Result<String, Failure> {
    let r = match x {
        RealValue::Exact(r) => r,
        _ => return Err(Failure::new(3, "enumeration needs an exact rational vertex")),
    };
    let all = enumerate_all_expansions(r, modulus)?;
    let selected = select_max_plus_one(&all)?;
    if cli.format == Format::Json {
        let expansions: Vec<serde_json::Value> = all
            .iter()
            .map(|e| {
                let mut obj = e.to_json();
                obj["max_plus_one"] = serde_json::Value::Bool(selected.contains(e));
                obj["text"] = serde_json::Value::String(e.to_text());
                obj
            })
            .collect();
        let v = serde_json::json!({"count": all.len(), "expansions": expansions});
        return Ok(format!("{v}\n"));
    }
    let mut out = String::new();
    for e in &all {
        let star = if selected.contains(e) { "*" } else { " " };
        writeln!(out, "{star} {}", e.to_text()).unwrap();
    }
    Ok(out)
}

fn cmd_best(
    cli: &Cli,
    modulus: &Modulus,
    x: &RealValue,
    method: Method,
) -> Result<(String, Option<bool>), Failure> {
    let v_max = parse_v_max(cli, x, modulus)?;
    let report = approx::report_for(x, modulus, &v_max, method)?;
    if cli.format == Format::Json {
        return Ok((format!("{}\n", report.to_json()), report.agreement));
    }
    let mut out = String::new();
    writeln!(
        out,
        "x: {}  modulus: {}  method: {}  v_max: {}",
        report.x_text,
        modulus,
        report.method.as_str(),
        report.v_max
    )
    .unwrap();
    if report.best.is_empty() {
        writeln!(out, "best: (none)").unwrap();
        writeln!(out, "note: no best approximation").unwrap();
    } else {
        let list: Vec<String> = report.best.iter().map(|r| r.frac.to_string()).collect();
        writeln!(out, "best: {}", list.join(" ")).unwrap();
        for r in &report.best {
            writeln!(out, "  {}  quality {}", r.frac, r.quality.render()).unwrap();
        }
    }
    for r in &report.undecided {
        writeln!(out, "undecided: {}  quality {}", r.frac, r.quality.render()).unwrap();
    }
    if let Some(a) = report.agreement {
        writeln!(out, "agreement: {a}").unwrap();
        if let Some(ob) = &report.oracle_best {
            let list: Vec<String> = ob.iter().map(|r| r.frac.to_string()).collect();
            writeln!(out, "oracle best: {}", list.join(" ")).unwrap();
        }
    }
    Ok((out, report.agreement))
}

fn cmd_classify(cli: &Cli, modulus: &Modulus, x: &RealValue) -> Result<String, Failure> {
    let c = graph::classify(x, modulus, cli.rational_bound)?;
    if cli.format == Format::Json {
        return Ok(format!("{}\n", classification_json(&c)));
    }
    Ok(format!("classification: {}\n", classification_text(&c)))
}

fn cmd_decompose(cli: &Cli, modulus: &Modulus, x: &RealValue) -> Result<String, Failure> {
    let r = match x {
        RealValue::Exact(r) => r,
        _ => return Err(Failure::new(3, "decomposition needs an exact rational")),
    };
    let d = graph::decompose(r, modulus)?;
    let nx = fpl_core::expand::path_depth(r, modulus)?;
    if cli.format == Format::Json {
        let v = serde_json::json!({
            "r1": d.r1.to_string(),
            "r2": d.r2.to_string(),
            "adjacent": d.adjacent,
            "k": d.k,
            "s": d.s.to_string(),
            "s1": d.s1.to_string(),
            "s2": d.s2.to_string(),
            "nx": nx,
        });
        return Ok(format!("{v}\n"));
    }
    Ok(format!(
        "R1={} R2={} Nx={nx} adjacent={} s1={} s2={}\n",
        d.r1, d.r2, d.adjacent, d.s1, d.s2
    ))
}

fn run_fuzz(cli: &Cli, modulus: &Modulus, trials: usize, den_bound: u64, self_test: bool) -> ExitCode {
    let report = match selftest::run_suite(modulus, cli.seed, trials, den_bound, self_test) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    if cli.format == Format::Json {
        let v = serde_json::json!({
            "p": modulus.p(),
            "l": modulus.l(),
            "seed": cli.seed,
            "trials": report.trials,
            "checks": report.checks,
            "failures": report.failures,
            "notes": report.notes,
        });
        println!("{v}");
    } else {
        println!(
            "modulus: {}  seed: {}  trials: {}  checks: {}  failures: {}",
            modulus,
            cli.seed,
            report.trials,
            report.checks,
            report.failures.len()
        );
        for n in &report.notes {
            println!("note: {n}");
        }
        for f in &report.failures {
            println!("FAIL: {f}");
        }
    }
    if report.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    }
}
