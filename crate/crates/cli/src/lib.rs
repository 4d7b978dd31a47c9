//! Command-line front end. [`run_command`] returns the exit status and the
//! full output text so that it can be called from tests without a process.
//!
//! Exit codes: `0` success, Covered or Proved; `1` Counterexample, Unknown or
//! a failed self test; `2` usage, parse or input errors.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use derivcert::catalog::CheckConfig;
use derivcert::engine::{basic_lemma_verified, derive, is_open_case, trace_render, QueryResult, TraceFormat};
use derivcert::field::{parse_ratfunc, FormalDerivation};
use derivcert::orbit::{covering_decide, h_orbit, interval_table_verify, lattice_condition_check, CoveringVerdict, IntervalSet, LatticeSet};
use derivcert::problem::{parse_problem, parse_seed};
use derivcert::rational::parse_rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "derivcert", version, about = "Exact checks for derivations with respect to smooth functions")]
struct Cli {
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(flatten)]
    sampling: Sampling,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Sampling {
    /// Working precision in bits for identity checks.
    #[arg(long, global = true, value_name = "BITS")]
    precision: Option<u32>,
    /// Number of sample points per check.
    #[arg(long, global = true, value_name = "N")]
    points: Option<usize>,
    /// Sampling seed, hexadecimal.
    #[arg(long, global = true, value_name = "HEX", value_parser = seed_arg)]
    seed: Option<u64>,
}

impl Sampling {
    fn apply(&self, mut cfg: CheckConfig) -> CheckConfig {
        if let Some(p) = self.precision {
            cfg.precision = p;
        }
        if let Some(n) = self.points {
            cfg.points = n;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        cfg
    }
}

fn seed_arg(text: &str) -> Result<u64, String> {
    parse_seed(text).ok_or_else(|| format!("`{text}` is not a hexadecimal seed"))
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the orbit H(t) of a rational t.
    Orbit { t: String },
    /// Decide whether an interval set meets every orbit.
    Cover { set: String },
    /// Check the lattice conditions for Z+{offsets}.
    Lattice { set: String },
    /// Apply a formal derivation to a rational function.
    Eval {
        expr: String,
        /// Generator image, `g=expr`. Every generator needs one.
        #[arg(long = "image", value_name = "G=EXPR")]
        images: Vec<String>,
    },
    /// Saturate a problem file and answer its goal.
    Derive { file: std::path::PathBuf },
    /// Recompute the interval table and the covering identity.
    #[command(name = "selftest")]
    SelfTest,
}

struct Output {
    code: i32,
    text: String,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { code: EXIT_OK, text }
    }

    fn usage(msg: impl std::fmt::Display) -> Output {
        Output { code: EXIT_USAGE, text: format!("error: {msg}\n") }
    }
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    let out = match &cli.command {
        Command::Orbit { t } => orbit(t, cli.json),
        Command::Cover { set } => cover(set, cli.json),
        Command::Lattice { set } => lattice(set, cli.json),
        Command::Eval { expr, images } => eval(expr, images, cli.json),
        Command::Derive { file } => derive_file(file, &cli.sampling, cli.json),
        Command::SelfTest => selftest(cli.json),
    };
    (out.code, out.text)
}

fn dump(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn orbit(t: &str, json: bool) -> Output {
    let Some(r) = parse_rational(t) else {
        return Output::usage(format!("`{t}` is not a rational number"));
    };
    match h_orbit(&r) {
        Ok(o) if json => Output::ok(dump(&serde_json::to_value(&o).expect("orbit serializes"))),
        Ok(o) => Output::ok(format!("H({r}) = {o}\n")),
        Err(e) => Output::usage(e),
    }
}

fn cover(set: &str, json: bool) -> Output {
    let u = match IntervalSet::parse(set) {
        Ok(u) => u,
        Err(e) => return Output::usage(e),
    };
    let v = covering_decide(&u);
    let code = if v.is_covered() { EXIT_OK } else { EXIT_NEGATIVE };
    let text = if json {
        dump(&json!({ "set": u.to_string(), "result": v }))
    } else {
        match &v {
            CoveringVerdict::Covered => "Covered\n".to_string(),
            CoveringVerdict::Counterexample { witness, orbit } => {
                format!("Counterexample: t = {witness}, H({witness}) = {orbit} misses {u}\n")
            }
        }
    };
    Output { code, text }
}

fn lattice(set: &str, json: bool) -> Output {
    let t = set.trim();
    let spelled = if t.starts_with('{') { format!("Z+{t}") } else { t.to_string() };
    let l = match LatticeSet::parse(&spelled) {
        Ok(l) => l,
        Err(e) => return Output::usage(e),
    };
    let v = lattice_condition_check(&l);
    let code = if v.is_sufficient() { EXIT_OK } else { EXIT_NEGATIVE };
    let text = if json { dump(&json!({ "set": l, "result": v })) } else { format!("R \\ ({l}): {v}\n") };
    Output { code, text }
}

fn eval(expr: &str, images: &[String], json: bool) -> Output {
    let f = match parse_ratfunc(expr) {
        Ok(f) => f,
        Err(e) => return Output::usage(format!("in `{expr}`: {e}")),
    };
    let mut pairs = Vec::new();
    for spec in images {
        let Some((g, img)) = spec.split_once('=') else {
            return Output::usage(format!("image `{spec}` is not of the form g=expr"));
        };
        match parse_ratfunc(img) {
            Ok(r) => pairs.push((g.trim().to_string(), r)),
            Err(e) => return Output::usage(format!("in image of `{}`: {e}", g.trim())),
        }
    }
    let d = match FormalDerivation::new(pairs) {
        Ok(d) => d,
        Err(e) => return Output::usage(e),
    };
    match d.apply(&f) {
        Ok(r) if json => Output::ok(dump(&json!({
            "expr": f.to_string(),
            "images": d.images().map(|(g, i)| (g.clone(), Value::String(i.to_string()))).collect::<serde_json::Map<_, _>>(),
            "result": r.to_string(),
        }))),
        Ok(r) => Output::ok(format!("d({f}) = {r}\n")),
        Err(e) => Output::usage(e),
    }
}

fn header(cfg: &CheckConfig) -> String {
    format!("# precision {} bits, {} points, seed {:#x}", cfg.precision, cfg.points, cfg.seed)
}

fn derive_file(path: &std::path::Path, sampling: &Sampling, json: bool) -> Output {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Output::usage(format!("{}: {e}", path.display())),
    };
    let mut problem = match parse_problem(&text) {
        Ok(p) => p,
        Err(e) => return Output::usage(format!("{}: {e}", path.display())),
    };
    problem.options = sampling.apply(problem.options);
    let d = match derive(&problem) {
        Ok(d) => d,
        Err(e) => return Output::usage(e),
    };
    let open = is_open_case(&problem);
    let (code, verdict) = match &d.result {
        QueryResult::Proved(_) => (EXIT_OK, "Proved".to_string()),
        QueryResult::Unknown if open => (EXIT_NEGATIVE, "Unknown (cf. open problem)".to_string()),
        QueryResult::Unknown => (EXIT_NEGATIVE, "Unknown".to_string()),
    };
    let text = if json {
        let trace = match &d.result {
            QueryResult::Proved(t) => serde_json::to_value(t).expect("trace serializes"),
            QueryResult::Unknown => Value::Null,
        };
        dump(&json!({
            "options": problem.options,
            "goal": problem.goal.to_string(),
            "result": verdict,
            "trace": trace,
        }))
    } else {
        let mut s = header(&problem.options);
        s.push('\n');
        if let QueryResult::Proved(t) = &d.result {
            s.push_str(&trace_render(t, TraceFormat::Text));
        }
        let _ = writeln!(s, "{}: {verdict}", problem.goal);
        s
    };
    Output { code, text }
}

fn selftest(json: bool) -> Output {
    let table = interval_table_verify();
    let lemma = basic_lemma_verified();
    let lemma_ok = lemma.as_ref().is_ok_and(|r| r.passed());
    let pass = table.all_pass() && lemma_ok;
    let code = if pass { EXIT_OK } else { EXIT_NEGATIVE };
    let text = if json {
        dump(&json!({
            "interval_table": { "passed": table.passed(), "total": table.entries.len(), "entries": table.entries },
            "covering_identity": match lemma {
                Ok(r) => json!({ "free_image": r.free_image, "forced_image": r.forced_image }),
                Err(e) => json!({ "error": e.to_string() }),
            },
            "pass": pass,
        }))
    } else {
        let lemma = match lemma {
            Ok(r) => r.to_string(),
            Err(e) => format!("error: {e}"),
        };
        format!("{table}\ncovering identity: {lemma}\n{}\n", if pass { "selftest passed" } else { "selftest FAILED" })
    };
    Output { code, text }
}
