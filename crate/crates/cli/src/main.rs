//! `ce-calabi`: batch front end for the two-copy and cyclic computations.
//!
//! Exit status: 0 when every check passes, 1 when some check fails, 2 on input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use ce_calabi::bimodule::{self, BimoduleElement};
use ce_calabi::dga::{CheckStatus, ParseDiagnostic, Severity};
use ce_calabi::homology::SliceComplex;
use ce_calabi::report::{self, CheckReport};
use ce_calabi::{fixtures, parse_presentation, DgaPresentation};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "ce-calabi", version, about = "Exact two-copy and Calabi-Yau computations for Chekanov-Eliashberg algebras over Z2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// Presentation file in `legendrian v1` format.
    #[arg(required_unless_present = "fixture")]
    file: Option<PathBuf>,
    /// Use a built-in presentation instead of a file.
    #[arg(long, value_enum, conflicts_with = "file")]
    fixture: Option<Fixture>,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(ValueEnum, Clone, Copy)]
enum Fixture {
    Unknot,
    Trefoil,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum ComplexArg {
    Hat,
    Check,
    Cone,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a presentation.
    Validate(Input),
    /// Generator tables, differentials and semifree order of the two-copy bimodules.
    Twocopy(Input),
    /// CY table with chain-map and self-duality checks.
    Cy {
        #[command(flatten)]
        input: Input,
        /// Word length for the chain-map check.
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
    /// Homology dimensions of cyclic complexes on a degree window.
    Hochschild {
        #[command(flatten)]
        input: Input,
        /// Degree window `d0:d1`.
        #[arg(long, default_value = "-4:4", allow_hyphen_values = true)]
        window: String,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, value_enum, default_value = "all")]
        complex: ComplexArg,
    },
    /// Run every registered identity.
    Verify {
        #[command(flatten)]
        input: Input,
        /// Largest arity for the A-infinity relations.
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
    /// Everything, as JSON.
    Report {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        #[arg(long, default_value = "-4:4", allow_hyphen_values = true)]
        window: String,
    },
}

enum InputError {
    Io(String),
    Parse(Vec<ParseDiagnostic>),
    Config(String),
}

impl InputError {
    fn code(&self) -> &'static str {
        match self {
            InputError::Io(_) => "I001-io",
            InputError::Parse(_) => "I002-parse",
            InputError::Config(_) => "I003-config",
        }
    }

    fn to_json(&self) -> Value {
        match self {
            InputError::Io(m) | InputError::Config(m) => json!({"error": self.code(), "message": m}),
            InputError::Parse(d) => json!({"error": self.code(), "diagnostics": d}),
        }
    }

    fn to_text(&self) -> String {
        match self {
            InputError::Io(m) | InputError::Config(m) => format!("error[{}]: {m}", self.code()),
            InputError::Parse(d) => {
                let mut s = format!("error[{}]: presentation does not parse", self.code());
                for x in d {
                    let sev = match x.severity {
                        Severity::Error => "error",
                        Severity::Warning => "warning",
                    };
                    s.push_str(&format!("\n  line {}: {sev} {}: {}", x.line, x.code, x.message));
                }
                s
            }
        }
    }
}

fn load(input: &Input) -> Result<DgaPresentation, InputError> {
    match (input.fixture, &input.file) {
        (Some(Fixture::Unknot), _) => Ok(fixtures::unknot()),
        (Some(Fixture::Trefoil), _) => Ok(fixtures::trefoil()),
        (None, Some(path)) => {
            let bytes = std::fs::read(path).map_err(|e| InputError::Io(format!("{}: {e}", path.display())))?;
            parse_presentation(&bytes).map_err(InputError::Parse)
        }
        (None, None) => Err(InputError::Config("no input given".into())),
    }
}

fn parse_window(s: &str) -> Result<(i64, i64), InputError> {
    let bad = || InputError::Config(format!("window must look like d0:d1 with d0 <= d1, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn positive(name: &str, v: usize) -> Result<usize, InputError> {
    if v == 0 {
        return Err(InputError::Config(format!("{name} must be positive")));
    }
    Ok(v)
}

fn status_word(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "PASS",
        CheckStatus::Fail => "FAIL",
        CheckStatus::Skipped => "SKIP",
    }
}

fn render_checks(reports: &[CheckReport]) -> String {
    let mut s = String::new();
    for r in reports {
        s.push_str(&format!("{} {}", status_word(r.status), r.check));
        if let Some(n) = r.cases {
            s.push_str(&format!(" [{n} cases]"));
        }
        if let Some(w) = r.window {
            s.push_str(&format!(" window {}:{}", w.0, w.1));
        }
        s.push('\n');
        if let Some(dims) = &r.dims {
            for (d, n) in dims {
                let mark = if r.masked_degrees.contains(d) { " (masked)" } else { "" };
                s.push_str(&format!("    H^{d} = {n}{mark}\n"));
            }
        }
        if let Some(c) = &r.counterexample {
            s.push_str(&format!("    counterexample: {c}\n"));
        }
    }
    s
}

#[derive(Serialize)]
struct GeneratorRow {
    chord: String,
    degree: Option<i64>,
    differential: String,
}

fn generator_rows(p: &DgaPresentation, complex: bimodule::Complex) -> Vec<GeneratorRow> {
    let gens = match complex {
        bimodule::Complex::HatPlus => bimodule::hat_generators(p),
        _ => bimodule::check_generators(p),
    };
    gens.into_iter()
        .map(|c| {
            let e = BimoduleElement::chord(c);
            let d = match complex {
                bimodule::Complex::HatPlus => bimodule::mhat1(p, &e),
                _ => bimodule::mcheck1(p, &e),
            }
            .expect("generator of its own complex");
            GeneratorRow { chord: c.display(p), degree: bimodule::chord_degree(p, &c, complex), differential: d.display(p) }
        })
        .collect()
}

fn twocopy_value(p: &DgaPresentation) -> Value {
    let order = bimodule::semifree_order(p).map(|v| v.iter().map(|c| c.display(p)).collect::<Vec<_>>());
    json!({
        "hat_plus": generator_rows(p, bimodule::Complex::HatPlus),
        "check_minus": generator_rows(p, bimodule::Complex::CheckMinus),
        "semifree_order": order,
    })
}

fn twocopy_text(p: &DgaPresentation) -> String {
    let mut s = String::new();
    for (title, complex) in [("Ĉ₊", bimodule::Complex::HatPlus), ("Č₋", bimodule::Complex::CheckMinus)] {
        s.push_str(&format!("{title} generators\n"));
        for r in generator_rows(p, complex) {
            let deg = r.degree.map_or("?".to_string(), |d| d.to_string());
            s.push_str(&format!("  {:<10} deg {:>3}   d = {}\n", r.chord, deg, r.differential));
        }
    }
    match bimodule::semifree_order(p) {
        Some(v) => s.push_str(&format!("semifree order: {}\n", v.iter().map(|c| c.display(p)).collect::<Vec<_>>().join(" < "))),
        None => s.push_str("semifree order: none\n"),
    }
    s
}

fn cy_table(p: &DgaPresentation) -> Vec<(String, String)> {
    bimodule::hat_generators(p)
        .into_iter()
        .map(|c| {
            let v = bimodule::cy_bimodule(p, &BimoduleElement::chord(c)).expect("generator of Ĉ₊");
            (c.display(p), v.display(p))
        })
        .collect()
}

fn cy_checks(p: &DgaPresentation, max_len: usize) -> Vec<CheckReport> {
    report::chain_map_checks(p, max_len)
        .into_iter()
        .filter(|r| r.check.starts_with("CY"))
        .collect()
}

fn cy_value(p: &DgaPresentation, checks: &[CheckReport]) -> Value {
    let table: serde_json::Map<String, Value> = cy_table(p).into_iter().map(|(k, v)| (k, Value::String(v))).collect();
    json!({"cy1": table, "checks": checks})
}

fn hochschild_reports(p: &DgaPresentation, window: (i64, i64), max_len: usize, which: ComplexArg) -> Vec<CheckReport> {
    let all = [(ComplexArg::Hat, SliceComplex::HatPlus), (ComplexArg::Check, SliceComplex::CheckMinus), (ComplexArg::Cone, SliceComplex::ConeCy)];
    all.iter()
        .filter(|(a, _)| which == ComplexArg::All || which == *a)
        .map(|(_, c)| report::homology_check(p, *c, window, max_len))
        .collect()
}

struct Outcome {
    text: String,
    json: Value,
    ok: bool,
}

fn run(cmd: &Command) -> Result<(Outcome, bool), InputError> {
    let (input, outcome) = match cmd {
        Command::Validate(input) => {
            let p = load(input)?;
            let checks = report::validation_checks(&p);
            let text = format!("presentation {} ({} generators, n = {})\n{}", display_name(&p), p.num_gens(), p.n, render_checks(&checks));
            let ok = report::all_passed(&checks);
            (input, Outcome { text, json: json!({"presentation": p.name, "checks": checks}), ok })
        }
        Command::Twocopy(input) => {
            let p = load(input)?;
            (input, Outcome { text: twocopy_text(&p), json: twocopy_value(&p), ok: true })
        }
        Command::Cy { input, max_len } => {
            let p = load(input)?;
            let checks = cy_checks(&p, positive("--max-len", *max_len)?);
            let mut text = String::from("CY₁\n");
            for (k, v) in cy_table(&p) {
                text.push_str(&format!("  {k:<10} ↦ {v}\n"));
            }
            text.push_str(&render_checks(&checks));
            let ok = report::all_passed(&checks);
            (input, Outcome { text, json: cy_value(&p, &checks), ok })
        }
        Command::Hochschild { input, window, max_len, complex } => {
            let p = load(input)?;
            let w = parse_window(window)?;
            let reports = hochschild_reports(&p, w, positive("--max-len", *max_len)?, *complex);
            let ok = report::all_passed(&reports);
            (input, Outcome { text: render_checks(&reports), json: json!({"reports": reports}), ok })
        }
        Command::Verify { input, k, max_len } => {
            let p = load(input)?;
            let checks = report::verify_all(&p, positive("--k", *k)?, positive("--max-len", *max_len)?);
            let ok = report::all_passed(&checks);
            (input, Outcome { text: render_checks(&checks), json: json!({"checks": checks}), ok })
        }
        Command::Report { input, k, max_len, window } => {
            let p = load(input)?;
            let w = parse_window(window)?;
            let (k, max_len) = (positive("--k", *k)?, positive("--max-len", *max_len)?);
            let checks = report::verify_all(&p, k, max_len);
            let homology = hochschild_reports(&p, w, max_len.max(1), ComplexArg::All);
            let ok = report::all_passed(&checks) && report::all_passed(&homology);
            let value = json!({
                "presentation": p.name,
                "dimension": p.n,
                "twocopy": twocopy_value(&p),
                "cy": cy_value(&p, &[]),
                "homology": homology,
                "checks": checks,
            });
            (input, Outcome { text: String::new(), json: value, ok })
        }
    };
    let json_mode = input.json || matches!(cmd, Command::Report { .. });
    Ok((outcome, json_mode))
}

fn display_name(p: &DgaPresentation) -> &str {
    if p.name.is_empty() {
        "(unnamed)"
    } else {
        &p.name
    }
}

fn json_flag(cmd: &Command) -> bool {
    match cmd {
        Command::Validate(i) | Command::Twocopy(i) => i.json,
        Command::Cy { input, .. } | Command::Hochschild { input, .. } | Command::Verify { input, .. } => input.json,
        Command::Report { .. } => true,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok((out, json_mode)) => {
            if json_mode {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if json_flag(&cli.command) {
                println!("{}", serde_json::to_string_pretty(&e.to_json()).expect("serializable"));
            } else {
                eprintln!("{}", e.to_text());
            }
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_parse() {
        assert_eq!(parse_window("-6:6").ok(), Some((-6, 6)));
        assert_eq!(parse_window(" 0 : 0 ").ok(), Some((0, 0)));
        for bad in ["3:1", "x:2", "4", ""] {
            assert!(matches!(parse_window(bad), Err(InputError::Config(_))), "{bad}");
        }
    }

    #[test]
    fn caps_must_be_positive() {
        assert!(positive("--k", 0).is_err());
        assert_eq!(positive("--k", 2).ok(), Some(2));
    }

    #[test]
    fn error_codes_are_stable() {
        assert_eq!(InputError::Io(String::new()).code(), "I001-io");
        assert_eq!(InputError::Parse(vec![]).code(), "I002-parse");
        assert_eq!(InputError::Config(String::new()).code(), "I003-config");
    }
}
