//! Presentations of Chekanov-Eliashberg algebras: the text format, validation and
//! the base differential.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_rational::Ratio;
use serde::Serialize;

use crate::algebra::{apply_derivation, derive_word_into, AlgebraError, Gen, GradingContext, MarkedWord, TensorPoly, Word};

pub type Length = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorInfo {
    pub name: String,
    pub cz: i64,
    pub len: Option<Length>,
}

/// Generating data of the algebra: chords, gradings, the differential and the
/// basepoint-marked differential. Both tables are indexed by generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgaPresentation {
    pub name: String,
    pub n: i64,
    pub gens: Vec<GeneratorInfo>,
    pub diff: Vec<TensorPoly>,
    pub pointed: Vec<BTreeSet<MarkedWord>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// One parser finding. `code` is stable across releases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub line: usize,
    pub message: String,
}

pub mod codes {
    pub const SYNTAX: &str = "E001-syntax";
    pub const UNKNOWN_GENERATOR: &str = "E002-unknown-generator";
    pub const DUPLICATE_GENERATOR: &str = "E003-duplicate-generator";
    pub const MALFORMED_MARK: &str = "E004-malformed-mark";
    pub const BAD_HEADER: &str = "E005-header";
    pub const BAD_NUMBER: &str = "E006-number";
    pub const DUPLICATE_ENTRY: &str = "E007-duplicate-entry";
    pub const BAD_UTF8: &str = "E008-encoding";
}

impl DgaPresentation {
    pub fn empty(n: i64) -> Self {
        DgaPresentation { name: String::new(), n, gens: vec![], diff: vec![], pointed: vec![] }
    }

    pub fn num_gens(&self) -> u32 {
        self.gens.len() as u32
    }

    pub fn gen_name(&self, g: Gen) -> &str {
        &self.gens[g as usize].name
    }

    pub fn find(&self, name: &str) -> Option<Gen> {
        self.gens.iter().position(|g| g.name == name).map(|i| i as Gen)
    }

    pub fn grading(&self) -> GradingContext {
        GradingContext { n: self.n, cz: self.gens.iter().map(|g| g.cz).collect() }
    }

    pub fn degree(&self, g: Gen) -> i64 {
        1 - self.gens[g as usize].cz
    }

    pub fn word_degree(&self, w: &[Gen]) -> i64 {
        w.iter().map(|&g| self.degree(g)).sum()
    }

    /// Base differential extended by Leibniz.
    pub fn base_diff(&self, p: &TensorPoly) -> Result<TensorPoly, AlgebraError> {
        apply_derivation(&self.diff, p)
    }

    /// Differential of a single word; the presentation tables are total, so this cannot fail
    /// for words over declared generators.
    pub fn diff_word_into(&self, w: &[Gen], out: &mut TensorPoly) {
        derive_word_into(&self.diff, w, out).expect("word over declared generators")
    }

    pub fn diff_word(&self, w: &[Gen]) -> TensorPoly {
        let mut out = TensorPoly::zero();
        self.diff_word_into(w, &mut out);
        out
    }

    pub fn format_word(&self, w: &[Gen]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&g| self.gen_name(g)).collect::<Vec<_>>().join(" ")
    }

    pub fn format_poly(&self, p: &TensorPoly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        p.words().map(|w| self.format_word(w.letters())).collect::<Vec<_>>().join(" + ")
    }

    fn format_marked(&self, m: &MarkedWord) -> String {
        let mut parts: Vec<&str> = m.left().iter().map(|&g| self.gen_name(g)).collect();
        parts.push("^");
        parts.extend(m.right().iter().map(|&g| self.gen_name(g)));
        parts.join(" ")
    }

    /// Canonical text form; `parse_presentation(print())` reproduces `self`.
    pub fn print(&self) -> String {
        let mut s = String::from("legendrian v1\n");
        if !self.name.is_empty() {
            let _ = writeln!(s, "name {}", self.name);
        }
        let _ = writeln!(s, "dim {}", self.n);
        for g in &self.gens {
            match g.len {
                Some(l) => {
                    let _ = writeln!(s, "gen {} cz {} len {}", g.name, g.cz, l);
                }
                None => {
                    let _ = writeln!(s, "gen {} cz {}", g.name, g.cz);
                }
            }
        }
        for (i, g) in self.gens.iter().enumerate() {
            let _ = writeln!(s, "d {} = {}", g.name, self.format_poly(&self.diff[i]));
        }
        for (i, g) in self.gens.iter().enumerate() {
            if self.pointed[i].is_empty() {
                continue;
            }
            let terms: Vec<String> = self.pointed[i].iter().map(|m| self.format_marked(m)).collect();
            let _ = writeln!(s, "dpt {} = {}", g.name, terms.join(" + "));
        }
        s
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn parse_length(tok: &str) -> Option<Length> {
    if let Some((a, b)) = tok.split_once('/') {
        let (a, b) = (a.parse::<i64>().ok()?, b.parse::<i64>().ok()?);
        return (b != 0).then(|| Ratio::new(a, b));
    }
    if let Some((int, frac)) = tok.split_once('.') {
        if frac.is_empty() || frac.len() > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let den = 10i64.checked_pow(frac.len() as u32)?;
        let neg = int.starts_with('-');
        let whole: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().ok()? };
        let f: i64 = frac.parse().ok()?;
        let num = whole.checked_mul(den)?.checked_add(if neg { -f } else { f })?;
        return Some(Ratio::new(num, den));
    }
    tok.parse::<i64>().ok().map(Ratio::from_integer)
}

struct Parser<'a> {
    diags: Vec<ParseDiagnostic>,
    names: HashMap<&'a str, Gen>,
}

impl<'a> Parser<'a> {
    fn err(&mut self, code: &'static str, line: usize, message: impl Into<String>) {
        self.diags.push(ParseDiagnostic { severity: Severity::Error, code, line, message: message.into() });
    }

    fn lookup(&mut self, tok: &str, line: usize) -> Option<Gen> {
        match self.names.get(tok) {
            Some(&g) => Some(g),
            None => {
                if valid_name(tok) {
                    self.err(codes::UNKNOWN_GENERATOR, line, format!("unknown generator `{tok}`"));
                } else {
                    self.err(codes::SYNTAX, line, format!("unexpected token `{tok}`"));
                }
                None
            }
        }
    }

    /// Parse `0` or a `+`-separated list of monomials. Each monomial is returned
    /// with the slot of its `^` marker if one is present.
    fn parse_sum(&mut self, rhs: &str, line: usize, pointed: bool) -> Option<Vec<(Word, Option<usize>)>> {
        let rhs = rhs.trim();
        if rhs == "0" {
            return Some(vec![]);
        }
        let mut out = vec![];
        let mut ok = true;
        for mono in rhs.split('+') {
            let toks: Vec<&str> = mono.split_whitespace().collect();
            if toks.is_empty() {
                self.err(codes::SYNTAX, line, "empty monomial");
                ok = false;
                continue;
            }
            let mut letters = vec![];
            let mut mark = None;
            let mut marks = 0;
            for t in &toks {
                match *t {
                    "^" => {
                        marks += 1;
                        mark = Some(letters.len());
                    }
                    "1" => {}
                    "0" => {
                        self.err(codes::SYNTAX, line, "`0` must stand alone");
                        ok = false;
                    }
                    _ => match self.lookup(t, line) {
                        Some(g) => letters.push(g),
                        None => ok = false,
                    },
                }
            }
            if toks.contains(&"1") && toks.len() > 1 + marks {
                self.err(codes::SYNTAX, line, "`1` must stand alone in a monomial");
                ok = false;
            }
            if pointed && marks != 1 {
                self.err(codes::MALFORMED_MARK, line, format!("pointed monomial needs exactly one `^`, found {marks}"));
                ok = false;
            }
            if !pointed && marks > 0 {
                self.err(codes::MALFORMED_MARK, line, "`^` is only allowed in `dpt` lines");
                ok = false;
            }
            out.push((Word(letters), mark));
        }
        ok.then_some(out)
    }
}

/// Parse the line-oriented presentation format. On failure every diagnostic is returned.
pub fn parse_presentation(bytes: &[u8]) -> Result<DgaPresentation, Vec<ParseDiagnostic>> {
    let text = match std::str::from_utf8(bytes) {
        Ok(t) => t,
        Err(e) => {
            return Err(vec![ParseDiagnostic {
                severity: Severity::Error,
                code: codes::BAD_UTF8,
                line: 0,
                message: format!("input is not UTF-8: {e}"),
            }])
        }
    };
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();

    let mut p = Parser { diags: vec![], names: HashMap::new() };
    let mut pres = DgaPresentation::empty(0);
    let mut saw_header = false;
    let mut saw_dim = false;

    // Declarations first, so differentials may mention generators declared later.
    for (idx, &(ln, l)) in lines.iter().enumerate() {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks[0] {
            "legendrian" => {
                if idx != 0 || toks != ["legendrian", "v1"] {
                    p.err(codes::BAD_HEADER, ln, "expected `legendrian v1` as the first line");
                }
                saw_header = true;
            }
            "name" => {
                if toks.len() != 2 || !valid_name(toks[1]) {
                    p.err(codes::SYNTAX, ln, "expected `name <identifier>`");
                } else {
                    pres.name = toks[1].to_string();
                }
            }
            "dim" => {
                if saw_dim {
                    p.err(codes::DUPLICATE_ENTRY, ln, "`dim` given twice");
                }
                saw_dim = true;
                match toks.get(1).and_then(|t| t.parse::<i64>().ok()) {
                    Some(n) if n >= 1 && toks.len() == 2 => pres.n = n,
                    _ => p.err(codes::BAD_NUMBER, ln, "expected `dim <positive integer>`"),
                }
            }
            "gen" => {
                let shape_ok = (toks.len() == 4 || toks.len() == 6) && toks[2] == "cz" && (toks.len() == 4 || toks[4] == "len");
                if !shape_ok {
                    p.err(codes::SYNTAX, ln, "expected `gen <name> cz <int> [len <rational>]`");
                    continue;
                }
                let name = toks[1];
                if !valid_name(name) {
                    p.err(codes::SYNTAX, ln, format!("invalid generator name `{name}`"));
                    continue;
                }
                let cz = toks[3].parse::<i64>();
                if cz.is_err() {
                    p.err(codes::BAD_NUMBER, ln, format!("invalid cz `{}`", toks[3]));
                }
                let len = if toks.len() == 6 {
                    match parse_length(toks[5]) {
                        Some(l) if l > Ratio::from_integer(0) => Some(l),
                        _ => {
                            p.err(codes::BAD_NUMBER, ln, format!("length must be a positive rational, got `{}`", toks[5]));
                            None
                        }
                    }
                } else {
                    None
                };
                if p.names.contains_key(name) {
                    p.err(codes::DUPLICATE_GENERATOR, ln, format!("generator `{name}` declared twice"));
                    continue;
                }
                p.names.insert(name, pres.gens.len() as Gen);
                pres.gens.push(GeneratorInfo { name: name.to_string(), cz: cz.unwrap_or(0), len });
            }
            "d" | "dpt" => {}
            other => p.err(codes::SYNTAX, ln, format!("unknown directive `{other}`")),
        }
    }
    if !saw_header {
        p.err(codes::BAD_HEADER, lines.first().map_or(0, |l| l.0), "missing `legendrian v1` header");
    }
    if !saw_dim {
        p.err(codes::BAD_HEADER, 0, "missing `dim` line");
    }

    let ng = pres.gens.len();
    pres.diff = vec![TensorPoly::zero(); ng];
    pres.pointed = vec![BTreeSet::new(); ng];
    let mut seen_d = vec![false; ng];
    let mut seen_dpt = vec![false; ng];
    for &(ln, l) in &lines {
        let pointed = l.starts_with("dpt ") || l == "dpt";
        if !(pointed || l.starts_with("d ") || l == "d") {
            continue;
        }
        let body = if pointed { &l[3..] } else { &l[1..] };
        let Some((lhs, rhs)) = body.split_once('=') else {
            p.err(codes::SYNTAX, ln, "expected `<name> = <sum>`");
            continue;
        };
        let lhs = lhs.trim();
        let Some(g) = p.lookup(lhs, ln) else { continue };
        let seen = if pointed { &mut seen_dpt } else { &mut seen_d };
        if seen[g as usize] {
            p.err(codes::DUPLICATE_ENTRY, ln, format!("second `{}` line for `{lhs}`", if pointed { "dpt" } else { "d" }));
            continue;
        }
        seen[g as usize] = true;
        let Some(terms) = p.parse_sum(rhs, ln, pointed) else { continue };
        for (w, mark) in terms {
            if pointed {
                let m = MarkedWord::new(w, mark.unwrap_or(0)).expect("mark within word");
                let set = &mut pres.pointed[g as usize];
                if !set.remove(&m) {
                    set.insert(m);
                }
            } else {
                pres.diff[g as usize].toggle(w);
            }
        }
    }

    if p.diags.is_empty() {
        Ok(pres)
    } else {
        p.diags.sort_by_key(|d| d.line);
        Err(p.diags)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub check: String,
    pub status: CheckStatus,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub entries: Vec<CheckEntry>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status != CheckStatus::Fail)
    }

    pub fn status(&self, check: &str) -> Option<CheckStatus> {
        self.entries.iter().find(|e| e.check == check).map(|e| e.status)
    }
}

fn entry(check: &str, failures: Vec<String>) -> CheckEntry {
    let status = if failures.is_empty() { CheckStatus::Pass } else { CheckStatus::Fail };
    CheckEntry { check: check.into(), status, failures }
}

/// Check the structural invariants of a parsed presentation.
pub fn validate(p: &DgaPresentation) -> ValidationReport {
    let mut degree = vec![];
    let mut squares = vec![];
    let mut action = vec![];
    let mut marks = vec![];
    for g in 0..p.num_gens() {
        let name = p.gen_name(g);
        let target = p.degree(g) + 1;
        for m in p.diff[g as usize].words() {
            let d = p.word_degree(m.letters());
            if d != target {
                degree.push(format!("d {name} contains `{}` of degree {d}, expected {target}", p.format_word(m.letters())));
            }
        }
        let dd = p.base_diff(&p.diff[g as usize]).expect("tables are total");
        if !dd.is_zero() {
            squares.push(format!("d(d {name}) = {}", p.format_poly(&dd)));
        }
        if let Some(top) = p.gens[g as usize].len {
            for m in p.diff[g as usize].words() {
                let total: Option<Length> = m.letters().iter().map(|&h| p.gens[h as usize].len).sum();
                if let Some(total) = total {
                    if total >= top {
                        action.push(format!("d {name} contains `{}` with action {total} >= {top}", p.format_word(m.letters())));
                    }
                }
            }
        }
        let pt_target = p.degree(g) + p.n;
        for m in &p.pointed[g as usize] {
            if m.mark > m.word.len() {
                marks.push(format!("dpt {name}: mark {} outside word of length {}", m.mark, m.word.len()));
                continue;
            }
            let d = p.word_degree(m.word.letters());
            if d != pt_target {
                marks.push(format!("dpt {name} contains `{}` of degree {d}, expected {pt_target}", p.format_marked(m)));
            }
        }
    }
    let has_lengths = p.gens.iter().all(|g| g.len.is_some()) && !p.gens.is_empty();
    let action_entry = if has_lengths {
        entry("action-decreasing", action)
    } else {
        CheckEntry { check: "action-decreasing".into(), status: CheckStatus::Skipped, failures: vec![] }
    };
    ValidationReport {
        entries: vec![
            entry("differential-degree", degree),
            entry("d-squared", squares),
            action_entry,
            entry("pointed-marks", marks),
        ],
    }
}
