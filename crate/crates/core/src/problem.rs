//! Line-oriented problem files.
//!
//! ```text
//! line  := "assume" fact | "goal" fact | "option" key value
//! fact  := "derivates" funcexpr ["on" domain] | "additive" | "zero" const
//!        | "homog" const | "shift-invariant" set | "power-rule" rational
//!        | "standard"
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. A missing goal means
//! `goal standard`.

use std::fmt;

use crate::catalog::{CatalogError, CheckConfig, Constant, FunctionSpec};
use crate::engine::{Fact, PowerExponent, ShiftSet};
use crate::rational::parse_rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemSpec {
    pub axioms: Vec<Fact>,
    pub goal: Fact,
    pub options: CheckConfig,
}

impl Default for ProblemSpec {
    fn default() -> Self {
        ProblemSpec { axioms: Vec::new(), goal: Fact::StandardDerivation, options: CheckConfig::default() }
    }
}

/// A parse failure at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
    pub detail: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: expected {}, found `{}`", self.line, self.column, self.expected.join(" or "), self.found)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

const LINE_KEYWORDS: [&str; 3] = ["assume", "goal", "option"];
const FACT_KEYWORDS: [&str; 7] = ["derivates", "additive", "zero", "homog", "shift-invariant", "power-rule", "standard"];
const OPTION_KEYS: [&str; 3] = ["precision", "points", "seed"];

fn quoted(words: &[&str]) -> Vec<String> {
    words.iter().map(|w| format!("`{w}`")).collect()
}

/// A word of `line` with its 1-based column.
struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn word(&mut self) -> Option<(usize, &'a str)> {
        let rest = &self.text[self.pos..];
        let skip = rest.len() - rest.trim_start().len();
        let start = self.pos + skip;
        let tail = &self.text[start..];
        if tail.is_empty() {
            self.pos = start;
            return None;
        }
        let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
        self.pos = start + len;
        Some((self.column(start), &tail[..len]))
    }

    /// The rest of the line, trimmed, with its column.
    fn rest(&mut self) -> (usize, &'a str) {
        let rest = &self.text[self.pos..];
        let skip = rest.len() - rest.trim_start().len();
        let start = self.pos + skip;
        self.pos = self.text.len();
        (self.column(start), self.text[start..].trim_end())
    }

    fn column(&self, byte: usize) -> usize {
        self.text[..byte].chars().count() + 1
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemSpec, ParseError> {
    let mut spec = ProblemSpec::default();
    let mut goal_seen = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let err = |column: usize, expected: Vec<String>, found: &str, detail: String| ParseError {
            line,
            column,
            expected,
            found: found.to_string(),
            detail,
        };
        let mut cur = Cursor { text: raw, pos: 0 };
        let (col, kw) = cur.word().expect("non-blank line");
        match kw {
            "assume" => spec.axioms.push(parse_fact(&mut cur, line)?),
            "goal" => {
                if goal_seen {
                    return Err(err(col, vec!["at most one `goal` line".into()], kw, String::new()));
                }
                goal_seen = true;
                spec.goal = parse_fact(&mut cur, line)?;
            }
            "option" => {
                let Some((kcol, key)) = cur.word() else {
                    return Err(err(raw.chars().count() + 1, quoted(&OPTION_KEYS), "end of line", String::new()));
                };
                let (vcol, value) = cur.rest();
                let bad = |what: &str, detail: String| err(vcol, vec![what.to_string()], value, detail);
                match key {
                    "precision" => {
                        spec.options.precision = value.parse().map_err(|e| bad("bit count", format!("{e}")))?;
                    }
                    "points" => {
                        spec.options.points = value.parse().map_err(|e| bad("point count", format!("{e}")))?;
                    }
                    "seed" => spec.options.seed = parse_seed(value).ok_or_else(|| bad("hexadecimal seed", String::new()))?,
                    _ => return Err(err(kcol, quoted(&OPTION_KEYS), key, String::new())),
                }
            }
            _ => return Err(err(col, quoted(&LINE_KEYWORDS), kw, String::new())),
        }
    }
    Ok(spec)
}

/// Parses `0x5EED`, `5eed` or `0X5eed`.
pub fn parse_seed(text: &str) -> Option<u64> {
    let t = text.trim();
    let digits = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
    u64::from_str_radix(digits, 16).ok()
}

fn parse_fact(cur: &mut Cursor<'_>, line: usize) -> Result<Fact, ParseError> {
    let err = |column: usize, expected: Vec<String>, found: &str, detail: String| ParseError {
        line,
        column,
        expected,
        found: found.to_string(),
        detail,
    };
    let end = cur.text.chars().count() + 1;
    let Some((col, kw)) = cur.word() else {
        return Err(err(end, quoted(&FACT_KEYWORDS), "end of line", String::new()));
    };
    let nullary = |fact: Fact, cur: &mut Cursor<'_>| {
        let (c, rest) = cur.rest();
        if rest.is_empty() {
            Ok(fact)
        } else {
            Err(err(c, vec!["end of line".into()], rest, String::new()))
        }
    };
    let (acol, arg) = match kw {
        "additive" => return nullary(Fact::Additive, cur),
        "standard" => return nullary(Fact::StandardDerivation, cur),
        k if FACT_KEYWORDS.contains(&k) => cur.rest(),
        _ => return Err(err(col, quoted(&FACT_KEYWORDS), kw, String::new())),
    };
    if arg.is_empty() {
        let what = match kw {
            "derivates" => "function expression",
            "zero" | "homog" => "constant",
            "shift-invariant" => "set",
            _ => "rational exponent",
        };
        return Err(err(acol, vec![what.into()], "end of line", String::new()));
    }
    let catalog = |what: &str, e: CatalogError| match e {
        CatalogError::Syntax(s) => err(acol + s.column - 1, s.expected, &s.found, String::new()),
        other => err(acol, vec![what.into()], arg, other.to_string()),
    };
    Ok(match kw {
        "derivates" => match arg {
            "P2" => Fact::DerivatesP2,
            "S2" => Fact::Additive,
            _ => Fact::derivates(FunctionSpec::parse(arg).map_err(|e| catalog("function expression", e))?),
        },
        "zero" => Fact::zero(Constant::parse(arg).map_err(|e| catalog("constant", e))?),
        "homog" => Fact::homogeneous(Constant::parse(arg).map_err(|e| catalog("constant", e))?),
        "shift-invariant" => Fact::shift_invariant(
            ShiftSet::parse(arg).map_err(|e| err(acol, vec!["interval set or `R \\ (Z+{...})`".into()], arg, e.to_string()))?,
        ),
        "power-rule" => {
            let r = parse_rational(arg).ok_or_else(|| err(acol, vec!["rational exponent".into()], arg, String::new()))?;
            Fact::PowerRule { exponent: PowerExponent::Exponent(r) }
        }
        _ => unreachable!("fact keywords are exhaustive"),
    })
}

/// The problem-file spelling of `fact`, for facts the grammar can express.
pub fn fact_literal(fact: &Fact) -> Option<String> {
    Some(match fact {
        Fact::Derivates { function } if function.is_unary() => format!("derivates {function}"),
        Fact::Derivates { .. } => return None,
        Fact::Additive => "additive".into(),
        Fact::DerivatesP2 => "derivates P2".into(),
        Fact::KnownZero { c } => format!("zero {c}"),
        Fact::KnownHomogeneous { c } => format!("homog {c}"),
        Fact::PowerRule { exponent: PowerExponent::Exponent(r) } => format!("power-rule {r}"),
        Fact::ShiftInvariantOn { set } => format!("shift-invariant {set}"),
        Fact::StandardDerivation => "standard".into(),
        Fact::PowerRule { exponent: PowerExponent::All } | Fact::Odd | Fact::Periodic { .. } => return None,
    })
}

impl fmt::Display for ProblemSpec {
    /// Options that differ from the defaults come first, then axioms and the
    /// goal. Facts outside the grammar are written as comments.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = CheckConfig::default();
        if self.options.precision != d.precision {
            writeln!(f, "option precision {}", self.options.precision)?;
        }
        if self.options.points != d.points {
            writeln!(f, "option points {}", self.options.points)?;
        }
        if self.options.seed != d.seed {
            writeln!(f, "option seed {:#x}", self.options.seed)?;
        }
        for a in &self.axioms {
            match fact_literal(a) {
                Some(l) => writeln!(f, "assume {l}")?,
                None => writeln!(f, "# assume {a}")?,
            }
        }
        match fact_literal(&self.goal) {
            Some(l) => writeln!(f, "goal {l}"),
            None => writeln!(f, "# goal {}", self.goal),
        }
    }
}

impl std::str::FromStr for ProblemSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_problem(s)
    }
}
