use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::lemma::basic_lemma_verified;
use crate::catalog::{
    derivative_nonvanishing_check, identity_check, periodicity_check, positivity_check, CheckConfig, Constant,
    DomainSet, Evaluator, Expr, FunctionSpec, Verdict,
};
use crate::field::parse_ratfunc;
use crate::orbit::{covering_decide, lattice_condition_check, CoveringVerdict, IntervalSet, LatticeSet, LatticeVerdict};
use crate::rational::{int, Rational};

/// A re-executable validation call recorded in a trace node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "check")]
pub enum SideCondition {
    Identity { lhs: Expr, rhs: Expr, domain: DomainSet },
    Periodicity { function: FunctionSpec, period: Constant, offset: Constant, anti: bool },
    Nonvanishing { function: FunctionSpec },
    /// A closed expression equals a constant.
    Value { expr: Expr, value: Constant },
    /// A closed expression is not zero.
    NonZero { expr: Expr },
    Positive { expr: Expr, domain: DomainSet },
    /// `expr = value` at `offset + k·period` for `k = −4..=4`.
    LatticeValues { expr: Expr, period: Constant, offset: Constant, value: Constant },
    InDomain { point: Constant, domain: DomainSet },
    Includes { outer: DomainSet, inner: DomainSet },
    Covering { set: IntervalSet },
    Lattice { set: LatticeSet },
    /// Exact equality of two rational functions.
    FieldIdentity { lhs: String, rhs: String },
    BasicLemma,
    /// `r ∉ {0, 1}`.
    Exponent {
        #[serde(with = "crate::rational::text")]
        r: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "result")]
pub enum Outcome {
    Check(Verdict),
    Covering(CoveringVerdict),
    Lattice(LatticeVerdict),
}

impl Outcome {
    /// Whether the outcome lets a rule fire.
    pub fn accepted(&self) -> bool {
        match self {
            Outcome::Check(v) => v.holds(),
            Outcome::Covering(c) => c.is_covered(),
            Outcome::Lattice(l) => l.is_sufficient(),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Check(v) => write!(f, "{v}"),
            Outcome::Covering(CoveringVerdict::Covered) => f.write_str("Covered"),
            Outcome::Covering(CoveringVerdict::Counterexample { witness, .. }) => {
                write!(f, "Counterexample (t = {witness})")
            }
            Outcome::Lattice(l) => write!(f, "{l}"),
        }
    }
}

fn fails(point: impl Into<String>, gap: impl Into<String>) -> Verdict {
    Verdict::Fails { point: point.into(), gap: gap.into() }
}

fn inconclusive(reason: impl Into<String>) -> Verdict {
    Verdict::Inconclusive { reason: reason.into() }
}

impl SideCondition {
    /// Runs the check from scratch.
    pub fn run(&self, config: &CheckConfig) -> Outcome {
        match self {
            SideCondition::Covering { set } => return Outcome::Covering(covering_decide(set)),
            SideCondition::Lattice { set } => return Outcome::Lattice(lattice_condition_check(set)),
            _ => {}
        }
        Outcome::Check(self.verdict(config))
    }

    fn verdict(&self, config: &CheckConfig) -> Verdict {
        match self {
            SideCondition::Identity { lhs, rhs, domain } => identity_check(lhs, rhs, domain, config),
            SideCondition::Periodicity { function, period, offset, anti } => {
                periodicity_check(function, period, offset, *anti, config)
            }
            SideCondition::Nonvanishing { function } => derivative_nonvanishing_check(function, config),
            SideCondition::Value { expr, value } => {
                if !expr.is_closed() {
                    return inconclusive(format!("{expr} is not closed"));
                }
                identity_check(expr, &value.to_expr(), &DomainSet::FullLine, config)
            }
            SideCondition::NonZero { expr } => {
                if !expr.is_closed() {
                    return inconclusive(format!("{expr} is not closed"));
                }
                let mut ev = match Evaluator::new(config.precision) {
                    Ok(ev) => ev,
                    Err(e) => return inconclusive(e.to_string()),
                };
                match ev.eval(expr, &Default::default()) {
                    Ok(v) if ev.is_negligible(&v) => fails("no variables", ev.format(&v)),
                    Ok(_) => Verdict::Holds,
                    Err(e) => inconclusive(e.to_string()),
                }
            }
            SideCondition::Positive { expr, domain } => positivity_check(expr, domain, config),
            SideCondition::LatticeValues { expr, period, offset, value } => {
                for k in -4..=4 {
                    let Some(point) = offset.add(&period.scale(&int(k))) else {
                        return inconclusive(format!("{offset} + {k}*{period} is not a monomial constant"));
                    };
                    let at = expr.substitute("x", &point.to_expr());
                    match identity_check(&at, &value.to_expr(), &DomainSet::FullLine, config) {
                        Verdict::Holds => {}
                        Verdict::Fails { gap, .. } => return fails(format!("x = {point}"), gap),
                        other => return other,
                    }
                }
                Verdict::Holds
            }
            SideCondition::InDomain { point, domain } => {
                let mut ev = match Evaluator::new(config.precision) {
                    Ok(ev) => ev,
                    Err(e) => return inconclusive(e.to_string()),
                };
                if domain.contains(point, &mut ev) {
                    Verdict::Holds
                } else {
                    fails(format!("x = {point}"), "outside the domain")
                }
            }
            SideCondition::Includes { outer, inner } => {
                let mut ev = match Evaluator::new(config.precision) {
                    Ok(ev) => ev,
                    Err(e) => return inconclusive(e.to_string()),
                };
                if outer.includes(inner, &mut ev) {
                    Verdict::Holds
                } else {
                    inconclusive(format!("{inner} is not known to lie in {outer}"))
                }
            }
            SideCondition::FieldIdentity { lhs, rhs } => {
                let diff = parse_ratfunc(lhs).and_then(|l| parse_ratfunc(rhs).and_then(|r| l.sub(&r)));
                match diff {
                    Ok(d) if d.is_zero() => Verdict::Holds,
                    Ok(d) => fails("formal", d.to_string()),
                    Err(e) => inconclusive(e.to_string()),
                }
            }
            SideCondition::BasicLemma => match basic_lemma_verified() {
                Ok(r) if r.passed() => Verdict::Holds,
                Ok(r) => fails("formal", r.to_string()),
                Err(e) => inconclusive(e.to_string()),
            },
            SideCondition::Exponent { r } => {
                if *r == int(0) || *r == int(1) {
                    fails(format!("r = {r}"), "excluded exponent")
                } else {
                    Verdict::Holds
                }
            }
            SideCondition::Covering { .. } | SideCondition::Lattice { .. } => unreachable!("handled in run"),
        }
    }
}

impl fmt::Display for SideCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideCondition::Identity { lhs, rhs, domain } => write!(f, "{lhs} = {rhs} on {domain}"),
            SideCondition::Periodicity { function, period, offset, anti } => {
                let sign = if *anti { "-" } else { "" };
                let shifted = function.at(&Expr::add(Expr::x(), period.to_expr()));
                write!(f, "{shifted} = {sign}{} off {period}*Z + {offset}", function.body)
            }
            SideCondition::Nonvanishing { function } => {
                write!(f, "{} != 0 on {}", function.derivative(), function.domain)
            }
            SideCondition::Value { expr, value } => write!(f, "{expr} = {value}"),
            SideCondition::NonZero { expr } => write!(f, "{expr} != 0"),
            SideCondition::Positive { expr, domain } => write!(f, "{expr} > 0 on {domain}"),
            SideCondition::LatticeValues { expr, period, offset, value } => {
                write!(f, "{expr} = {value} on {period}*Z + {offset}")
            }
            SideCondition::InDomain { point, domain } => write!(f, "{point} in {domain}"),
            SideCondition::Includes { outer, inner } => write!(f, "{inner} within {outer}"),
            SideCondition::Covering { set } => write!(f, "every orbit meets {set}"),
            SideCondition::Lattice { set } => write!(f, "lattice condition for {set}"),
            SideCondition::FieldIdentity { lhs, rhs } => write!(f, "{lhs} = {rhs} (exact)"),
            SideCondition::BasicLemma => f.write_str("covering identity over Q(x, y) (exact)"),
            SideCondition::Exponent { r } => write!(f, "{r} not in {{0, 1}}"),
        }
    }
}

/// A side condition together with its recorded outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub check: SideCondition,
    pub outcome: Outcome,
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.outcome)
    }
}

/// Runs side conditions with memoization keyed by their JSON form.
#[derive(Debug)]
pub struct Checker {
    config: CheckConfig,
    memo: HashMap<String, Outcome>,
}

impl Checker {
    pub fn new(config: CheckConfig) -> Checker {
        Checker { config, memo: HashMap::new() }
    }

    pub fn config(&self) -> &CheckConfig {
        &self.config
    }

    pub fn run(&mut self, check: &SideCondition) -> Outcome {
        let key = serde_json::to_string(check).expect("side conditions serialize");
        if let Some(o) = self.memo.get(&key) {
            return o.clone();
        }
        let o = check.run(&self.config);
        self.memo.insert(key, o.clone());
        o
    }
}
