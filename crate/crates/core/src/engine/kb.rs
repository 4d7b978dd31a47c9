use std::collections::HashMap;

use super::evidence::{Checker, Evidence, SideCondition};
use super::fact::{Fact, PowerExponent, ShiftSet};
use super::rules::RULES;
use super::trace::{ProofTrace, AXIOM};
use super::EngineError;
use crate::catalog::{differentiate, CheckConfig, Constant, DomainSet, Evaluator, Expr, Func, FunctionSpec, MIN_PRECISION};
use crate::problem::ProblemSpec;
use crate::rational::{frac, is_integer, Rational};

/// A rule application waiting for its side conditions.
pub(crate) struct Firing {
    pub rule: &'static str,
    pub note: String,
    pub premises: Vec<Fact>,
    pub checks: Vec<SideCondition>,
    pub conclusions: Vec<Fact>,
}

impl Firing {
    pub fn new(rule: &'static str, note: impl Into<String>) -> Firing {
        Firing { rule, note: note.into(), premises: Vec::new(), checks: Vec::new(), conclusions: Vec::new() }
    }

    pub fn premise(mut self, f: Fact) -> Firing {
        if !self.premises.contains(&f) {
            self.premises.push(f);
        }
        self
    }

    pub fn premises(self, fs: impl IntoIterator<Item = Fact>) -> Firing {
        fs.into_iter().fold(self, Firing::premise)
    }

    pub fn check(mut self, c: SideCondition) -> Firing {
        if !self.checks.contains(&c) {
            self.checks.push(c);
        }
        self
    }

    pub fn checks(self, cs: impl IntoIterator<Item = SideCondition>) -> Firing {
        cs.into_iter().fold(self, Firing::check)
    }

    pub fn concludes(mut self, f: Fact) -> Firing {
        self.conclusions.push(f);
        self
    }
}

/// Premises and checks collected while decomposing an expression.
#[derive(Default)]
pub(crate) struct Needs {
    pub premises: Vec<Fact>,
    pub checks: Vec<SideCondition>,
}

impl Needs {
    fn fact(&mut self, f: Fact) {
        if !self.premises.contains(&f) {
            self.premises.push(f);
        }
    }

    fn check(&mut self, c: SideCondition) {
        if !self.checks.contains(&c) {
            self.checks.push(c);
        }
    }
}

/// Exceptional points of a recipe, handled separately from its identity.
pub(crate) enum Exception {
    None,
    /// The target takes `value` at `at`.
    Point { at: &'static str, value: &'static str },
    /// The target takes `value` on `p·ℤ + q`.
    Lattice { p: &'static str, q: &'static str, value: &'static str },
}

/// `target = expr` on `on`, extended by oddness and exceptional points to
/// the whole domain of `target`.
pub(crate) struct Recipe {
    pub rule: &'static str,
    pub target: &'static str,
    pub expr: &'static str,
    pub on: &'static str,
    pub odd: bool,
    pub exception: Exception,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryResult {
    Proved(ProofTrace),
    Unknown,
}

impl QueryResult {
    pub fn is_proved(&self) -> bool {
        matches!(self, QueryResult::Proved(_))
    }
}

/// Facts about `d` with the trace that justifies them.
pub struct KnowledgeBase {
    facts: Vec<Fact>,
    producer: HashMap<Fact, usize>,
    trace: ProofTrace,
    checker: Checker,
    ev: Evaluator,
    log: Vec<String>,
}

fn malformed(msg: impl Into<String>) -> EngineError {
    EngineError::MalformedProblem(msg.into())
}

/// A knowledge base holding the axioms of `problem`, one trace node each.
pub fn kb_init(problem: &ProblemSpec) -> Result<KnowledgeBase, EngineError> {
    let config = problem.options;
    if config.precision < MIN_PRECISION {
        return Err(malformed(format!("precision {} is below {MIN_PRECISION} bits", config.precision)));
    }
    if config.points == 0 {
        return Err(malformed("at least one sample point is required"));
    }
    let ev = Evaluator::new(config.precision).map_err(|e| malformed(e.to_string()))?;
    let mut kb = KnowledgeBase {
        facts: Vec::new(),
        producer: HashMap::new(),
        trace: ProofTrace::new(config),
        checker: Checker::new(config),
        ev,
        log: Vec::new(),
    };
    for a in &problem.axioms {
        match a {
            Fact::Derivates { function } if !function.is_unary() => {
                return Err(malformed(format!("{} is not a unary function; use `derivates P2`", function.name)));
            }
            Fact::ShiftInvariantOn { set: ShiftSet::Intervals(s) } if s.is_empty() => {
                return Err(malformed("shift invariance on the empty set"));
            }
            Fact::PowerRule { exponent: PowerExponent::All } => {
                return Err(malformed("the power rule for all exponents is derived, not assumed"));
            }
            Fact::Periodic { period, .. } if !period.is_positive() => {
                return Err(malformed(format!("period {period} is not positive")));
            }
            _ => {}
        }
        if !kb.known(a) {
            let id = kb.trace.push(AXIOM, String::new(), vec![], vec![], vec![a.clone()]);
            kb.add(a.clone(), id);
        }
    }
    Ok(kb)
}

/// Applies the rule catalog in order until no new fact appears.
pub fn fire_rules(mut kb: KnowledgeBase) -> KnowledgeBase {
    kb.saturate();
    kb
}

pub fn query(kb: &mut KnowledgeBase, goal: &Fact) -> QueryResult {
    kb.query(goal)
}

impl KnowledgeBase {
    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn trace(&self) -> &ProofTrace {
        &self.trace
    }

    pub fn config(&self) -> &CheckConfig {
        self.checker.config()
    }

    /// Firings skipped because a side condition was not accepted.
    pub fn log(&self) -> &[String] {
        &self.log
    }

    pub fn known(&self, f: &Fact) -> bool {
        self.producer.contains_key(f)
    }

    pub fn producer_of(&self, f: &Fact) -> Option<usize> {
        self.producer.get(f).copied()
    }

    fn add(&mut self, f: Fact, id: usize) {
        self.producer.insert(f.clone(), id);
        self.facts.push(f);
    }

    pub fn saturate(&mut self) {
        loop {
            let before = self.facts.len();
            for (_, rule) in RULES {
                rule(self);
            }
            if self.facts.len() == before {
                break;
            }
        }
    }

    /// Records `f` if its premises are known and every check is accepted.
    /// Returns whether all conclusions are known afterwards.
    pub(crate) fn fire(&mut self, f: Firing) -> bool {
        if f.conclusions.iter().all(|c| self.known(c)) {
            return true;
        }
        let Some(premises): Option<Vec<usize>> = f.premises.iter().map(|p| self.producer_of(p)).collect() else {
            return false;
        };
        let mut evidence = Vec::new();
        for c in &f.checks {
            let outcome = self.checker.run(c);
            let accepted = outcome.accepted();
            evidence.push(Evidence { check: c.clone(), outcome });
            if !accepted {
                let msg = format!("{} not fired ({}): {} gave {}", f.rule, f.note, c, evidence.last().expect("pushed").outcome);
                log::debug!("{msg}");
                if !self.log.contains(&msg) {
                    self.log.push(msg);
                }
                return false;
            }
        }
        let mut ids = Vec::new();
        for p in premises {
            if !ids.contains(&p) {
                ids.push(p);
            }
        }
        let new: Vec<Fact> = f.conclusions.into_iter().filter(|c| !self.known(c)).fold(Vec::new(), |mut v, c| {
            if !v.contains(&c) {
                v.push(c);
            }
            v
        });
        let id = self.trace.push(f.rule, f.note, ids, evidence, new.clone());
        for c in new {
            self.add(c, id);
        }
        true
    }

    pub(crate) fn zeros(&self) -> Vec<Constant> {
        self.facts
            .iter()
            .filter_map(|f| match f {
                Fact::KnownZero { c } => Some(c.clone()),
                _ => None,
            })
            .collect()
    }

    pub(crate) fn derivates_facts(&self) -> Vec<FunctionSpec> {
        self.facts
            .iter()
            .filter_map(|f| match f {
                Fact::Derivates { function } => Some(function.clone()),
                _ => None,
            })
            .collect()
    }

    pub(crate) fn includes(&mut self, outer: &DomainSet, inner: &DomainSet) -> bool {
        outer.includes(inner, &mut self.ev)
    }

    pub(crate) fn contains(&mut self, domain: &DomainSet, c: &Constant) -> bool {
        domain.contains(c, &mut self.ev)
    }

    /// A known fact `Derivates(g)` with `g` having body `body` and a domain
    /// containing `domain`.
    pub(crate) fn find_derivates(&mut self, body: &Expr, domain: &DomainSet) -> Option<FunctionSpec> {
        let candidates: Vec<FunctionSpec> = self.derivates_facts().into_iter().filter(|g| &g.body == body).collect();
        candidates.into_iter().find(|g| self.includes(&g.domain, domain))
    }

    pub(crate) fn derivates_known(&mut self, f: &FunctionSpec) -> bool {
        self.find_derivates(&f.body, &f.domain).is_some()
    }

    /// Establishes `KnownZero(c)` from the closure rules of the zero set.
    pub(crate) fn ensure_zero(&mut self, c: &Constant) -> bool {
        self.zero_closure(c, 2)
    }

    fn zero_closure(&mut self, c: &Constant, depth: u32) -> bool {
        let goal = Fact::zero(c.clone());
        if self.known(&goal) {
            return true;
        }
        let (odd, add, p2) = (self.known(&Fact::Odd), self.known(&Fact::Additive), self.known(&Fact::DerivatesP2));
        let hom = Fact::homogeneous(c.clone());
        if p2 && self.known(&hom) {
            let f = Firing::new("R-HZ-EQ", format!("d({c}*x) = {c}*d(x) at x = 1"))
                .premises([Fact::DerivatesP2, hom.clone()])
                .concludes(goal.clone());
            return self.fire(f);
        }
        if add && c.is_zero() {
            let f = Firing::new("R-ZERO-GROUP", "d(0) = d(0) + d(0)").premise(Fact::Additive).concludes(goal);
            return self.fire(f);
        }
        let neg = Fact::zero(c.neg());
        if odd && self.known(&neg) {
            let f = Firing::new("R-ZERO-GROUP", format!("d({c}) = -d({})", c.neg()))
                .premises([Fact::Odd, neg])
                .concludes(goal);
            return self.fire(f);
        }
        let zeros = self.zeros();
        if add {
            if let Some(z) = zeros.iter().find(|z| !z.is_zero() && z.same_monomial(c)) {
                let r = c.div(z).and_then(|q| q.as_rational().cloned()).expect("same monomial");
                let f = Firing::new("R-ZERO-GROUP", format!("d({r}*{z}) = {r}*d({z}) by additivity"))
                    .premises([Fact::Additive, Fact::zero(z.clone())])
                    .concludes(goal);
                return self.fire(f);
            }
        }
        if p2 {
            for a in &zeros {
                for b in &zeros {
                    if &a.mul(b) == c && !a.is_zero() && !b.is_zero() {
                        let f = Firing::new("R-ZERO-GROUP", format!("d({a}*{b}) = {a}*d({b}) + {b}*d({a})"))
                            .premises([Fact::DerivatesP2, Fact::zero(a.clone()), Fact::zero(b.clone())])
                            .concludes(goal);
                        return self.fire(f);
                    }
                }
            }
            for a in &zeros {
                for b in &zeros {
                    if a.div(b).as_ref() == Some(c) && !a.is_zero() {
                        let f = Firing::new("R-ZERO-GROUP", format!("{c} = {a}/{b} is a quotient of zeros"))
                            .premises([Fact::DerivatesP2, Fact::zero(a.clone()), Fact::zero(b.clone())])
                            .concludes(goal);
                        return self.fire(f);
                    }
                }
            }
        }
        if depth > 0 && odd && !c.is_zero() && self.zero_closure(&c.neg(), depth - 1) {
            return self.zero_closure(c, 0);
        }
        false
    }

    /// Establishes `KnownHomogeneous(c)`.
    pub(crate) fn ensure_homog(&mut self, c: &Constant) -> bool {
        let goal = Fact::homogeneous(c.clone());
        if self.known(&goal) {
            return true;
        }
        if let Some(r) = c.as_rational() {
            if self.known(&Fact::Additive) {
                let f = Firing::new("R-LINCOMB", format!("additive maps are Q-homogeneous: d({r}*x) = {r}*d(x)"))
                    .premise(Fact::Additive)
                    .concludes(goal);
                return self.fire(f);
            }
        }
        if self.known(&Fact::DerivatesP2) && self.ensure_zero(c) {
            let f = Firing::new("R-HZ-EQ", format!("d({c}*x) = {c}*d(x) + x*d({c})"))
                .premises([Fact::DerivatesP2, Fact::zero(c.clone())])
                .concludes(goal);
            return self.fire(f);
        }
        false
    }

    /// Collects what `d` must satisfy for `d(e(x)) = e′(x)·d(x)` on `on`.
    pub(crate) fn needs(&mut self, e: &Expr, on: &DomainSet, out: &mut Needs) -> bool {
        if e.is_closed() {
            let Some(c) = Constant::from_expr(e) else { return false };
            if !self.ensure_zero(&c) {
                return false;
            }
            out.fact(Fact::zero(c));
            return true;
        }
        match e {
            Expr::Var(v) => v == "x",
            Expr::Add(a, b) => {
                if !self.known(&Fact::Additive) {
                    return false;
                }
                out.fact(Fact::Additive);
                self.needs(a, on, out) && self.needs(b, on, out)
            }
            Expr::Mul(a, b) if a.is_closed() => {
                let Some(c) = Constant::from_expr(a) else { return false };
                if !self.ensure_homog(&c) {
                    return false;
                }
                out.fact(Fact::homogeneous(c));
                self.needs(b, on, out)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                if !self.known(&Fact::DerivatesP2) {
                    return false;
                }
                out.fact(Fact::DerivatesP2);
                self.needs(a, on, out) && self.needs(b, on, out)
            }
            Expr::Pow(a, r) if is_integer(r) => {
                if !self.known(&Fact::DerivatesP2) {
                    return false;
                }
                out.fact(Fact::DerivatesP2);
                self.needs(a, on, out)
            }
            Expr::Pow(a, r) => self.power_needs(a, r, on, out),
            Expr::Apply(Func::Sqrt, a) => self.power_needs(a, &frac(1, 2), on, out),
            Expr::Apply(f, a) => {
                let fx = Expr::apply(*f, Expr::x());
                let slope = differentiate(a, "x");
                let affine = slope.as_const().cloned().and_then(|k| {
                    let b = Constant::from_expr(&a.substitute("x", &Expr::int(0)))?;
                    on.affine_image(&k, &b)
                });
                let image = affine.unwrap_or(DomainSet::FullLine);
                let Some(g) = self.find_derivates(&fx, &image) else { return false };
                out.check(SideCondition::Includes { outer: g.domain.clone(), inner: image });
                out.fact(Fact::derivates(g));
                self.needs(a, on, out)
            }
            Expr::Const(_) | Expr::Named(_) => unreachable!("closed expressions handled above"),
        }
    }

    fn power_needs(&mut self, a: &Expr, r: &Rational, on: &DomainSet, out: &mut Needs) -> bool {
        if !self.known(&Fact::DerivatesP2) {
            return false;
        }
        let all = Fact::PowerRule { exponent: PowerExponent::All };
        let one = Fact::PowerRule { exponent: PowerExponent::Exponent(r.clone()) };
        let rule = if self.known(&all) {
            all
        } else if self.known(&one) {
            one
        } else {
            return false;
        };
        out.fact(Fact::DerivatesP2);
        out.fact(rule);
        out.check(SideCondition::Positive { expr: a.clone(), domain: on.clone() });
        self.needs(a, on, out)
    }

    /// Fires `recipe` when its ingredients are available.
    pub(crate) fn apply_recipe(&mut self, recipe: &Recipe) -> bool {
        let target = FunctionSpec::builtin(recipe.target).expect("recipe target is a builtin");
        if self.derivates_known(&target) {
            return true;
        }
        let expr = Expr::parse(recipe.expr).expect("recipe expression");
        let on = DomainSet::parse(recipe.on).expect("recipe domain");
        let mut needs = Needs::default();
        if !self.needs(&expr, &on, &mut needs) {
            return false;
        }
        let deriv = target.derivative().clone();
        let mut note = format!("{} = {} on {}", target.body, expr, on);
        let mut f = Firing::new(recipe.rule, String::new())
            .premises(needs.premises)
            .check(SideCondition::Identity { lhs: target.body.clone(), rhs: expr.clone(), domain: on.clone() })
            .check(SideCondition::Identity { lhs: differentiate(&expr, "x"), rhs: deriv.clone(), domain: on.clone() })
            .checks(needs.checks);
        if recipe.odd {
            if !self.known(&Fact::Odd) {
                return false;
            }
            let minus_x = Expr::neg(Expr::x());
            note.push_str(", extended by oddness");
            f = f
                .premise(Fact::Odd)
                .check(SideCondition::Identity {
                    lhs: target.at(&minus_x),
                    rhs: Expr::neg(target.body.clone()),
                    domain: on.clone(),
                })
                .check(SideCondition::Identity { lhs: deriv.substitute("x", &minus_x), rhs: deriv, domain: on.clone() });
        }
        match recipe.exception {
            Exception::None => {}
            Exception::Point { at, value } => {
                let at = Constant::parse(at).expect("recipe point");
                let value = Constant::parse(value).expect("recipe value");
                if !self.ensure_zero(&value) || !self.ensure_zero(&at) {
                    return false;
                }
                note.push_str(&format!(", and at x = {at}"));
                f = f
                    .premises([Fact::zero(value.clone()), Fact::zero(at.clone())])
                    .check(SideCondition::Value { expr: target.at(&at.to_expr()), value });
            }
            Exception::Lattice { p, q, value } => {
                let (p, q) = (Constant::parse(p).expect("recipe period"), Constant::parse(q).expect("recipe offset"));
                let value = Constant::parse(value).expect("recipe value");
                if !self.known(&Fact::Additive) || !self.ensure_zero(&value) || !self.ensure_zero(&p) || !self.ensure_zero(&q) {
                    return false;
                }
                note.push_str(&format!(", and on {p}*Z + {q}"));
                f = f
                    .premises([Fact::Additive, Fact::zero(value.clone()), Fact::zero(p.clone()), Fact::zero(q.clone())])
                    .check(SideCondition::LatticeValues { expr: target.body.clone(), period: p, offset: q, value });
            }
        }
        f.note = note;
        self.fire(f.concludes(Fact::derivates(target)))
    }

    /// Looks the goal up, applying the lazy closure rules for zeros and
    /// homogeneity.
    pub fn query(&mut self, goal: &Fact) -> QueryResult {
        let id = match goal {
            Fact::KnownZero { c } => {
                self.ensure_zero(c);
                self.producer_of(goal)
            }
            Fact::KnownHomogeneous { c } => {
                self.ensure_homog(c);
                self.producer_of(goal)
            }
            Fact::Derivates { function } => {
                self.find_derivates(&function.body, &function.domain).and_then(|g| self.producer_of(&Fact::derivates(g)))
            }
            Fact::PowerRule { .. } => self
                .producer_of(goal)
                .or_else(|| self.producer_of(&Fact::PowerRule { exponent: PowerExponent::All })),
            _ => self.producer_of(goal),
        };
        match id {
            Some(id) => QueryResult::Proved(self.trace.slice(&[id])),
            None => QueryResult::Unknown,
        }
    }
}
