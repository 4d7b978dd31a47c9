//! The rule catalog, applied in the order of [`RULES`].

use super::evidence::SideCondition;
use super::fact::{Fact, PowerExponent, ShiftSet};
use super::kb::{Exception, Firing, KnowledgeBase, Recipe};
use crate::catalog::{differentiate, Constant, DomainSet, Expr, FunctionSpec};
use crate::orbit::{IntervalSet, LatticeSet};
use crate::rational::frac;

pub(crate) type Rule = fn(&mut KnowledgeBase);

pub(crate) const RULES: [(&str, Rule); 16] = [
    ("R-DEF-STD", def_std),
    ("R-COMPOSE", compose),
    ("R-INVERSE", inverse),
    ("R-LINCOMB", lincomb),
    ("R-PRODPOW", prodpow),
    ("R-ODD-ZEROS", odd_zeros),
    ("R-HZ-EQ", hz_eq),
    ("R-BL", basic_lemma),
    ("R-CORR", corr),
    ("R-PERIODIC", periodic),
    ("R-TRI", tri),
    ("R-HYP", hyp),
    ("R-EXP", exp),
    ("R-NH", nh),
    ("R-BE", be),
    ("R-MAK", mak),
];

/// Names of the catalog rules in firing order.
pub fn rule_names() -> Vec<&'static str> {
    RULES.iter().map(|(n, _)| *n).collect()
}

fn e(s: &str) -> Expr {
    Expr::parse(s).expect("rule expression")
}

fn k(s: &str) -> Constant {
    Constant::parse(s).expect("rule constant")
}

fn dom(s: &str) -> DomainSet {
    DomainSet::parse(s).expect("rule domain")
}

fn builtin(name: &str) -> FunctionSpec {
    FunctionSpec::builtin(name).expect("builtin")
}

const fn plain(rule: &'static str, target: &'static str, expr: &'static str, on: &'static str) -> Recipe {
    Recipe { rule, target, expr, on, odd: false, exception: Exception::None }
}

fn def_std(kb: &mut KnowledgeBase) {
    if kb.known(&Fact::Additive) && kb.known(&Fact::DerivatesP2) {
        kb.fire(
            Firing::new("R-DEF-STD", "a derivation with respect to S2 and P2 is standard")
                .premises([Fact::Additive, Fact::DerivatesP2])
                .concludes(Fact::StandardDerivation),
        );
    }
    if kb.known(&Fact::StandardDerivation) {
        kb.fire(
            Firing::new("R-DEF-STD", "a standard derivation derivates S2 and P2")
                .premise(Fact::StandardDerivation)
                .concludes(Fact::Additive)
                .concludes(Fact::DerivatesP2),
        );
    }
}

const COMPOSE: [Recipe; 2] =
    [plain("R-COMPOSE", "cos", "sin(x + pi/2)", "R"), plain("R-COMPOSE", "sin", "cos(x - pi/2)", "R")];

fn compose(kb: &mut KnowledgeBase) {
    for r in &COMPOSE {
        kb.apply_recipe(r);
    }
}

fn inverse(kb: &mut KnowledgeBase) {
    for (f, g) in [("exp", "ln"), ("ln", "exp")] {
        let (f, g) = (builtin(f), builtin(g));
        if kb.derivates_known(&g) {
            continue;
        }
        let Some(known) = kb.find_derivates(&f.body, &f.domain) else { continue };
        let slope_at_g = f.derivative().substitute("x", &g.body);
        kb.fire(
            Firing::new("R-INVERSE", format!("{} is the inverse of {}", g.body, f.body))
                .premise(Fact::derivates(known.clone()))
                .check(SideCondition::Includes { outer: known.domain.clone(), inner: f.domain.clone() })
                .check(SideCondition::Nonvanishing { function: f.clone() })
                .check(SideCondition::Identity { lhs: f.at(&g.body), rhs: Expr::x(), domain: g.domain.clone() })
                .check(SideCondition::Identity { lhs: g.at(&f.body), rhs: Expr::x(), domain: f.domain.clone() })
                .check(SideCondition::Identity {
                    lhs: Expr::div(Expr::int(1), slope_at_g),
                    rhs: g.derivative().clone(),
                    domain: g.domain.clone(),
                })
                .concludes(Fact::derivates(g)),
        );
    }
}

const LINCOMB: [Recipe; 3] = [
    plain("R-LINCOMB", "exp", "sinh(x) + cosh(x)", "R"),
    plain("R-LINCOMB", "sinh", "(exp(x) - exp(-x))/2", "R"),
    plain("R-LINCOMB", "cosh", "(exp(x) + exp(-x))/2", "R"),
];

fn lincomb(kb: &mut KnowledgeBase) {
    for r in &LINCOMB {
        kb.apply_recipe(r);
    }
}

const PRODPOW: [Recipe; 6] = [
    plain("R-PRODPOW", "tan", "sin(x)/cos(x)", "R \\ (pi*Z + pi/2)"),
    plain("R-PRODPOW", "cot", "cos(x)/sin(x)", "R \\ (pi*Z)"),
    plain("R-PRODPOW", "tanh", "sinh(x)/cosh(x)", "R"),
    plain("R-PRODPOW", "coth", "cosh(x)/sinh(x)", "R \\ {0}"),
    plain("R-PRODPOW", "coth", "1/tanh(x)", "R \\ {0}"),
    Recipe {
        rule: "R-PRODPOW",
        target: "tanh",
        expr: "1/coth(x)",
        on: "R \\ {0}",
        odd: false,
        exception: Exception::Point { at: "0", value: "0" },
    },
];

fn prodpow(kb: &mut KnowledgeBase) {
    for r in &PRODPOW {
        kb.apply_recipe(r);
    }
}

fn odd_zeros(kb: &mut KnowledgeBase) {
    if !kb.known(&Fact::DerivatesP2) {
        return;
    }
    kb.fire(
        Firing::new("R-ODD-ZEROS", "Leibniz rule at 0, 1 and -1, and on powers of positive reals")
            .premise(Fact::DerivatesP2)
            .concludes(Fact::Odd)
            .concludes(Fact::zero(Constant::int(-1)))
            .concludes(Fact::zero(Constant::int(0)))
            .concludes(Fact::zero(Constant::int(1)))
            .concludes(Fact::PowerRule { exponent: PowerExponent::All }),
    );
}

fn hz_eq(kb: &mut KnowledgeBase) {
    if !kb.known(&Fact::DerivatesP2) {
        return;
    }
    let facts = kb.facts().to_vec();
    for f in facts {
        match f {
            Fact::KnownZero { c } => {
                kb.ensure_homog(&c);
            }
            Fact::KnownHomogeneous { c } => {
                kb.ensure_zero(&c);
            }
            _ => {}
        }
    }
}

fn shift_sets(kb: &KnowledgeBase) -> Vec<ShiftSet> {
    kb.facts()
        .iter()
        .filter_map(|f| match f {
            Fact::ShiftInvariantOn { set } => Some(set.clone()),
            _ => None,
        })
        .collect()
}

fn basic_lemma(kb: &mut KnowledgeBase) {
    if !kb.known(&Fact::DerivatesP2) {
        return;
    }
    for set in shift_sets(kb) {
        let ShiftSet::Intervals(u) = &set else { continue };
        kb.fire(
            Firing::new("R-BL", format!("U = {u} meets every orbit H_t"))
                .premises([Fact::DerivatesP2, Fact::shift_invariant(set.clone())])
                .check(SideCondition::Covering { set: u.clone() })
                .check(SideCondition::BasicLemma)
                .concludes(Fact::StandardDerivation),
        );
    }
}

fn corr(kb: &mut KnowledgeBase) {
    if !kb.known(&Fact::DerivatesP2) {
        return;
    }
    for set in shift_sets(kb) {
        let ShiftSet::LatticeComplement(l) = &set else { continue };
        kb.fire(
            Firing::new("R-CORR", format!("U = R \\ ({l})"))
                .premises([Fact::DerivatesP2, Fact::shift_invariant(set.clone())])
                .check(SideCondition::Lattice { set: l.clone() })
                .check(SideCondition::BasicLemma)
                .concludes(Fact::StandardDerivation),
        );
    }
}

struct PeriodicCandidate {
    known: FunctionSpec,
    restricted: FunctionSpec,
    p: Constant,
    q: Constant,
    anti: bool,
}

fn periodic_candidates(kb: &mut KnowledgeBase) -> Vec<PeriodicCandidate> {
    let mut out: Vec<PeriodicCandidate> = Vec::new();
    for (name, q, anti) in [("sin", "pi/2", true), ("cos", "0", true), ("tan", "pi/2", false), ("cot", "0", false)] {
        let (p, q) = (Constant::pi(), k(q));
        let lattice = DomainSet::lattice_complement(p.clone(), q.clone()).expect("rational ratio");
        let restricted = builtin(name).restrict(lattice);
        if let Some(known) = kb.find_derivates(&restricted.body, &restricted.domain) {
            out.push(PeriodicCandidate { known, restricted, p, q, anti });
        }
    }
    for g in kb.derivates_facts() {
        let DomainSet::LineMinusLattice { period, offset } = &g.domain else { continue };
        for anti in [false, true] {
            let dup = out.iter().any(|c| c.restricted == g && &c.p == period && &c.q == offset && c.anti == anti);
            if !dup {
                out.push(PeriodicCandidate { known: g.clone(), restricted: g.clone(), p: period.clone(), q: offset.clone(), anti });
            }
        }
    }
    out
}

fn periodic(kb: &mut KnowledgeBase) {
    if !kb.known(&Fact::DerivatesP2) {
        return;
    }
    for c in periodic_candidates(kb) {
        let domain = c.restricted.domain.clone();
        let fact = Fact::Periodic { period: c.p.clone(), domain: domain.clone() };
        let kind = if c.anti { "antiperiodic" } else { "periodic" };
        let mut f = Firing::new(
            "R-PERIODIC",
            format!("f = {}, p = {}, q = {}, {kind}: d(x + p) = d(x)", c.restricted, c.p, c.q),
        )
        .premises([Fact::DerivatesP2, Fact::derivates(c.known.clone())]);
        if c.anti {
            f = f.premise(Fact::Odd);
        }
        let f = f
            .check(SideCondition::Includes { outer: c.known.domain.clone(), inner: domain.clone() })
            .check(SideCondition::Periodicity {
                function: c.restricted.clone(),
                period: c.p.clone(),
                offset: c.q.clone(),
                anti: c.anti,
            })
            .check(SideCondition::Nonvanishing { function: c.restricted.clone() })
            .concludes(fact.clone());
        if kb.fire(f) {
            periodic_chain(kb, &c.p, &c.q, &fact, &domain);
        }
    }
}

/// From `d(x + p) = d(x)` off `pℤ + q` to shift invariance off `ℤ + q/p`.
fn periodic_chain(kb: &mut KnowledgeBase, p: &Constant, q: &Constant, periodic: &Fact, domain: &DomainSet) {
    let zero = |c: &Constant| Fact::zero(c.clone());
    let at = |c: &Constant| SideCondition::InDomain { point: c.clone(), domain: domain.clone() };
    let steps: Vec<Firing> = if !q.is_zero() {
        let origin = Constant::int(0);
        kb.ensure_zero(&origin);
        vec![Firing::new("R-PERIODIC", format!("x = 0: d({p}) = d(0) = 0"))
            .premises([periodic.clone(), zero(&origin)])
            .check(at(&origin))
            .concludes(zero(p))]
    } else {
        let half = p.scale(&frac(1, 2));
        let three_half = p.scale(&frac(3, 2));
        let quarter = p.scale(&frac(1, 4));
        let three = Constant::int(3);
        let two = Constant::int(2);
        vec![
            Firing::new("R-PERIODIC", format!("x = {}: d({half}) = d({}) = -d({half})", half.neg(), half.neg()))
                .premises([periodic.clone(), Fact::Odd])
                .check(at(&half.neg()))
                .concludes(zero(&half)),
            Firing::new("R-PERIODIC", format!("x = {half}: d({three_half}) = d({half}) = 0"))
                .premises([periodic.clone(), zero(&half)])
                .check(at(&half))
                .concludes(zero(&three_half)),
            Firing::new("R-PERIODIC", format!("3 = ({three_half})/({half}) is a quotient of zeros"))
                .premises([Fact::DerivatesP2, zero(&three_half), zero(&half)])
                .concludes(zero(&three)),
            Firing::new(
                "R-PERIODIC",
                format!("x = {}: -d({quarter}) = d({}) = 3*d({quarter})", quarter.neg(), p.scale(&frac(3, 4))),
            )
            .premises([periodic.clone(), Fact::Odd, Fact::DerivatesP2, zero(&three)])
            .check(at(&quarter.neg()))
            .concludes(zero(&quarter)),
            Firing::new("R-PERIODIC", format!("2 = ({half})/({quarter}) is a quotient of zeros"))
                .premises([Fact::DerivatesP2, zero(&half), zero(&quarter)])
                .concludes(zero(&two)),
            Firing::new("R-PERIODIC", format!("d({p}) = 2*d({half}) + {half}*d(2) = 0"))
                .premises([Fact::DerivatesP2, zero(&two), zero(&half)])
                .concludes(zero(p)),
        ]
    };
    for s in steps {
        if !kb.fire(s) {
            return;
        }
    }
    let ratio = q.div(p).and_then(|r| r.as_rational().cloned()).expect("rational offset ratio");
    let Ok(lattice) = LatticeSet::new([ratio]) else { return };
    kb.fire(
        Firing::new("R-PERIODIC", format!("y = x/{p}: d(y) = d({p}*y)/{p} = d({p}*y + {p})/{p} = d(y + 1)"))
            .premises([periodic.clone(), zero(p), Fact::DerivatesP2])
            .concludes(Fact::shift_invariant(ShiftSet::LatticeComplement(lattice))),
    );
}

const TRI: [Recipe; 2] = [
    Recipe {
        rule: "R-TRI",
        target: "sin",
        expr: "2*tan(x/2)/(1 + tan(x/2)^2)",
        on: "R \\ (2*pi*Z + pi)",
        odd: false,
        exception: Exception::Lattice { p: "2*pi", q: "pi", value: "0" },
    },
    Recipe {
        rule: "R-TRI",
        target: "sin",
        expr: "2*cot(x/2)/(1 + cot(x/2)^2)",
        on: "R \\ (2*pi*Z)",
        odd: false,
        exception: Exception::Lattice { p: "2*pi", q: "0", value: "0" },
    },
];

fn tri(kb: &mut KnowledgeBase) {
    for (name, x0) in [("sin", "pi"), ("tan", "pi"), ("cos", "pi/2"), ("cot", "pi/2")] {
        let g = builtin(name);
        let x0 = k(x0);
        let goal = Fact::zero(x0.clone());
        if kb.known(&goal) {
            continue;
        }
        let facts: Vec<FunctionSpec> = kb.derivates_facts().into_iter().filter(|f| f.body == g.body).collect();
        let Some(known) = facts.into_iter().find(|f| kb.contains(&f.domain, &x0)) else { continue };
        let origin = Constant::int(0);
        if !kb.ensure_zero(&origin) {
            continue;
        }
        let at = x0.to_expr();
        kb.fire(
            Firing::new("R-TRI", format!("x = {x0}: d({}) = d(0) = 0 and {} != 0", g.at(&at), g.derivative().substitute("x", &at)))
                .premises([Fact::derivates(known.clone()), Fact::zero(origin)])
                .check(SideCondition::InDomain { point: x0.clone(), domain: known.domain.clone() })
                .check(SideCondition::Value { expr: g.at(&at), value: Constant::int(0) })
                .check(SideCondition::NonZero { expr: g.derivative().substitute("x", &at) })
                .concludes(goal),
        );
    }
    for r in &TRI {
        kb.apply_recipe(r);
    }
}

const HYP: [Recipe; 2] = [
    Recipe {
        rule: "R-HYP",
        target: "sinh",
        expr: "sqrt(cosh(x)^2 - 1)",
        on: "(0,inf)",
        odd: true,
        exception: Exception::Point { at: "0", value: "0" },
    },
    Recipe {
        rule: "R-HYP",
        target: "sinh",
        expr: "1/sqrt(coth(x)^2 - 1)",
        on: "(0,inf)",
        odd: true,
        exception: Exception::Point { at: "0", value: "0" },
    },
];

fn hyp(kb: &mut KnowledgeBase) {
    if !kb.known(&Fact::DerivatesP2) {
        return;
    }
    let (one, two) = (Constant::int(1), Constant::int(2));
    let line = DomainSet::FullLine;
    let punctured = dom("R \\ {0}");
    let positive = DomainSet::positive_half_line();
    let sinh_double = SideCondition::Identity { lhs: e("sinh(2*x)"), rhs: e("2*sinh(x)*cosh(x)"), domain: line.clone() };
    let ray = ShiftSet::Intervals(IntervalSet::parse("[1,inf)").expect("ray"));

    let cosh = builtin("cosh");
    if !kb.derivates_known(&cosh) {
        if let Some(sinh) = kb.find_derivates(&e("sinh(x)"), &line) {
            if kb.ensure_zero(&two) && kb.ensure_zero(&one) {
                kb.fire(
                    Firing::new("R-HYP", "sinh(x)*d(cosh(x)) = sinh(x)^2*d(x), divided by sinh(x) off 0, and d(cosh(0)) = d(1) = 0")
                        .premises([Fact::DerivatesP2, Fact::zero(two.clone()), Fact::derivates(sinh), Fact::zero(one.clone())])
                        .check(sinh_double.clone())
                        .check(SideCondition::Identity { lhs: e("cosh(2*x)"), rhs: e("cosh(x)^2 + sinh(x)^2"), domain: line.clone() })
                        .check(SideCondition::FieldIdentity {
                            lhs: "2*(S*Y + C*C*D) - 2*(C^2 + S^2)*D".into(),
                            rhs: "2*S*(Y - S*D)".into(),
                        })
                        .check(SideCondition::Nonvanishing { function: cosh.restrict(punctured.clone()) })
                        .check(SideCondition::Value { expr: e("cosh(0)"), value: one.clone() })
                        .concludes(Fact::derivates(cosh.clone())),
                );
            }
        }
    }

    let shift = Fact::shift_invariant(ray.clone());
    if !kb.known(&shift) {
        if let Some(c) = kb.find_derivates(&cosh.body, &line) {
            if kb.ensure_zero(&two) {
                let u = e("2*cosh(x)^2 - 1");
                kb.fire(
                    Firing::new("R-HYP", format!("u = {u}: d(u) = d(cosh(2*x)) = 4*cosh(x)*d(cosh(x)) = d(u + 1), u ranges over [1,inf)"))
                        .premises([Fact::DerivatesP2, Fact::zero(two.clone()), Fact::derivates(c)])
                        .check(SideCondition::Identity { lhs: e("cosh(2*x)"), rhs: u.clone(), domain: line.clone() })
                        .check(sinh_double.clone())
                        .check(SideCondition::Value { expr: u.substitute("x", &Expr::int(0)), value: one.clone() })
                        .check(SideCondition::Positive { expr: differentiate(&u, "x"), domain: positive.clone() })
                        .check(SideCondition::Positive { expr: Expr::sub(u.clone(), Expr::x()), domain: positive.clone() })
                        .concludes(shift.clone()),
                );
            }
        }
    }
    if !kb.known(&shift) {
        if let Some(c) = kb.find_derivates(&e("coth(x)"), &punctured) {
            if kb.ensure_zero(&two) && kb.ensure_zero(&one) {
                kb.fire(
                    Firing::new("R-HYP", "t = coth(x): d((t^2 + 1)/(2*t)) = (t^2 - 1)/(2*t^2)*d(t) gives d(t^2) = d(t^2 + 1) for |t| > 1, and d(1) = d(2) = 0")
                        .premises([Fact::DerivatesP2, Fact::zero(one.clone()), Fact::zero(two.clone()), Fact::derivates(c.clone())])
                        .check(SideCondition::Includes { outer: c.domain.clone(), inner: punctured.clone() })
                        .check(SideCondition::Identity {
                            lhs: e("coth(2*x)"),
                            rhs: e("(coth(x)^2 + 1)/(2*coth(x))"),
                            domain: punctured.clone(),
                        })
                        .check(SideCondition::Identity {
                            lhs: e("-2/sinh(2*x)^2"),
                            rhs: e("(coth(x)^2 - 1)/(2*coth(x)^2)*(-1/sinh(x)^2)"),
                            domain: punctured.clone(),
                        })
                        .check(SideCondition::FieldIdentity {
                            lhs: "(t*b - (t^2 + 1)*a)/(2*t^2) - (t^2 - 1)/(2*t^2)*a".into(),
                            rhs: "(b - 2*t*a)/(2*t)".into(),
                        })
                        .check(SideCondition::Positive { expr: e("coth(x)^2 - 1"), domain: positive.clone() })
                        .check(SideCondition::Positive { expr: e("coth(x)^2 - 1/x^2"), domain: positive.clone() })
                        .check(SideCondition::Positive { expr: e("1/x^2 - coth(x)^2 + 1"), domain: positive.clone() })
                        .concludes(shift.clone()),
                );
            }
        }
    }
    for r in &HYP {
        kb.apply_recipe(r);
    }
}

fn exp(kb: &mut KnowledgeBase) {
    if !kb.known(&Fact::DerivatesP2) || kb.known(&Fact::Additive) {
        return;
    }
    let Some(g) = kb.find_derivates(&e("exp(x)"), &DomainSet::FullLine) else { return };
    kb.fire(
        Firing::new("R-EXP", "d(x1 + x2) = exp(-x1 - x2)*d(exp(x1)*exp(x2)) = d(x1) + d(x2)")
            .premises([Fact::DerivatesP2, Fact::derivates(g)])
            .check(SideCondition::Identity { lhs: e("exp(x1 + x2)"), rhs: e("exp(x1)*exp(x2)"), domain: DomainSet::FullLine })
            .check(SideCondition::FieldIdentity { lhs: "(E2*E1*a + E1*E2*b)/(E1*E2)".into(), rhs: "a + b".into() })
            .concludes(Fact::Additive),
    );
}

fn nh(kb: &mut KnowledgeBase) {
    if !kb.known(&Fact::Additive) {
        return;
    }
    let exps: Vec<_> = kb
        .facts()
        .iter()
        .filter_map(|f| match f {
            Fact::PowerRule { exponent: PowerExponent::Exponent(r) } => Some(r.clone()),
            _ => None,
        })
        .collect();
    for r in exps {
        kb.fire(
            Firing::new("R-NH", format!("additive and d(x^{r}) = {r}*x^({r} - 1)*d(x) for x > 0"))
                .premises([Fact::Additive, Fact::PowerRule { exponent: PowerExponent::Exponent(r.clone()) }])
                .check(SideCondition::Exponent { r })
                .concludes(Fact::StandardDerivation),
        );
    }
}

fn be(kb: &mut KnowledgeBase) {
    if !kb.known(&Fact::Additive) {
        return;
    }
    let target = builtin("sqrt(1 - x^2)");
    let Some(g) = kb.find_derivates(&target.body, &target.domain) else { return };
    kb.fire(
        Firing::new("R-BE", "additive and derivates sqrt(1 - x^2) on (-1,1)")
            .premises([Fact::Additive, Fact::derivates(g.clone())])
            .check(SideCondition::Includes { outer: g.domain.clone(), inner: target.domain.clone() })
            .check(SideCondition::Identity {
                lhs: g.derivative().clone(),
                rhs: target.derivative().clone(),
                domain: target.domain.clone(),
            })
            .concludes(Fact::StandardDerivation),
    );
}

fn mak(kb: &mut KnowledgeBase) {
    if !kb.known(&Fact::Additive) {
        return;
    }
    for name in ["exp", "sin", "cos", "tan", "cot", "sinh", "cosh", "tanh", "coth"] {
        let target = builtin(name);
        let Some(g) = kb.find_derivates(&target.body, &target.domain) else { continue };
        if kb.fire(
            Firing::new("R-MAK", format!("additive and derivates {}", target.body))
                .premises([Fact::Additive, Fact::derivates(g.clone())])
                .check(SideCondition::Includes { outer: g.domain.clone(), inner: target.domain.clone() })
                .concludes(Fact::StandardDerivation),
        ) {
            return;
        }
    }
}
