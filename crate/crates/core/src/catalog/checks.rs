//! Sampling checks used as side conditions.
//!
//! Identities are tested at `points` deterministic pseudo-random points of
//! the domain at `precision` bits, with tolerance `2^-(precision/2)`. This is
//! evidence rather than proof: an analytic non-identity that agrees to 128
//! bits at 64 independent points is not expected to exist among the
//! expressions used here, but nothing rules it out in general.

use std::fmt;

use astro_float::{BigFloat, RoundingMode};
use serde::{Deserialize, Serialize};

use super::constant::Constant;
use super::domain::DomainSet;
use super::expr::{Expr, Func};
use super::function::FunctionSpec;
use super::numeric::{less, Assignment, Evaluator};

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CheckConfig {
    pub points: usize,
    pub precision: u32,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { points: 64, precision: 256, seed: 0x5EED }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Holds,
    Fails { point: String, gap: String },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    fn inconclusive(reason: impl Into<String>) -> Verdict {
        Verdict::Inconclusive { reason: reason.into() }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("Holds"),
            Verdict::Fails { point, gap } => write!(f, "Fails at {point} (gap {gap})"),
            Verdict::Inconclusive { reason } => write!(f, "Inconclusive ({reason})"),
        }
    }
}

struct Sampler {
    ev: Evaluator,
    tol: BigFloat,
    config: CheckConfig,
}

impl Sampler {
    fn new(config: &CheckConfig) -> Result<Sampler, Verdict> {
        let ev = Evaluator::new(config.precision).map_err(|e| Verdict::inconclusive(e.to_string()))?;
        let tol = ev.pow2(-i64::from(config.precision / 2));
        Ok(Sampler { ev, tol, config: *config })
    }

    /// Runs `test` on up to `4·points` draws until `points` valid ones were
    /// seen. `test` returns `Ok(None)` on success and `Ok(Some(gap))` on a
    /// violation.
    fn run<F>(&mut self, vars: &[String], domain: &DomainSet, mut test: F) -> Verdict
    where
        F: FnMut(&mut Evaluator, &BigFloat, &Assignment) -> Result<Option<BigFloat>, String>,
    {
        let wanted = self.config.points;
        let mut valid = 0;
        let mut attempt = 0u64;
        while valid < wanted && attempt < 4 * wanted as u64 {
            let mut env = Assignment::new();
            let mut shown = Vec::new();
            let mut ok = true;
            for (j, v) in vars.iter().enumerate() {
                match domain.sample(self.config.seed, attempt * 2 + j as u64, &mut self.ev) {
                    Some(x) => {
                        shown.push(format!("{v} = {x}"));
                        let xf = self.ev.rational(&x);
                        env.insert(v.clone(), xf);
                    }
                    None => ok = false,
                }
            }
            attempt += 1;
            if !ok {
                continue;
            }
            let point = if shown.is_empty() { "no variables".to_string() } else { shown.join(", ") };
            match test(&mut self.ev, &self.tol, &env) {
                Ok(None) => valid += 1,
                Ok(Some(gap)) => return Verdict::Fails { point, gap: self.ev.format(&gap) },
                Err(e) => return Verdict::inconclusive(format!("evaluation failed at {point}: {e}")),
            }
            if vars.is_empty() {
                return Verdict::Holds;
            }
        }
        if valid < wanted {
            return Verdict::inconclusive(format!("only {valid} of {wanted} sample points were valid"));
        }
        Verdict::Holds
    }
}

fn mismatch(l: &BigFloat, r: &BigFloat, tol: &BigFloat, prec: usize) -> Option<BigFloat> {
    let diff = l.sub(r, prec, RM).abs();
    let (la, ra) = (l.abs(), r.abs());
    let scale = if less(&la, &ra) { ra } else { la };
    let one = BigFloat::from_i64(1, prec);
    let bound = if less(&scale, &one) { tol.clone() } else { tol.mul(&scale, prec, RM) };
    (!less(&diff, &bound)).then_some(diff)
}

/// `lhs = rhs` at sample points of `domain`. Both sides may use up to two
/// variables; each is drawn independently from `domain`.
pub fn identity_check(lhs: &Expr, rhs: &Expr, domain: &DomainSet, config: &CheckConfig) -> Verdict {
    let mut vars: Vec<String> = lhs.variables().into_iter().collect();
    vars.extend(rhs.variables());
    vars.sort();
    vars.dedup();
    if vars.len() > 2 {
        return Verdict::inconclusive(format!("{} variables, at most 2 supported", vars.len()));
    }
    let mut s = match Sampler::new(config) {
        Ok(s) => s,
        Err(v) => return v,
    };
    let prec = config.precision as usize + 32;
    s.run(&vars, domain, |ev, tol, env| {
        let l = ev.eval(lhs, env).map_err(|e| e.to_string())?;
        let r = ev.eval(rhs, env).map_err(|e| e.to_string())?;
        Ok(mismatch(&l, &r, tol, prec))
    })
}

/// `f(x + p) = ±f(x)` on `ℝ ∖ (pℤ + q)`, which must lie in the domain of `f`.
pub fn periodicity_check(f: &FunctionSpec, p: &Constant, q: &Constant, anti: bool, config: &CheckConfig) -> Verdict {
    if !f.is_unary() {
        return Verdict::inconclusive(format!("{} is not unary", f.name));
    }
    if !p.is_positive() {
        return Verdict::inconclusive(format!("period {p} is not positive"));
    }
    let lattice = match DomainSet::lattice_complement(p.clone(), q.clone()) {
        Ok(d) => d,
        Err(e) => return Verdict::inconclusive(e.to_string()),
    };
    let mut ev = match Evaluator::new(config.precision) {
        Ok(ev) => ev,
        Err(e) => return Verdict::inconclusive(e.to_string()),
    };
    if !f.domain.includes(&lattice, &mut ev) {
        return Verdict::inconclusive(format!("domain {} does not contain {lattice}", f.domain));
    }
    let shifted = f.at(&Expr::add(Expr::x(), p.to_expr()));
    let target = if anti { Expr::neg(f.body.clone()) } else { f.body.clone() };
    identity_check(&shifted, &target, &lattice, config)
}

/// `expr > 2^-(precision/2)` at the sample points of `domain`.
pub fn positivity_check(expr: &Expr, domain: &DomainSet, config: &CheckConfig) -> Verdict {
    let vars: Vec<String> = expr.variables().into_iter().collect();
    if vars.len() > 1 {
        return Verdict::inconclusive(format!("{} variables, at most 1 supported", vars.len()));
    }
    let mut s = match Sampler::new(config) {
        Ok(s) => s,
        Err(v) => return v,
    };
    s.run(&vars, domain, |ev, tol, env| {
        let v = ev.eval(expr, env).map_err(|e| e.to_string())?;
        Ok((!less(tol, &v)).then_some(v))
    })
}

/// Zeros of an expression in `x`, as lattices `pℤ + q` and single points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZeroSet {
    pub lattices: Vec<(Constant, Constant)>,
    pub points: Vec<Constant>,
}

impl ZeroSet {
    fn union(mut self, other: ZeroSet) -> ZeroSet {
        self.lattices.extend(other.lattices);
        self.points.extend(other.points);
        self
    }
}

/// Structural zero set from a closed allowlist; `None` when the expression
/// is outside it.
pub fn zero_set(e: &Expr) -> Option<ZeroSet> {
    let x = Expr::x();
    let pi = Constant::pi();
    match e {
        Expr::Const(c) => (!num_traits::Zero::is_zero(c)).then(ZeroSet::default),
        Expr::Named(_) => Some(ZeroSet::default()),
        Expr::Apply(f, a) if **a == x => match f {
            Func::Exp | Func::Cosh => Some(ZeroSet::default()),
            Func::Sin => Some(ZeroSet { lattices: vec![(pi, Constant::int(0))], points: vec![] }),
            Func::Cos => {
                let half = pi.scale(&crate::rational::frac(1, 2));
                Some(ZeroSet { lattices: vec![(pi, half)], points: vec![] })
            }
            Func::Sinh => Some(ZeroSet { lattices: vec![], points: vec![Constant::int(0)] }),
            _ => None,
        },
        Expr::Mul(a, b) => Some(zero_set(a)?.union(zero_set(b)?)),
        Expr::Div(a, _) => zero_set(a),
        Expr::Pow(a, r) => {
            if num_traits::Signed::is_negative(r) {
                Some(ZeroSet::default())
            } else {
                zero_set(a)
            }
        }
        _ => None,
    }
}

enum ZeroCheck {
    Excluded,
    Witness(Constant),
    Unknown,
}

fn zero_in_domain(zs: &ZeroSet, domain: &DomainSet, ev: &mut Evaluator) -> ZeroCheck {
    for c in &zs.points {
        if domain.contains(c, ev) {
            return ZeroCheck::Witness(c.clone());
        }
    }
    let mut unknown = false;
    for (p, q) in &zs.lattices {
        let Ok(complement) = DomainSet::lattice_complement(p.clone(), q.clone()) else {
            unknown = true;
            continue;
        };
        if complement.includes(domain, ev) {
            continue;
        }
        for k in (0..=64i64).flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] }) {
            let Some(pt) = q.add(&p.scale(&crate::rational::int(k))) else { break };
            if domain.contains(&pt, ev) {
                return ZeroCheck::Witness(pt);
            }
        }
        unknown = true;
    }
    if unknown {
        ZeroCheck::Unknown
    } else {
        ZeroCheck::Excluded
    }
}

/// `f′ ≠ 0` on the domain of `f`: sampled magnitude above tolerance plus a
/// structural certificate that every zero of `f′` lies outside the domain.
pub fn derivative_nonvanishing_check(f: &FunctionSpec, config: &CheckConfig) -> Verdict {
    if !f.is_unary() {
        return Verdict::inconclusive(format!("{} is not unary", f.name));
    }
    let fp = f.derivative().clone();
    let mut s = match Sampler::new(config) {
        Ok(s) => s,
        Err(v) => return v,
    };
    let zs = zero_set(&fp);
    let certified = match &zs {
        None => false,
        Some(zs) => match zero_in_domain(zs, &f.domain, &mut s.ev) {
            ZeroCheck::Excluded => true,
            ZeroCheck::Unknown => false,
            ZeroCheck::Witness(w) => {
                let gap = s.ev.eval(&fp.substitute("x", &w.to_expr()), &Assignment::new());
                let gap = match gap {
                    Ok(g) => s.ev.format(&g.abs()),
                    Err(_) => "0".to_string(),
                };
                return Verdict::Fails { point: format!("x = {w}"), gap };
            }
        },
    };
    let sampled = s.run(&["x".to_string()], &f.domain, |ev, tol, env| {
        let v = ev.eval(&fp, env).map_err(|e| e.to_string())?.abs();
        Ok(less(&v, tol).then_some(v))
    });
    if !sampled.holds() {
        return sampled;
    }
    if certified {
        Verdict::Holds
    } else {
        Verdict::inconclusive(format!("no structural certificate for the zeros of {fp}"))
    }
}
