use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::CatalogError;
use crate::rational::{int, is_integer, Rational};
use crate::syntax::{self, Ast, BinOp, MAX_DEPTH};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamedConst {
    Pi,
    E,
}

impl NamedConst {
    pub fn name(self) -> &'static str {
        match self {
            NamedConst::Pi => "pi",
            NamedConst::E => "e",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Cot,
    Sinh,
    Cosh,
    Tanh,
    Coth,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 11] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Cot,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Coth,
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Cot => "cot",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Coth => "coth",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree over one or two real variables.
///
/// Values are built through the smart constructors ([`Expr::add`],
/// [`Expr::mul`], ...), which fold rational constants and keep a numeric
/// factor of a product in leading position. The printed form parses back to
/// the identical tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Expr {
    Var(String),
    Const(Rational),
    Named(NamedConst),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Rational),
    Apply(Func, Box<Expr>),
}

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn x() -> Expr {
        Expr::var("x")
    }

    pub fn num(r: Rational) -> Expr {
        Expr::Const(r)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(int(n))
    }

    pub fn pi() -> Expr {
        Expr::Named(NamedConst::Pi)
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self {
            Expr::Const(r) => Some(r),
            _ => None,
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
            (Expr::Const(x), b) if x.is_zero() => b,
            (a, Expr::Const(y)) if y.is_zero() => a,
            (a, b) => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
            (Expr::Const(x), _) | (_, Expr::Const(x)) if x.is_zero() => Expr::Const(Rational::zero()),
            (Expr::Const(x), b) if x.is_one() => b,
            (a, Expr::Const(y)) => Expr::mul(Expr::Const(y), a),
            (Expr::Const(x), Expr::Mul(k, r)) if matches!(*k, Expr::Const(_)) => {
                let Expr::Const(k) = *k else { unreachable!() };
                Expr::mul(Expr::Const(x * k), *r)
            }
            (Expr::Mul(k, r), b) if matches!(*k, Expr::Const(_)) => Expr::mul(*k, Expr::mul(*r, b)),
            (a, Expr::Mul(k, r)) if !matches!(a, Expr::Const(_)) && matches!(*k, Expr::Const(_)) => {
                Expr::mul(*k, Expr::mul(a, *r))
            }
            (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    /// Panics on a literal zero divisor; parsed input reports it as an error.
    pub fn div(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (_, Expr::Const(y)) if y.is_zero() => panic!("division by literal zero"),
            (a, Expr::Const(y)) => Expr::mul(Expr::Const(y.recip()), a),
            (Expr::Const(x), _) if x.is_zero() => Expr::Const(x),
            (a, b) => Expr::Div(Box::new(a), Box::new(b)),
        }
    }

    pub fn pow(a: Expr, r: Rational) -> Expr {
        if r.is_zero() {
            return Expr::int(1);
        }
        if r.is_one() {
            return a;
        }
        if let Expr::Const(c) = &a {
            if is_integer(&r) && (!c.is_zero() || r.is_positive()) {
                if let Some(n) = r.to_integer().to_i32() {
                    return Expr::Const(num_traits::Pow::pow(c.clone(), n));
                }
            }
        }
        Expr::Pow(Box::new(a), r)
    }

    pub fn powi(a: Expr, n: i64) -> Expr {
        Expr::pow(a, int(n))
    }

    pub fn apply(f: Func, a: Expr) -> Expr {
        Expr::Apply(f, Box::new(a))
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(x) => Expr::Const(-x),
            Expr::Mul(k, r) if matches!(*k, Expr::Const(_)) => {
                let Expr::Const(k) = *k else { unreachable!() };
                Expr::mul(Expr::Const(-k), *r)
            }
            a => Expr::mul(Expr::int(-1), a),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::add(a, Expr::neg(b))
    }

    pub fn parse(text: &str) -> Result<Expr, CatalogError> {
        let ast = syntax::parse(text)?;
        lower(&ast)
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Var(_) | Expr::Const(_) | Expr::Named(_) => 1,
            Expr::Add(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => 1 + a.depth().max(b.depth()),
            Expr::Pow(a, _) | Expr::Apply(_, a) => 1 + a.depth(),
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Const(_) | Expr::Named(_) => {}
            Expr::Add(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Pow(a, _) | Expr::Apply(_, a) => a.collect_vars(out),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.variables().is_empty()
    }

    /// Replaces every occurrence of `var`, rebuilding through the smart
    /// constructors.
    pub fn substitute(&self, var: &str, value: &Expr) -> Expr {
        match self {
            Expr::Var(v) if v == var => value.clone(),
            Expr::Var(_) | Expr::Const(_) | Expr::Named(_) => self.clone(),
            Expr::Add(a, b) => Expr::add(a.substitute(var, value), b.substitute(var, value)),
            Expr::Mul(a, b) => Expr::mul(a.substitute(var, value), b.substitute(var, value)),
            Expr::Div(a, b) => {
                let den = b.substitute(var, value);
                if den.as_const().is_some_and(|c| c.is_zero()) {
                    Expr::Div(Box::new(a.substitute(var, value)), Box::new(den))
                } else {
                    Expr::div(a.substitute(var, value), den)
                }
            }
            Expr::Pow(a, r) => Expr::pow(a.substitute(var, value), r.clone()),
            Expr::Apply(f, a) => Expr::apply(*f, a.substitute(var, value)),
        }
    }

    fn level(&self) -> u8 {
        match self {
            Expr::Var(_) | Expr::Named(_) | Expr::Apply(..) => 5,
            Expr::Const(c) => const_level(c),
            Expr::Add(..) => 1,
            Expr::Mul(k, _) if k.as_const().is_some_and(|k| *k == -Rational::one()) => 3,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Pow(..) => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            f.write_str("(")?;
            self.write_bare(f)?;
            f.write_str(")")
        } else {
            self.write_bare(f)
        }
    }

    fn write_bare(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => f.write_str(v),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Named(n) => f.write_str(n.name()),
            Expr::Add(a, b) => {
                a.write_at(f, 1)?;
                match negated(b) {
                    Some(nb) => {
                        f.write_str(" - ")?;
                        nb.write_at(f, 2)
                    }
                    None => {
                        f.write_str(" + ")?;
                        b.write_at(f, 2)
                    }
                }
            }
            Expr::Mul(a, b) => {
                if a.as_const().is_some_and(|k| *k == -Rational::one()) {
                    f.write_str("-")?;
                    return b.write_at(f, 3);
                }
                a.write_at(f, 2)?;
                f.write_str("*")?;
                if a.as_const().is_some() && plain_product(b) {
                    b.write_at(f, 2)
                } else {
                    b.write_at(f, 3)
                }
            }
            Expr::Div(a, b) => {
                a.write_at(f, 2)?;
                f.write_str("/")?;
                b.write_at(f, 3)
            }
            Expr::Pow(a, r) => {
                a.write_at(f, 5)?;
                if is_integer(r) && !r.is_negative() {
                    write!(f, "^{r}")
                } else {
                    write!(f, "^({r})")
                }
            }
            Expr::Apply(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write_at(f, 1)?;
                f.write_str(")")
            }
        }
    }
}

fn const_level(c: &Rational) -> u8 {
    match (is_integer(c), c.is_negative()) {
        (true, false) => 5,
        (true, true) => 3,
        _ => 2,
    }
}

/// A product whose left spine has no quotient, so `k*` can prefix it
/// without parentheses.
fn plain_product(e: &Expr) -> bool {
    match e {
        Expr::Mul(l, _) => match l.as_ref() {
            Expr::Mul(..) => plain_product(l),
            Expr::Div(..) | Expr::Const(_) => false,
            _ => true,
        },
        _ => false,
    }
}

/// `Some(b')` when `b` prints as `-b'` on the right of a sum.
fn negated(b: &Expr) -> Option<Expr> {
    match b {
        Expr::Const(c) if c.is_negative() => Some(Expr::Const(-c)),
        Expr::Mul(k, r) => match k.as_const() {
            Some(k) if *k == -Rational::one() => Some((**r).clone()),
            Some(k) if k.is_negative() => Some(Expr::Mul(Box::new(Expr::Const(-k)), r.clone())),
            _ => None,
        },
        _ => None,
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_bare(f)
    }
}

impl std::str::FromStr for Expr {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expr::parse(s)
    }
}

impl TryFrom<String> for Expr {
    type Error = CatalogError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        Expr::parse(&s)
    }
}

impl From<Expr> for String {
    fn from(e: Expr) -> String {
        e.to_string()
    }
}

fn lower(ast: &Ast) -> Result<Expr, CatalogError> {
    let e = match ast {
        Ast::Number(r) => Expr::Const(r.clone()),
        Ast::Ident(n) => match n.as_str() {
            "pi" | "π" => Expr::Named(NamedConst::Pi),
            "e" => Expr::Named(NamedConst::E),
            _ => Expr::Var(n.clone()),
        },
        Ast::Call(name, args) => {
            let func = Func::from_name(name).ok_or_else(|| CatalogError::UnknownFunction(name.clone()))?;
            if args.len() != 1 {
                return Err(CatalogError::Arity { function: name.clone(), found: args.len() });
            }
            Expr::apply(func, lower(&args[0])?)
        }
        Ast::Neg(a) => Expr::neg(lower(a)?),
        Ast::Binary(op, a, b) => {
            let (x, y) = (lower(a)?, lower(b)?);
            match op {
                BinOp::Add => Expr::add(x, y),
                BinOp::Sub => Expr::sub(x, y),
                BinOp::Mul => Expr::mul(x, y),
                BinOp::Div => {
                    if y.as_const().is_some_and(|c| c.is_zero()) {
                        return Err(CatalogError::ZeroDivisor);
                    }
                    Expr::div(x, y)
                }
                BinOp::Pow => match y {
                    Expr::Const(r) => {
                        if x.as_const().is_some_and(|c| c.is_zero()) && !r.is_positive() {
                            return Err(CatalogError::ZeroDivisor);
                        }
                        Expr::pow(x, r)
                    }
                    other => return Err(CatalogError::NonRationalExponent(other.to_string())),
                },
            }
        }
    };
    if e.depth() > MAX_DEPTH {
        return Err(CatalogError::TooDeep);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn p(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    #[test]
    fn folding() {
        assert_eq!(p("2*3 + 1"), Expr::int(7));
        assert_eq!(p("0*sin(x) + x"), Expr::x());
        assert_eq!(p("x/2"), Expr::mul(Expr::num(frac(1, 2)), Expr::x()));
        assert_eq!(p("x*3"), p("3*x"));
        assert_eq!(p("x^1"), Expr::x());
        assert_eq!(p("2^-2"), Expr::num(frac(1, 4)));
        assert!(matches!(p("pi"), Expr::Named(NamedConst::Pi)));
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "sin(x)",
            "x - 1",
            "1 - x^2",
            "-x/sqrt(1 - x^2)",
            "2*tan(1/2*x)/(1 + tan(1/2*x)^2)",
            "(coth(x)^2 + 1)/(2*coth(x))",
            "x^(1/2)",
            "x^(-1)",
            "x - 3/2*y",
            "-(x + y)",
            "(-x)^2",
            "exp(-x) - 2*exp(x)*cosh(x)",
            "x + (y + z)",
            "sin(x + 1/2*pi)",
            "-3/4*pi",
        ] {
            let e = p(s);
            assert_eq!(p(&e.to_string()), e, "{s} -> {e}");
        }
        assert_eq!(p("x - 1").to_string(), "x - 1");
        assert_eq!(p("-x/sqrt(1 - x^2)").to_string(), "-x/sqrt(1 - x^2)");
    }

    #[test]
    fn errors() {
        assert!(matches!(Expr::parse("foo(x)"), Err(CatalogError::UnknownFunction(_))));
        assert!(matches!(Expr::parse("x/0"), Err(CatalogError::ZeroDivisor)));
        assert!(matches!(Expr::parse("x^y"), Err(CatalogError::NonRationalExponent(_))));
        assert!(matches!(Expr::parse("sin(x, y)"), Err(CatalogError::Arity { .. })));
        assert!(matches!(Expr::parse("x +"), Err(CatalogError::Syntax(_))));
    }

    #[test]
    fn substitution() {
        let e = p("sin(x)*x + 1");
        assert_eq!(e.substitute("x", &Expr::int(0)), Expr::int(1));
        assert_eq!(p("x + y").variables().len(), 2);
        assert!(p("pi/2 + 1").is_closed());
    }
}
