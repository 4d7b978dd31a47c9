use std::fmt;

use serde::{Deserialize, Serialize};

use super::diff::differentiate;
use super::domain::DomainSet;
use super::expr::{Expr, Func};
use super::CatalogError;

/// A named real function with its domain and declared partial derivatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub name: String,
    pub arity: usize,
    pub params: Vec<String>,
    pub body: Expr,
    pub domain: DomainSet,
    pub declared: Vec<Expr>,
}

/// Names accepted by [`FunctionSpec::builtin`].
pub const BUILTINS: [&str; 13] =
    ["sin", "cos", "tan", "cot", "sinh", "cosh", "tanh", "coth", "exp", "ln", "sqrt(1 - x^2)", "S2", "P2"];

fn unary(name: &str, body: &str, domain: &str, derivative: &str) -> FunctionSpec {
    FunctionSpec {
        name: name.to_string(),
        arity: 1,
        params: vec!["x".into()],
        body: Expr::parse(body).expect("builtin body"),
        domain: DomainSet::parse(domain).expect("builtin domain"),
        declared: vec![Expr::parse(derivative).expect("builtin derivative")],
    }
}

impl FunctionSpec {
    pub fn builtin(name: &str) -> Option<FunctionSpec> {
        Some(match name {
            "sin" => unary("sin", "sin(x)", "R", "cos(x)"),
            "cos" => unary("cos", "cos(x)", "R", "-sin(x)"),
            "tan" => unary("tan", "tan(x)", "R \\ (pi*Z + pi/2)", "1/cos(x)^2"),
            "cot" => unary("cot", "cot(x)", "R \\ (pi*Z)", "-1/sin(x)^2"),
            "sinh" => unary("sinh", "sinh(x)", "R", "cosh(x)"),
            "cosh" => unary("cosh", "cosh(x)", "R", "sinh(x)"),
            "tanh" => unary("tanh", "tanh(x)", "R", "1/cosh(x)^2"),
            "coth" => unary("coth", "coth(x)", "R \\ {0}", "-1/sinh(x)^2"),
            "exp" => unary("exp", "exp(x)", "R", "exp(x)"),
            "ln" => unary("ln", "ln(x)", "(0,inf)", "1/x"),
            "sqrt(1 - x^2)" => unary("sqrt(1 - x^2)", "sqrt(1 - x^2)", "(-1,1)", "-x/sqrt(1 - x^2)"),
            "S2" | "P2" => {
                let (body, declared) = if name == "S2" {
                    ("x1 + x2", ["1", "1"])
                } else {
                    ("x1*x2", ["x2", "x1"])
                };
                FunctionSpec {
                    name: name.to_string(),
                    arity: 2,
                    params: vec!["x1".into(), "x2".into()],
                    body: Expr::parse(body).expect("builtin body"),
                    domain: DomainSet::FullLine,
                    declared: declared.iter().map(|d| Expr::parse(d).expect("builtin derivative")).collect(),
                }
            }
            _ => return None,
        })
    }

    pub fn all_builtins() -> Vec<FunctionSpec> {
        BUILTINS.iter().map(|n| FunctionSpec::builtin(n).expect("listed builtin")).collect()
    }

    /// The unary builtin whose body is `f(x)`.
    pub fn of(f: Func) -> Option<FunctionSpec> {
        FunctionSpec::builtin(f.name()).filter(|s| s.body == Expr::apply(f, Expr::x()))
    }

    /// A unary function given by its body. The variable is renamed to `x`;
    /// a missing domain defaults to the builtin's domain when the body
    /// matches a builtin and to the full line otherwise.
    pub fn from_body(body: &Expr, domain: Option<DomainSet>) -> Result<FunctionSpec, CatalogError> {
        let vars = body.variables();
        if vars.len() != 1 {
            return Err(CatalogError::NotUnary(body.to_string()));
        }
        let v = vars.into_iter().next().expect("one variable");
        let body = body.substitute(&v, &Expr::x());
        let builtin = FunctionSpec::all_builtins().into_iter().find(|b| b.arity == 1 && b.body == body);
        Ok(match builtin {
            Some(b) => match domain {
                Some(d) => b.restrict(d),
                None => b,
            },
            None => FunctionSpec {
                name: body.to_string(),
                arity: 1,
                params: vec!["x".into()],
                declared: vec![differentiate(&body, "x")],
                body,
                domain: domain.unwrap_or(DomainSet::FullLine),
            },
        })
    }

    /// Parses `sin(x)`, `sin(x) on R \ (pi*Z)`, `x^(3/2), on (0,inf)`, `S2`, `P2`.
    pub fn parse(text: &str) -> Result<FunctionSpec, CatalogError> {
        let t = text.trim();
        if let Some(b) = FunctionSpec::builtin(t).filter(|b| b.arity == 2) {
            return Ok(b);
        }
        let (body, domain) = match split_on(t) {
            Some((b, d)) => (b, Some(DomainSet::parse(d)?)),
            None => (t, None),
        };
        FunctionSpec::from_body(&Expr::parse(body)?, domain)
    }

    pub fn restrict(&self, domain: DomainSet) -> FunctionSpec {
        FunctionSpec { domain, ..self.clone() }
    }

    pub fn is_unary(&self) -> bool {
        self.arity == 1
    }

    pub fn derivative(&self) -> &Expr {
        &self.declared[0]
    }

    /// `f(arg)` for a unary function.
    pub fn at(&self, arg: &Expr) -> Expr {
        self.body.substitute("x", arg)
    }
}

fn split_on(t: &str) -> Option<(&str, &str)> {
    let i = t.rfind(" on ")?;
    let body = t[..i].trim_end().trim_end_matches(',').trim_end();
    Some((body, &t[i + 4..]))
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arity == 2 {
            return f.write_str(&self.name);
        }
        write!(f, "{} on {}", self.body, self.domain)
    }
}

impl std::str::FromStr for FunctionSpec {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FunctionSpec::parse(s)
    }
}
