//! Exact rational-function fields over ℚ and formal derivations on them.

mod algebraic;
mod derivation;
mod gcd;
mod poly;
mod ratfunc;

pub use algebraic::{adjoin_algebraic, is_irreducible, MAX_IRREDUCIBILITY_DEGREE};
pub use derivation::FormalDerivation;
pub use gcd::{content_in, gcd, prem, primitive_part_in};
pub use poly::{generators, merge_generators, Generators, Monomial, MultiPoly, MAX_TERMS};
pub use ratfunc::{FieldOp, RatFunc};

use num_traits::ToPrimitive;

use crate::rational::is_integer;
use crate::syntax::{self, Ast, BinOp, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("generator `{0}` has no image")]
    UnknownGenerator(String),
    #[error("generator `{0}` listed twice")]
    DuplicateGenerator(String),
    #[error("exponent vector has length {found}, expected {expected}")]
    ExponentLength { expected: usize, found: usize },
    #[error("polynomial with {terms} terms exceeds the limit of {MAX_TERMS}")]
    ResourceLimit { terms: usize },
    #[error("minimal polynomial is reducible: factor {factor}")]
    ReducibleMinPoly { factor: String },
    #[error("formal derivative of the minimal polynomial is zero")]
    ZeroFormalDerivative,
    #[error("minimal polynomial must be a nonconstant polynomial in one generator")]
    NotUnivariate,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
}

/// Parses a field element such as `(t^2 + 1)/(2*t)`.
///
/// Identifiers become generators; exponents must be integer literals.
pub fn parse_ratfunc(text: &str) -> Result<RatFunc, FieldError> {
    let ast = syntax::parse(text)?;
    let mut names = Vec::new();
    collect_idents(&ast, &mut names);
    let gens = generators(&names);
    lower(&ast, &gens)
}

fn collect_idents(ast: &Ast, out: &mut Vec<String>) {
    match ast {
        Ast::Number(_) => {}
        Ast::Ident(n) => out.push(n.clone()),
        Ast::Call(_, args) => args.iter().for_each(|a| collect_idents(a, out)),
        Ast::Neg(a) => collect_idents(a, out),
        Ast::Binary(_, a, b) => {
            collect_idents(a, out);
            collect_idents(b, out);
        }
    }
}

fn lower(ast: &Ast, gens: &Generators) -> Result<RatFunc, FieldError> {
    Ok(match ast {
        Ast::Number(r) => RatFunc::constant(gens, r.clone()),
        Ast::Ident(n) => RatFunc::generator(gens, n).expect("collected generator"),
        Ast::Call(name, _) => {
            return Err(FieldError::Unsupported(format!("function `{name}` in a field element")))
        }
        Ast::Neg(a) => lower(a, gens)?.neg(),
        Ast::Binary(op, a, b) => {
            if *op == BinOp::Pow {
                let n = match b.as_ref() {
                    Ast::Number(r) if is_integer(r) => r.to_integer().to_i32(),
                    _ => None,
                };
                let n = n.ok_or_else(|| FieldError::Unsupported("exponent must be an integer literal".into()))?;
                return lower(a, gens)?.pow(n);
            }
            let (x, y) = (lower(a, gens)?, lower(b, gens)?);
            let op = match op {
                BinOp::Add => FieldOp::Add,
                BinOp::Sub => FieldOp::Sub,
                BinOp::Mul => FieldOp::Mul,
                BinOp::Div => FieldOp::Div,
                BinOp::Pow => unreachable!(),
            };
            RatFunc::arith(op, &x, &y)?
        }
    })
}
