//! Real functions as expression trees: parsing, differentiation, domains,
//! arbitrary-precision evaluation, and sampling checks.

mod checks;
mod constant;
mod diff;
mod domain;
mod expr;
mod function;
mod numeric;

pub use checks::{
    derivative_nonvanishing_check, identity_check, periodicity_check, positivity_check, zero_set, CheckConfig, Verdict,
    ZeroSet,
};
pub use constant::Constant;
pub use diff::{differentiate, outer_derivative};
pub use domain::{lattice_contains, sample_margin, DomainSet};
pub use expr::{Expr, Func, NamedConst};
pub use function::{FunctionSpec, BUILTINS};
pub use numeric::{less, numeric_eval, Assignment, Evaluator, MIN_PRECISION};

use crate::syntax::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("`{function}` takes one argument, got {found}")]
    Arity { function: String, found: usize },
    #[error("division by zero")]
    ZeroDivisor,
    #[error("exponent `{0}` is not a rational constant")]
    NonRationalExponent(String),
    #[error("expression nested too deeply")]
    TooDeep,
    #[error("`{0}` is not a constant of the form q*pi^a*e^b")]
    NotConstant(String),
    #[error("invalid domain {0}")]
    InvalidDomain(String),
    #[error("`{0}` is not a function of exactly one variable")]
    NotUnary(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("variable `{0}` has no value")]
    UnboundVariable(String),
    #[error("precision {0} is below the minimum of {MIN_PRECISION} bits")]
    Precision(u32),
}
