use super::expr::{Expr, Func};
use crate::rational::{frac, Rational};

/// Symbolic derivative of `e` with respect to `var`. Only the local constant
/// folding of the smart constructors is applied to the result.
pub fn differentiate(e: &Expr, var: &str) -> Expr {
    match e {
        Expr::Var(v) => Expr::int(i64::from(v == var)),
        Expr::Const(_) | Expr::Named(_) => Expr::int(0),
        Expr::Add(a, b) => Expr::add(differentiate(a, var), differentiate(b, var)),
        Expr::Mul(a, b) => Expr::add(
            Expr::mul(differentiate(a, var), (**b).clone()),
            Expr::mul((**a).clone(), differentiate(b, var)),
        ),
        Expr::Div(a, b) => Expr::div(
            Expr::sub(
                Expr::mul(differentiate(a, var), (**b).clone()),
                Expr::mul((**a).clone(), differentiate(b, var)),
            ),
            Expr::powi((**b).clone(), 2),
        ),
        Expr::Pow(a, r) => Expr::mul(
            Expr::mul(Expr::num(r.clone()), Expr::pow((**a).clone(), r - Rational::from_integer(1.into()))),
            differentiate(a, var),
        ),
        Expr::Apply(f, a) => Expr::mul(outer_derivative(*f, a), differentiate(a, var)),
    }
}

/// `f'(a)`
pub fn outer_derivative(f: Func, a: &Expr) -> Expr {
    let a = a.clone();
    let inv_sq = |g: Func| Expr::div(Expr::int(1), Expr::powi(Expr::apply(g, a.clone()), 2));
    match f {
        Func::Sin => Expr::apply(Func::Cos, a),
        Func::Cos => Expr::neg(Expr::apply(Func::Sin, a)),
        Func::Tan => inv_sq(Func::Cos),
        Func::Cot => Expr::neg(inv_sq(Func::Sin)),
        Func::Sinh => Expr::apply(Func::Cosh, a),
        Func::Cosh => Expr::apply(Func::Sinh, a),
        Func::Tanh => inv_sq(Func::Cosh),
        Func::Coth => Expr::neg(inv_sq(Func::Sinh)),
        Func::Exp => Expr::apply(Func::Exp, a),
        Func::Ln => Expr::div(Expr::int(1), a),
        Func::Sqrt => Expr::div(Expr::num(frac(1, 2)), Expr::apply(Func::Sqrt, a)),
    }
}
