use proptest::prelude::*;

use derivcert::catalog::{
    derivative_nonvanishing_check, differentiate, identity_check, periodicity_check, positivity_check, CheckConfig,
    Constant, DomainSet, Expr, Func, FunctionSpec, NamedConst, Verdict,
};
use derivcert::rational::frac;
use num_traits::ToPrimitive;

fn check(lhs: &str, rhs: &str, domain: &str) -> Verdict {
    identity_check(&Expr::parse(lhs).unwrap(), &Expr::parse(rhs).unwrap(), &DomainSet::parse(domain).unwrap(), &CheckConfig::default())
}

#[test]
fn double_angle_identities() {
    assert!(check("sinh(2*x)", "2*sinh(x)*cosh(x)", "R").holds());
    assert!(check("cosh(2*x)", "cosh(x)^2 + sinh(x)^2", "R").holds());
    assert!(check("sin(x)", "2*tan(x/2)/(1 + tan(x/2)^2)", "R \\ (2*pi*Z + pi)").holds());
    assert!(check("coth(2*x)", "(coth(x)^2 + 1)/(2*coth(x))", "(-inf,0) | (0,inf)").holds());
    assert!(matches!(check("sin(x)", "x", "R"), Verdict::Fails { .. }));
    assert!(matches!(check("cosh(2*x)", "cosh(x)^2 - sinh(x)^2", "R"), Verdict::Fails { .. }));
}

#[test]
fn checks_are_deterministic() {
    let a = check("sin(x)", "x + x^3/7", "R");
    assert_eq!(a, check("sin(x)", "x + x^3/7", "R"));
    let other = CheckConfig { seed: 17, ..CheckConfig::default() };
    let e = Expr::parse("exp(x)*exp(-x)").unwrap();
    assert!(identity_check(&e, &Expr::int(1), &DomainSet::parse("R").unwrap(), &other).holds());
    let low = CheckConfig { precision: 8, ..CheckConfig::default() };
    assert!(matches!(identity_check(&e, &Expr::int(1), &DomainSet::parse("R").unwrap(), &low), Verdict::Inconclusive { .. }));
}

#[test]
fn periodicity_and_derivatives() {
    let cfg = CheckConfig::default();
    let b = |n: &str| FunctionSpec::builtin(n).unwrap();
    assert!(periodicity_check(&b("tan"), &Constant::pi(), &Constant::parse("pi/2").unwrap(), false, &cfg).holds());
    assert!(periodicity_check(&b("sin"), &Constant::pi(), &Constant::parse("pi/2").unwrap(), true, &cfg).holds());
    assert!(!periodicity_check(&b("sin"), &Constant::pi(), &Constant::parse("pi/2").unwrap(), false, &cfg).holds());
    assert!(!periodicity_check(&b("exp"), &Constant::pi(), &Constant::int(0), false, &cfg).holds());
    for f in ["tan", "cot", "exp", "sinh", "tanh", "coth", "ln"] {
        assert!(derivative_nonvanishing_check(&b(f), &cfg).holds(), "{f}");
    }
    for f in ["sin", "cos", "cosh"] {
        assert!(!derivative_nonvanishing_check(&b(f), &cfg).holds(), "{f}");
    }
    let pos = DomainSet::positive_half_line();
    assert!(positivity_check(&Expr::parse("cosh(x)^2 - 1").unwrap(), &pos, &cfg).holds());
    assert!(!positivity_check(&Expr::parse("sin(x)").unwrap(), &DomainSet::parse("R").unwrap(), &cfg).holds());
}

fn is_zero(e: &Expr) -> bool {
    e.as_const().is_some_and(|c| c == &frac(0, 1))
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        3 => Just(Expr::x()),
        2 => (-9i64..=9, 1i64..=4).prop_map(|(n, d)| Expr::num(frac(n, d))),
        1 => Just(Expr::pi()),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| if is_zero(&b) { a } else { Expr::div(a, b) }),
            (inner.clone(), -3i64..=4).prop_map(|(a, n)| Expr::powi(a.clone(), if is_zero(&a) { n.abs() } else { n })),
            (inner.clone(), prop::sample::select(vec![Func::Sin, Func::Cos, Func::Exp, Func::Sinh, Func::Cosh, Func::Tanh]))
                .prop_map(|(a, f)| Expr::apply(f, a)),
        ]
    })
}

/// Plain `f64` evaluation, independent of the library evaluator.
fn eval_f64(e: &Expr, x: f64) -> f64 {
    match e {
        Expr::Var(_) => x,
        Expr::Const(r) => r.to_f64().unwrap(),
        Expr::Named(NamedConst::Pi) => std::f64::consts::PI,
        Expr::Named(NamedConst::E) => std::f64::consts::E,
        Expr::Add(a, b) => eval_f64(a, x) + eval_f64(b, x),
        Expr::Mul(a, b) => eval_f64(a, x) * eval_f64(b, x),
        Expr::Div(a, b) => eval_f64(a, x) / eval_f64(b, x),
        Expr::Pow(a, r) => eval_f64(a, x).powf(r.to_f64().unwrap()),
        Expr::Apply(f, a) => {
            let v = eval_f64(a, x);
            match f {
                Func::Sin => v.sin(),
                Func::Cos => v.cos(),
                Func::Tan => v.tan(),
                Func::Cot => 1.0 / v.tan(),
                Func::Sinh => v.sinh(),
                Func::Cosh => v.cosh(),
                Func::Tanh => v.tanh(),
                Func::Coth => 1.0 / v.tanh(),
                Func::Exp => v.exp(),
                Func::Ln => v.ln(),
                Func::Sqrt => v.sqrt(),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 400, ..ProptestConfig::default() })]

    #[test]
    fn print_parse_print(e in expr()) {
        let shown = e.to_string();
        let back = Expr::parse(&shown).unwrap();
        prop_assert_eq!(&back, &e, "{}", shown);
        prop_assert_eq!(back.to_string(), shown);
    }

    #[test]
    fn derivative_matches_finite_difference(e in expr(), x in -2.0f64..2.0) {
        let d = differentiate(&e, "x");
        let h = 1e-5;
        let (fp, fm, fx) = (eval_f64(&e, x + h), eval_f64(&e, x - h), eval_f64(&d, x));
        let fd = (fp - fm) / (2.0 * h);
        prop_assume!(fp.is_finite() && fm.is_finite() && fx.is_finite() && fd.is_finite());
        prop_assume!(fp.abs() < 1e6 && fm.abs() < 1e6 && fx.abs() < 1e6);
        // Skip points next to poles or kinks where the difference quotient is unreliable.
        let d2 = (eval_f64(&d, x + h) - eval_f64(&d, x - h)).abs();
        prop_assume!(d2 < 1e-2 * (1.0 + fx.abs()));
        prop_assert!((fd - fx).abs() <= 1e-4 * (1.0 + fx.abs()), "{} at {}: fd {} vs {} ({})", e, x, fd, fx, d);
    }

    #[test]
    fn constant_round_trip(n in -20i64..=20, d in 1i64..=9, with_pi in any::<bool>()) {
        let c = if with_pi { Constant::new(frac(n, d), 1, 0) } else { Constant::rational(frac(n, d)) };
        let back = Constant::parse(&c.to_string()).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.as_rational().is_some(), !with_pi || n == 0);
    }
}
