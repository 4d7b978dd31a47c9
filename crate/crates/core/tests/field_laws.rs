use proptest::prelude::*;

use derivcert::field::{adjoin_algebraic, gcd, parse_ratfunc, FieldError, FormalDerivation, MultiPoly, RatFunc};
use derivcert::rational::{frac, Rational};

const GENS: [&str; 3] = ["x", "y", "z"];

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0u32..3, 3), -6i64..=6, 1i64..=3), 1..4)
        .prop_map(|terms| MultiPoly::from_terms(&GENS, terms.into_iter().map(|(e, n, d)| (e, frac(n, d)))).unwrap())
}

fn nonzero_poly() -> impl Strategy<Value = MultiPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

fn nonzero_ratfunc() -> impl Strategy<Value = RatFunc> {
    (nonzero_poly(), nonzero_poly()).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

fn derivation() -> impl Strategy<Value = FormalDerivation> {
    prop::collection::vec(poly(), 3).prop_map(|imgs| {
        FormalDerivation::new(GENS.iter().zip(imgs).map(|(g, p)| (g.to_string(), RatFunc::from_poly(p)))).unwrap()
    })
}

/// `Σ ∂f/∂g · d(g)` computed with the field's own `partial`, as a second route.
fn chain_rule(d: &FormalDerivation, f: &RatFunc) -> RatFunc {
    let mut acc = RatFunc::zero(f.gens());
    for g in GENS {
        let term = f.partial(g).mul(d.image(g).unwrap()).unwrap();
        acc = acc.add(&term).unwrap();
    }
    acc
}

fn same(a: &RatFunc, b: &RatFunc) -> bool {
    a.sub(b).unwrap().is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 250, ..ProptestConfig::default() })]

    #[test]
    fn additivity(d in derivation(), f in ratfunc(), g in ratfunc()) {
        let lhs = d.apply(&f.add(&g).unwrap()).unwrap();
        let rhs = d.apply(&f).unwrap().add(&d.apply(&g).unwrap()).unwrap();
        prop_assert!(same(&lhs, &rhs));
    }

    #[test]
    fn leibniz(d in derivation(), f in ratfunc(), g in ratfunc()) {
        let lhs = d.apply(&f.mul(&g).unwrap()).unwrap();
        let rhs = d.apply(&f).unwrap().mul(&g).unwrap().add(&f.mul(&d.apply(&g).unwrap()).unwrap()).unwrap();
        prop_assert!(same(&lhs, &rhs));
    }

    #[test]
    fn quotient(d in derivation(), f in ratfunc(), g in nonzero_ratfunc()) {
        let lhs = d.apply(&f.div(&g).unwrap()).unwrap();
        let top = d.apply(&f).unwrap().mul(&g).unwrap().sub(&f.mul(&d.apply(&g).unwrap()).unwrap()).unwrap();
        let rhs = top.div(&g.pow(2).unwrap()).unwrap();
        prop_assert!(same(&lhs, &rhs));
    }

    #[test]
    fn integer_powers(d in derivation(), f in nonzero_ratfunc(), n in -3i32..=4) {
        let lhs = d.apply(&f.pow(n).unwrap()).unwrap();
        let rhs = f.pow(n - 1).unwrap().mul(&d.apply(&f).unwrap()).unwrap().scale(&Rational::from_integer(n.into()));
        prop_assert!(same(&lhs, &rhs));
    }

    #[test]
    fn agrees_with_partials(d in derivation(), f in ratfunc()) {
        prop_assert!(same(&d.apply(&f).unwrap(), &chain_rule(&d, &f)));
    }

    #[test]
    fn constants_vanish(d in derivation(), n in -50i64..50, m in 1i64..50) {
        let c = RatFunc::constant(&derivcert::field::generators(&GENS), frac(n, m));
        prop_assert!(d.apply(&c).unwrap().is_zero());
    }

    #[test]
    fn field_axioms(f in ratfunc(), g in ratfunc(), h in nonzero_ratfunc()) {
        prop_assert!(same(&f.mul(&g.add(&h).unwrap()).unwrap(), &f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap()));
        prop_assert!(same(&f.add(&g).unwrap(), &g.add(&f).unwrap()));
        prop_assert!(same(&h.mul(&h.recip().unwrap()).unwrap(), &RatFunc::one(h.gens())));
        prop_assert!(same(&f.sub(&f).unwrap(), &RatFunc::zero(f.gens())));
    }

    #[test]
    fn gcd_scales(a in nonzero_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let g = gcd(&a.mul(&c), &b.mul(&c));
        prop_assert_eq!(&g, &c.mul(&gcd(&a, &b)).monic());
        prop_assert!(a.mul(&c).div_exact(&g).is_some());
        let (x, y) = (a.mul(&c).div_exact(&g).unwrap(), b.mul(&c).div_exact(&g).unwrap());
        prop_assert!(gcd(&x, &y).is_one());
    }

    #[test]
    fn display_round_trip(f in ratfunc()) {
        let back = parse_ratfunc(&f.to_string()).unwrap();
        prop_assert!(same(&back, &f));
        prop_assert_eq!(back.to_string(), f.to_string());
    }
}

#[test]
fn algebraic_constants_are_killed() {
    let d = FormalDerivation::new([("x".to_string(), parse_ratfunc("1").unwrap())]).unwrap();
    for p in ["a^2 - 2", "a^3 - a - 1", "a - 5"] {
        let m = parse_ratfunc(p).unwrap();
        let e = adjoin_algebraic(m.num(), "alpha", &d).unwrap();
        assert!(e.image("alpha").unwrap().is_zero(), "{p}");
        assert_eq!(e.provenance().len(), 1);
    }
    let reducible = parse_ratfunc("a^2 - 1").unwrap();
    assert!(matches!(adjoin_algebraic(reducible.num(), "alpha", &d), Err(FieldError::ReducibleMinPoly { .. })));
    let twice = adjoin_algebraic(parse_ratfunc("a^2 - 2").unwrap().num(), "x", &d);
    assert!(matches!(twice, Err(FieldError::DuplicateGenerator(_))));
}

#[test]
fn quotient_rule_by_hand() {
    let d = FormalDerivation::new([("x".to_string(), parse_ratfunc("1").unwrap()), ("y".to_string(), parse_ratfunc("x").unwrap())]).unwrap();
    let r = d.apply(&parse_ratfunc("x/y").unwrap()).unwrap();
    assert!(same(&r, &parse_ratfunc("(y - x^2)/y^2").unwrap()));
    assert!(d.apply(&parse_ratfunc("w").unwrap()).is_err());
}
