use proptest::prelude::*;

use derivcert::orbit::{
    covering_decide, h_orbit, is_excluded, orbit_group, standard_intervals, CoveringVerdict, ExtEndpoint, IntervalSet,
    MoebiusMap,
};
use derivcert::rational::{frac, int, Rational};

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=12).prop_map(|(n, d)| frac(n, d))
}

fn endpoint() -> impl Strategy<Value = ExtEndpoint> {
    prop_oneof![
        1 => Just(ExtEndpoint::NegInf),
        1 => Just(ExtEndpoint::PosInf),
        8 => (-12i64..=12, 1i64..=4).prop_map(|(n, d)| ExtEndpoint::Finite(frac(n, d))),
    ]
}

fn interval_set() -> impl Strategy<Value = IntervalSet> {
    prop::collection::vec((endpoint(), any::<bool>(), endpoint(), any::<bool>()), 0..4).prop_map(|ps| {
        ps.into_iter()
            .fold(IntervalSet::empty(), |acc, (a, ac, b, bc)| {
                let (lo, hi, lc, hc) = if a <= b { (a, b, ac, bc) } else { (b, a, bc, ac) };
                acc.union(&IntervalSet::interval(lo, lc, hi, hc))
            })
    })
}

/// Orbit computed directly from the six formulas.
fn orbit_by_hand(t: &Rational) -> Vec<Rational> {
    let one = int(1);
    let mut v = vec![
        t.clone(),
        one.clone() / t,
        -one.clone() - one.clone() / t,
        -t / (&one + t),
        -one.clone() / (&one + t),
        -one - t,
    ];
    v.sort();
    v.dedup();
    v
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn orbit_size_and_formula(t in rational()) {
        prop_assume!(!is_excluded(&t));
        let o = h_orbit(&t).unwrap();
        let special = [int(1), int(-2), frac(-1, 2)];
        prop_assert_eq!(o.len(), if special.contains(&t) { 3 } else { 6 });
        prop_assert_eq!(o.sorted(), orbit_by_hand(&t));
    }

    #[test]
    fn orbit_invariance(t in rational()) {
        prop_assume!(!is_excluded(&t));
        let o = h_orbit(&t).unwrap();
        for m in orbit_group() {
            if let Some(s) = m.apply_point(&t) {
                prop_assert_eq!(&h_orbit(&s).unwrap(), &o);
            }
        }
    }

    #[test]
    fn de_morgan(a in interval_set(), b in interval_set(), xs in prop::collection::vec(rational(), 8)) {
        prop_assert_eq!(a.union(&b).complement(), a.complement().intersection(&b.complement()));
        prop_assert_eq!(a.intersection(&b).complement(), a.complement().union(&b.complement()));
        prop_assert_eq!(a.complement().complement(), a.clone());
        for x in xs {
            prop_assert_eq!(a.union(&b).contains(&x), a.contains(&x) || b.contains(&x));
            prop_assert_eq!(a.intersection(&b).contains(&x), a.contains(&x) && b.contains(&x));
            prop_assert_eq!(a.difference(&b).contains(&x), a.contains(&x) && !b.contains(&x));
        }
    }

    #[test]
    fn display_round_trip(a in interval_set()) {
        let shown = a.to_string();
        let back = IntervalSet::parse(&shown).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.to_string(), shown);
    }

    #[test]
    fn moebius_duality(a in interval_set(), coeffs in prop::collection::vec(-4i64..=4, 4), xs in prop::collection::vec(rational(), 8)) {
        let Ok(m) = MoebiusMap::new(int(coeffs[0]), int(coeffs[1]), int(coeffs[2]), int(coeffs[3])) else {
            return Ok(());
        };
        let image = m.apply(&a);
        let pre = m.preimage(&a);
        for x in xs {
            if let Some(y) = m.apply_point(&x) {
                prop_assert_eq!(image.contains(&y), a.contains(&x), "image of {} at {}", a, x);
                prop_assert_eq!(pre.contains(&x), a.contains(&y), "preimage of {} at {}", a, x);
            }
        }
    }

    #[test]
    fn covering_sound(u in interval_set(), ts in prop::collection::vec(rational(), 10)) {
        match covering_decide(&u) {
            CoveringVerdict::Covered => {
                for t in ts.iter().filter(|t| !is_excluded(t)) {
                    prop_assert!(h_orbit(t).unwrap().meets(&u), "{} misses covered {}", t, u);
                }
            }
            CoveringVerdict::Counterexample { witness, orbit } => {
                prop_assert!(!is_excluded(&witness));
                prop_assert_eq!(&orbit, &h_orbit(&witness).unwrap());
                prop_assert!(orbit.elements().iter().all(|x| !u.contains(x)));
            }
        }
    }
}

#[test]
fn standard_intervals_cover() {
    for i in standard_intervals() {
        assert!(covering_decide(&i).is_covered(), "{i}");
    }
    let half = IntervalSet::parse("(0,1/2)").unwrap();
    let CoveringVerdict::Counterexample { witness, orbit } = covering_decide(&half) else { panic!() };
    assert!(!orbit.meets(&half), "{witness}");
}
