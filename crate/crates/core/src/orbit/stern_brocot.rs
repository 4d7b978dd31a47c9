//! Simplest rational inside an interval, by descending the Stern–Brocot tree
//! one continued-fraction term at a time.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::interval::{ExtEndpoint, IntervalSet, Piece};
use crate::rational::{ceil, floor, is_integer, simplicity_key, Rational};

type Bound = Option<(Rational, bool)>;

fn bound(e: &ExtEndpoint, closed: bool) -> Bound {
    e.finite().map(|x| (x.clone(), closed))
}

/// Rational with the smallest denominator in `p`; ties go to the smaller
/// magnitude, then to the positive value.
pub fn simplest_in_piece(p: &Piece) -> Rational {
    simplest(bound(&p.lo, p.lo_closed), bound(&p.hi, p.hi_closed))
}

/// Simplest rational over all pieces of `set`, `None` when it is empty.
pub fn simplest_in_set(set: &IntervalSet) -> Option<Rational> {
    set.pieces().iter().map(simplest_in_piece).min_by_key(simplicity_key)
}

fn lowest_integer(lo: &Bound) -> Option<BigInt> {
    lo.as_ref().map(|(x, closed)| {
        if is_integer(x) {
            x.to_integer() + if *closed { 0 } else { 1 }
        } else {
            ceil(x)
        }
    })
}

fn highest_integer(hi: &Bound) -> Option<BigInt> {
    hi.as_ref().map(|(x, closed)| {
        if is_integer(x) {
            x.to_integer() - if *closed { 0 } else { 1 }
        } else {
            floor(x)
        }
    })
}

fn simplest(lo: Bound, hi: Bound) -> Rational {
    let n0 = lowest_integer(&lo);
    let n1 = highest_integer(&hi);
    let has_integer = match (&n0, &n1) {
        (Some(a), Some(b)) => a <= b,
        _ => true,
    };
    if has_integer {
        let zero = BigInt::zero();
        let n = match (n0, n1) {
            (Some(a), _) if a > zero => a,
            (_, Some(b)) if b < zero => b,
            _ => zero,
        };
        return Rational::from_integer(n);
    }
    let (lo, lc) = lo.expect("bounded without integers");
    let (hi, hc) = hi.expect("bounded without integers");
    if hi <= Rational::zero() {
        return -simplest(Some((-hi, hc)), Some((-lo, lc)));
    }
    // Here n ≤ lo < hi ≤ n + 1 with n = ⌊lo⌋ ≥ 0; recurse on 1/(x − n).
    let n = Rational::from_integer(floor(&lo));
    let top = &hi - &n;
    let bottom = &lo - &n;
    let new_lo = Some((Rational::one() / top, hc));
    let new_hi = if bottom.is_zero() { None } else { Some((Rational::one() / bottom, lc)) };
    debug_assert!(!n.is_negative());
    n + Rational::one() / simplest(new_lo, new_hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn simp(t: &str) -> Rational {
        simplest_in_set(&IntervalSet::parse(t).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(simp("(0,1)"), frac(1, 2));
        assert_eq!(simp("(1/3,1/2)"), frac(2, 5));
        assert_eq!(simp("[1/3,1/2)"), frac(1, 3));
        assert_eq!(simp("(-2/3,-1/3)"), frac(-1, 2));
        assert_eq!(simp("(-inf,-5]"), int(-5));
        assert_eq!(simp("[-3,7)"), int(0));
        assert_eq!(simp("(3,4)"), frac(7, 2));
        assert_eq!(simp("(0,1/1000)"), frac(1, 1001));
        assert_eq!(simp("(355/113,22/7)"), frac(377, 120));
        assert_eq!(simp("(-3,-3/2] | [1/2,2]"), int(1));
        assert_eq!(simp("{-5/7}"), frac(-5, 7));
    }

    /// Brute force over small denominators.
    #[test]
    fn matches_enumeration() {
        let sets = ["(2/7,3/10)", "[5/8,7/11]", "(-13/17,-3/4)", "(1/5,1/4]", "(100/3,67/2)"];
        for text in sets {
            let set = IntervalSet::parse(text).unwrap();
            let mut best = None;
            'outer: for den in 1..200i64 {
                for num in 0..20_000i64 {
                    for sign in [1, -1] {
                        let r = frac(sign * num, den);
                        if set.contains(&r) {
                            best = Some(r);
                            break 'outer;
                        }
                    }
                }
            }
            assert_eq!(Some(simp(text)), best, "{text}");
        }
    }
}
