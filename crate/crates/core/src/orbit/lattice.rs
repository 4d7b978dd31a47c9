use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::OrbitError;
use crate::rational::{ceil, floor, fract, parse_rational, Rational};

/// `ℤ + R` for a finite set of offsets `R ⊂ [0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct LatticeSet {
    offsets: Vec<Rational>,
}

impl LatticeSet {
    pub fn new(offsets: impl IntoIterator<Item = Rational>) -> Result<Self, OrbitError> {
        let mut v: Vec<Rational> = offsets.into_iter().collect();
        if let Some(bad) = v.iter().find(|r| r.is_negative() || **r >= Rational::one()) {
            return Err(OrbitError::InvalidOffset(bad.clone()));
        }
        if v.is_empty() {
            return Err(OrbitError::EmptyLattice);
        }
        v.sort();
        v.dedup();
        Ok(LatticeSet { offsets: v })
    }

    pub fn offsets(&self) -> &[Rational] {
        &self.offsets
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.offsets.contains(&fract(x))
    }

    /// Parses `"Z+{1/2}"` or `"Z + {0, 1/3}"`.
    pub fn parse(text: &str) -> Result<Self, OrbitError> {
        let err = |column: usize, expected: &str, found: &str| OrbitError::Parse {
            column,
            expected: expected.to_string(),
            found: found.to_string(),
        };
        let t = text.trim_start();
        let base = text.len() - t.len();
        let rest = t.strip_prefix('Z').or_else(|| t.strip_prefix('ℤ')).ok_or_else(|| err(base + 1, "`Z`", t))?;
        let rest = rest.trim_start().strip_prefix('+').ok_or_else(|| err(base + 2, "`+`", rest.trim()))?;
        let rest = rest.trim();
        let inner = rest
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| err(base + 3, "`{offsets}`", rest))?;
        let mut offsets = Vec::new();
        for item in inner.split(',') {
            let r = parse_rational(item).ok_or_else(|| err(base + 4, "rational offset", item.trim()))?;
            offsets.push(r);
        }
        LatticeSet::new(offsets)
    }
}

impl fmt::Display for LatticeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.offsets.iter().map(|r| r.to_string()).collect();
        write!(f, "Z+{{{}}}", parts.join(", "))
    }
}

impl From<LatticeSet> for String {
    fn from(l: LatticeSet) -> String {
        l.to_string()
    }
}

impl TryFrom<String> for LatticeSet {
    type Error = OrbitError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        LatticeSet::parse(&s)
    }
}

/// Which sufficient condition makes `ℝ ∖ (ℤ + R)` meet every orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeVerdict {
    /// `1 ∉ R + R`
    CondI,
    /// `1 ∉ (ℤ + R)(ℤ + R)`
    CondII,
    /// `−1 ∉ (ℤ + R)(ℤ + R)`
    CondIII,
    /// `R = {0}`, settled by a direct orbit argument.
    DirectZero,
    None,
}

impl LatticeVerdict {
    pub fn is_sufficient(&self) -> bool {
        !matches!(self, LatticeVerdict::None)
    }
}

impl fmt::Display for LatticeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LatticeVerdict::CondI => "CondI",
            LatticeVerdict::CondII => "CondII",
            LatticeVerdict::CondIII => "CondIII",
            LatticeVerdict::DirectZero => "DirectZero",
            LatticeVerdict::None => "None",
        })
    }
}

/// Whether `v ∈ (ℤ + R)(ℤ + R)`, for offsets in `(0, 1)`.
///
/// A product `(n + r)(k + r') = v` has `|k + r'| ≥ δ`, where `δ` is the least
/// distance from an offset to ℤ, so `|n + r| ≤ |v|/δ` and only finitely many
/// `n` need checking.
pub fn in_product_set(offsets: &[Rational], v: &Rational) -> bool {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let delta = offsets
        .iter()
        .map(|r| if *r <= half { r.clone() } else { Rational::one() - r })
        .min()
        .expect("nonempty offsets");
    let bound = v.abs() / delta;
    offsets.iter().any(|r| {
        let lo = ceil(&(-&bound - r));
        let hi = floor(&(&bound - r));
        let mut n = lo;
        while n <= hi {
            let x = Rational::from_integer(n.clone()) + r;
            if !x.is_zero() && offsets.contains(&fract(&(v / &x))) {
                return true;
            }
            n += 1;
        }
        false
    })
}

pub fn lattice_condition_check(set: &LatticeSet) -> LatticeVerdict {
    let r = set.offsets();
    if r.iter().any(|x| x.is_zero()) {
        return if r.len() == 1 { LatticeVerdict::DirectZero } else { LatticeVerdict::None };
    }
    let one = Rational::one();
    let sums_to_one = r.iter().any(|a| r.iter().any(|b| a + b == one));
    if !sums_to_one {
        return LatticeVerdict::CondI;
    }
    if !in_product_set(r, &one) {
        return LatticeVerdict::CondII;
    }
    if !in_product_set(r, &-one) {
        return LatticeVerdict::CondIII;
    }
    LatticeVerdict::None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn check(text: &str) -> LatticeVerdict {
        lattice_condition_check(&LatticeSet::parse(text).unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(check("Z+{1/3}"), LatticeVerdict::CondI);
        assert_eq!(check("Z+{1/2}"), LatticeVerdict::CondII);
        assert_eq!(check("Z+{0}"), LatticeVerdict::DirectZero);
        // 1/3 + 2/3 = 1, but 1/(n + r) never has denominator 3.
        assert_eq!(check("Z+{1/3, 2/3}"), LatticeVerdict::CondII);
        assert_eq!(check("Z+{1/3, 1/2, 2/3}"), LatticeVerdict::None);
        assert_eq!(check("Z+{0, 1/2}"), LatticeVerdict::None);
    }

    #[test]
    fn product_set_membership() {
        let half = [frac(1, 2)];
        assert!(!in_product_set(&half, &Rational::one()));
        assert!(in_product_set(&half, &frac(1, 4)));
        assert!(in_product_set(&half, &frac(-3, 4)));
        let r = [frac(1, 3), frac(2, 3)];
        assert!(in_product_set(&r, &frac(1, 9)));
    }

    #[test]
    fn parse_and_errors() {
        let l = LatticeSet::parse(" Z + {1/2, 0}").unwrap();
        assert_eq!(l.to_string(), "Z+{0, 1/2}");
        assert_eq!(LatticeSet::parse(&l.to_string()).unwrap(), l);
        assert!(l.contains(&frac(-3, 2)) && l.contains(&frac(4, 1)) && !l.contains(&frac(1, 3)));
        assert!(matches!(LatticeSet::parse("Z+{1}"), Err(OrbitError::InvalidOffset(_))));
        assert!(matches!(LatticeSet::parse("Z+{-1/2}"), Err(OrbitError::InvalidOffset(_))));
        assert!(LatticeSet::parse("Z-{1/2}").is_err());
        assert!(LatticeSet::parse("Z+{x}").is_err());
    }
}
