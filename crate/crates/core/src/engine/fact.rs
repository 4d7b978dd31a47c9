use std::fmt;

use serde::{Deserialize, Serialize};

use crate::catalog::{Constant, DomainSet, FunctionSpec};
use crate::orbit::{IntervalSet, LatticeSet, OrbitError};
use crate::rational::{parse_rational, Rational};

/// Exponent of a [`Fact::PowerRule`]: either every rational (derived from
/// the Leibniz rule) or one specific exponent (given as an axiom).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PowerExponent {
    All,
    Exponent(Rational),
}

impl fmt::Display for PowerExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PowerExponent::All => f.write_str("all"),
            PowerExponent::Exponent(r) => write!(f, "{r}"),
        }
    }
}

impl From<PowerExponent> for String {
    fn from(p: PowerExponent) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for PowerExponent {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        if s == "all" {
            return Ok(PowerExponent::All);
        }
        parse_rational(&s).map(PowerExponent::Exponent).ok_or_else(|| format!("invalid exponent `{s}`"))
    }
}

/// The set `U` of a shift-invariance fact `d(u) = d(u + 1)`, `u ∈ U`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ShiftSet {
    Intervals(IntervalSet),
    /// `ℝ ∖ (ℤ + R)`
    LatticeComplement(LatticeSet),
}

impl ShiftSet {
    /// Parses an interval set such as `[1,inf)` or `R \ (Z+{1/2})`.
    pub fn parse(text: &str) -> Result<ShiftSet, OrbitError> {
        let t = text.trim();
        let rest = t.strip_prefix('R').or_else(|| t.strip_prefix('ℝ')).map(str::trim_start);
        if let Some(r) = rest.and_then(|r| r.strip_prefix('\\').or_else(|| r.strip_prefix('∖'))) {
            let r = r.trim();
            let inner = r.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(r);
            return LatticeSet::parse(inner).map(ShiftSet::LatticeComplement);
        }
        IntervalSet::parse(t).map(ShiftSet::Intervals)
    }
}

impl fmt::Display for ShiftSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftSet::Intervals(s) => write!(f, "{s}"),
            ShiftSet::LatticeComplement(l) => write!(f, "R \\ ({l})"),
        }
    }
}

impl From<ShiftSet> for String {
    fn from(s: ShiftSet) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for ShiftSet {
    type Error = OrbitError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        ShiftSet::parse(&s)
    }
}

/// A statement about the unknown map `d: ℝ → ℝ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "fact")]
pub enum Fact {
    /// `d(f(x)) = f′(x)·d(x)` on the domain of `f`.
    Derivates { function: FunctionSpec },
    /// `d` derivates `S₂`, i.e. is additive.
    Additive,
    DerivatesP2,
    KnownZero { c: Constant },
    KnownHomogeneous { c: Constant },
    Odd,
    /// `d(x^r) = r·x^(r−1)·d(x)` for `x > 0`.
    PowerRule { exponent: PowerExponent },
    /// `d(x + p) = d(x)` on `domain`.
    Periodic { period: Constant, domain: DomainSet },
    ShiftInvariantOn { set: ShiftSet },
    StandardDerivation,
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::Derivates { function } => write!(f, "Derivates({function})"),
            Fact::Additive => f.write_str("Additive"),
            Fact::DerivatesP2 => f.write_str("DerivatesP2"),
            Fact::KnownZero { c } => write!(f, "KnownZero({c})"),
            Fact::KnownHomogeneous { c } => write!(f, "KnownHomogeneous({c})"),
            Fact::Odd => f.write_str("Odd"),
            Fact::PowerRule { exponent } => write!(f, "PowerRule({exponent})"),
            Fact::Periodic { period, domain } => write!(f, "Periodic({period}, {domain})"),
            Fact::ShiftInvariantOn { set } => write!(f, "ShiftInvariantOn({set})"),
            Fact::StandardDerivation => f.write_str("StandardDerivation"),
        }
    }
}

impl Fact {
    pub fn derivates(function: FunctionSpec) -> Fact {
        Fact::Derivates { function }
    }

    pub fn zero(c: Constant) -> Fact {
        Fact::KnownZero { c }
    }

    pub fn homogeneous(c: Constant) -> Fact {
        Fact::KnownHomogeneous { c }
    }

    pub fn shift_invariant(set: ShiftSet) -> Fact {
        Fact::ShiftInvariantOn { set }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display() {
        let sin = FunctionSpec::builtin("sin").unwrap();
        assert_eq!(Fact::derivates(sin).to_string(), "Derivates(sin(x) on R)");
        assert_eq!(Fact::zero(Constant::pi()).to_string(), "KnownZero(pi)");
        assert_eq!(Fact::PowerRule { exponent: PowerExponent::All }.to_string(), "PowerRule(all)");
        let s = ShiftSet::parse("R \\ (Z+{1/2})").unwrap();
        assert_eq!(Fact::shift_invariant(s.clone()).to_string(), "ShiftInvariantOn(R \\ (Z+{1/2}))");
        assert_eq!(ShiftSet::parse(&s.to_string()).unwrap(), s);
        let i = ShiftSet::parse("[1,inf)").unwrap();
        assert_eq!(ShiftSet::parse(&i.to_string()).unwrap(), i);
    }

    #[test]
    fn json_round_trip() {
        let facts = vec![
            Fact::derivates(FunctionSpec::builtin("tan").unwrap()),
            Fact::Periodic { period: Constant::pi(), domain: DomainSet::parse("R \\ (pi*Z)").unwrap() },
            Fact::PowerRule { exponent: PowerExponent::Exponent(crate::rational::frac(1, 3)) },
            Fact::shift_invariant(ShiftSet::parse("[1,inf)").unwrap()),
            Fact::StandardDerivation,
        ];
        for f in facts {
            let j = serde_json::to_string(&f).unwrap();
            assert_eq!(serde_json::from_str::<Fact>(&j).unwrap(), f, "{j}");
        }
    }
}
