use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::expr::{Expr, NamedConst};
use super::CatalogError;
use crate::rational::{int, is_integer, Rational};

/// A real constant `coeff · π^pi · e^e` with rational coefficient.
///
/// π and e are kept symbolic; two constants are equal exactly when their
/// coefficients and exponents agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Constant {
    coeff: Rational,
    pi: i32,
    e: i32,
}

impl Constant {
    pub fn new(coeff: Rational, pi: i32, e: i32) -> Constant {
        if coeff.is_zero() {
            Constant::rational(coeff)
        } else {
            Constant { coeff, pi, e }
        }
    }

    pub fn rational(r: Rational) -> Constant {
        Constant { coeff: r, pi: 0, e: 0 }
    }

    pub fn int(n: i64) -> Constant {
        Constant::rational(int(n))
    }

    pub fn pi() -> Constant {
        Constant::new(Rational::one(), 1, 0)
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn exponents(&self) -> (i32, i32) {
        (self.pi, self.e)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.coeff.is_positive()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        (self.pi == 0 && self.e == 0).then_some(&self.coeff)
    }

    pub fn same_monomial(&self, other: &Constant) -> bool {
        self.pi == other.pi && self.e == other.e
    }

    pub fn scale(&self, r: &Rational) -> Constant {
        Constant::new(&self.coeff * r, self.pi, self.e)
    }

    pub fn neg(&self) -> Constant {
        self.scale(&-Rational::one())
    }

    pub fn mul(&self, other: &Constant) -> Constant {
        Constant::new(&self.coeff * &other.coeff, self.pi + other.pi, self.e + other.e)
    }

    /// `None` when `other` is zero.
    pub fn div(&self, other: &Constant) -> Option<Constant> {
        if other.is_zero() {
            return None;
        }
        Some(Constant::new(&self.coeff / &other.coeff, self.pi - other.pi, self.e - other.e))
    }

    /// Sum, when it is again of the form `coeff · π^a · e^b`.
    pub fn add(&self, other: &Constant) -> Option<Constant> {
        if self.is_zero() {
            Some(other.clone())
        } else if other.is_zero() {
            Some(self.clone())
        } else if self.same_monomial(other) {
            Some(Constant::new(&self.coeff + &other.coeff, self.pi, self.e))
        } else {
            None
        }
    }

    pub fn sub(&self, other: &Constant) -> Option<Constant> {
        self.add(&other.neg())
    }

    pub fn powi(&self, n: i32) -> Option<Constant> {
        if self.is_zero() && n <= 0 {
            return None;
        }
        Some(Constant::new(num_traits::Pow::pow(self.coeff.clone(), n), self.pi * n, self.e * n))
    }

    /// Reads a closed expression built from rationals, π, e, products,
    /// quotients, integer powers, and sums of like terms.
    pub fn from_expr(e: &Expr) -> Option<Constant> {
        match e {
            Expr::Const(r) => Some(Constant::rational(r.clone())),
            Expr::Named(NamedConst::Pi) => Some(Constant::pi()),
            Expr::Named(NamedConst::E) => Some(Constant::new(Rational::one(), 0, 1)),
            Expr::Mul(a, b) => Some(Constant::from_expr(a)?.mul(&Constant::from_expr(b)?)),
            Expr::Div(a, b) => Constant::from_expr(a)?.div(&Constant::from_expr(b)?),
            Expr::Add(a, b) => Constant::from_expr(a)?.add(&Constant::from_expr(b)?),
            Expr::Pow(a, r) if is_integer(r) => Constant::from_expr(a)?.powi(r.to_integer().to_i32()?),
            _ => None,
        }
    }

    pub fn to_expr(&self) -> Expr {
        let mut m = Expr::num(self.coeff.clone());
        if self.pi != 0 {
            m = Expr::mul(m, Expr::powi(Expr::Named(NamedConst::Pi), self.pi as i64));
        }
        if self.e != 0 {
            m = Expr::mul(m, Expr::powi(Expr::Named(NamedConst::E), self.e as i64));
        }
        m
    }

    pub fn parse(text: &str) -> Result<Constant, CatalogError> {
        let e = Expr::parse(text)?;
        Constant::from_expr(&e).ok_or_else(|| CatalogError::NotConstant(text.trim().to_string()))
    }
}

fn factor(name: &str, k: i32) -> String {
    if k == 1 {
        name.to_string()
    } else {
        format!("{name}^{k}")
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pi < 0 || self.e < 0 {
            return write!(f, "{}", self.to_expr());
        }
        let mut parts = Vec::new();
        if self.pi > 0 {
            parts.push(factor("pi", self.pi));
        }
        if self.e > 0 {
            parts.push(factor("e", self.e));
        }
        if parts.is_empty() {
            return write!(f, "{}", self.coeff);
        }
        let monomial = parts.join("*");
        let (num, den) = (self.coeff.numer(), self.coeff.denom());
        let lead = if num.is_one() {
            monomial
        } else if *num == -num_bigint::BigInt::one() {
            format!("-{monomial}")
        } else {
            format!("{num}*{monomial}")
        };
        if den.is_one() {
            f.write_str(&lead)
        } else {
            write!(f, "{lead}/{den}")
        }
    }
}

impl std::str::FromStr for Constant {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Constant::parse(s)
    }
}

impl TryFrom<String> for Constant {
    type Error = CatalogError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        Constant::parse(&s)
    }
}

impl From<Constant> for String {
    fn from(c: Constant) -> String {
        c.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn display_and_parse() {
        let c = Constant::pi().scale(&frac(3, 2));
        assert_eq!(c.to_string(), "3*pi/2");
        assert_eq!(Constant::parse("3*pi/2").unwrap(), c);
        assert_eq!(Constant::parse("pi/2 + pi").unwrap(), c);
        assert_eq!(Constant::pi().scale(&frac(-1, 4)).to_string(), "-pi/4");
        assert_eq!(Constant::int(2).to_string(), "2");
        assert_eq!(Constant::parse("pi*e^2").unwrap().to_string(), "pi*e^2");
        let inv = Constant::pi().div(&Constant::int(1).mul(&Constant::pi().powi(2).unwrap())).unwrap();
        assert_eq!(Constant::parse(&inv.to_string()).unwrap(), inv);
        assert!(Constant::parse("pi + 1").is_err());
        assert!(Constant::parse("x").is_err());
    }

    #[test]
    fn arithmetic() {
        let p = Constant::pi();
        let half = p.scale(&frac(1, 2));
        let quarter = p.scale(&frac(1, 4));
        assert_eq!(half.div(&quarter).unwrap(), Constant::int(2));
        assert_eq!(p.sub(&p).unwrap(), Constant::int(0));
        assert!(p.add(&Constant::int(1)).is_none());
        assert_eq!(Constant::from_expr(&p.to_expr()).unwrap(), p);
    }
}
