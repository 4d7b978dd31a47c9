use std::fmt;

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{merge_generators, Generators, MultiPoly};
use super::FieldError;
use crate::rational::Rational;

/// Reduced quotient of polynomials with a monic denominator.
#[derive(Clone, Debug, Eq)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

/// The four field operations accepted by [`RatFunc::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl RatFunc {
    /// Canonical representative of `num / den`.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::ZeroDenominator);
        }
        let (num, den) = if num.gens() == den.gens() {
            (num, den)
        } else {
            let g = merge_generators(num.gens(), den.gens());
            (num.embed(&g), den.embed(&g))
        };
        num.check_size()?;
        den.check_size()?;
        if num.is_zero() {
            return Ok(Self::zero(num.gens()));
        }
        let g = gcd(&num, &den);
        let (n, d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        Ok(Self::normalized(n, d))
    }

    /// Scales an already coprime pair so that the denominator is monic.
    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            return RatFunc { num, den };
        }
        let k = Rational::one() / lc;
        RatFunc { num: num.scale(&k), den: den.scale(&k) }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.gens());
        RatFunc { num: p, den }
    }

    pub fn zero(gens: &Generators) -> Self {
        RatFunc { num: MultiPoly::zero(gens), den: MultiPoly::one(gens) }
    }

    pub fn one(gens: &Generators) -> Self {
        Self::constant(gens, Rational::one())
    }

    pub fn constant(gens: &Generators, c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(gens, c))
    }

    pub fn generator(gens: &Generators, name: &str) -> Option<Self> {
        MultiPoly::generator(gens, name).map(Self::from_poly)
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn gens(&self) -> &Generators {
        self.num.gens()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// Generators that actually occur in numerator or denominator.
    pub fn used_generators(&self) -> Vec<String> {
        let mut v = self.num.used_generators();
        v.extend(self.den.used_generators());
        v.sort();
        v.dedup();
        v
    }

    pub fn embed(&self, target: &Generators) -> Self {
        RatFunc { num: self.num.embed(target), den: self.den.embed(target) }
    }

    fn align(&self, other: &RatFunc) -> Option<(RatFunc, RatFunc)> {
        if self.gens() == other.gens() {
            None
        } else {
            let g = merge_generators(self.gens(), other.gens());
            Some((self.embed(&g), other.embed(&g)))
        }
    }

    pub fn arith(op: FieldOp, a: &RatFunc, b: &RatFunc) -> Result<RatFunc, FieldError> {
        match op {
            FieldOp::Add => a.add(b),
            FieldOp::Sub => a.sub(b),
            FieldOp::Mul => a.mul(b),
            FieldOp::Div => a.div(b),
        }
    }

    pub fn add(&self, other: &RatFunc) -> Result<RatFunc, FieldError> {
        if let Some((a, b)) = self.align(other) {
            return a.add(&b);
        }
        if self.den.is_one() && other.den.is_one() {
            let n = self.num.add(&other.num);
            n.check_size()?;
            return Ok(Self::from_poly(n));
        }
        // Henrici: with g = gcd(b, d), only gcd(n, g) can cancel.
        let g = gcd(&self.den, &other.den);
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = other.den.div_exact(&g).expect("gcd divides");
        let n = self.num.mul(&d1).add(&other.num.mul(&b1));
        n.check_size()?;
        if n.is_zero() {
            return Ok(Self::zero(self.gens()));
        }
        let h = gcd(&n, &g);
        let num = n.div_exact(&h).expect("gcd divides");
        let den = b1.mul(&other.den.div_exact(&h).expect("gcd divides"));
        den.check_size()?;
        Ok(Self::normalized(num, den))
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFunc) -> Result<RatFunc, FieldError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> Result<RatFunc, FieldError> {
        if let Some((a, b)) = self.align(other) {
            return a.mul(&b);
        }
        Self::mul_coprime_pairs(&self.num, &self.den, &other.num, &other.den)
    }

    /// `(a/b)·(c/d)` for coprime pairs `(a, b)` and `(c, d)`.
    fn mul_coprime_pairs(a: &MultiPoly, b: &MultiPoly, c: &MultiPoly, d: &MultiPoly) -> Result<RatFunc, FieldError> {
        if a.is_zero() || c.is_zero() {
            return Ok(Self::zero(a.gens()));
        }
        let g1 = gcd(a, d);
        let g2 = gcd(c, b);
        let (a, d) = if g1.is_one() { (a.clone(), d.clone()) } else { (a.div_exact(&g1).unwrap(), d.div_exact(&g1).unwrap()) };
        let (c, b) = if g2.is_one() { (c.clone(), b.clone()) } else { (c.div_exact(&g2).unwrap(), b.div_exact(&g2).unwrap()) };
        let num = a.mul(&c);
        let den = b.mul(&d);
        num.check_size()?;
        den.check_size()?;
        Ok(Self::normalized(num, den))
    }

    pub fn recip(&self) -> Result<RatFunc, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, FieldError> {
        if other.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if let Some((a, b)) = self.align(other) {
            return a.div(&b);
        }
        Self::mul_coprime_pairs(&self.num, &self.den, &other.den, &other.num)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, n: i32) -> Result<RatFunc, FieldError> {
        if n == 0 {
            return Ok(Self::one(self.gens()));
        }
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let k = n.unsigned_abs();
        let num = base.num.pow(k);
        let den = base.den.pow(k);
        num.check_size()?;
        den.check_size()?;
        Ok(Self::normalized(num, den))
    }

    pub fn scale(&self, k: &Rational) -> RatFunc {
        if k.is_zero() {
            return Self::zero(self.gens());
        }
        RatFunc { num: self.num.scale(k), den: self.den.clone() }
    }

    /// Partial derivative with respect to the generator `name` (zero when the
    /// generator does not occur).
    pub fn partial(&self, name: &str) -> RatFunc {
        let Some(var) = self.gens().iter().position(|g| g == name) else {
            return Self::zero(self.gens());
        };
        let n1 = self.num.partial(var);
        let d1 = self.den.partial(var);
        if d1.is_zero() {
            return RatFunc { num: n1, den: self.den.clone() };
        }
        let top = n1.mul(&self.den).sub(&self.num.mul(&d1));
        Self::new(top, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    /// Replaces the generator `name` by `value`.
    pub fn substitute(&self, name: &str, value: &RatFunc) -> Result<RatFunc, FieldError> {
        let g = merge_generators(self.gens(), value.gens());
        let this = self.embed(&g);
        let value = value.embed(&g);
        let Some(var) = g.iter().position(|x| x == name) else {
            return Ok(this);
        };
        let num = horner(&this.num, var, &value)?;
        let den = horner(&this.den, var, &value)?;
        num.div(&den)
    }
}

fn horner(p: &MultiPoly, var: usize, value: &RatFunc) -> Result<RatFunc, FieldError> {
    let coeffs = p.coeffs_in(var);
    let mut acc = RatFunc::zero(p.gens());
    for c in coeffs.into_iter().rev() {
        acc = acc.mul(value)?.add(&RatFunc::from_poly(c))?;
    }
    Ok(acc)
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        match self.align(other) {
            None => self.num == other.num && self.den == other.den,
            Some((a, b)) => a.num == b.num && a.den == b.den,
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.len() > 1 { format!("({})", self.num) } else { self.num.to_string() };
        let den = self.den.to_string();
        let den = if self.den.len() > 1 || den.contains('*') { format!("({den})") } else { den };
        write!(f, "{num}/{den}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_ratfunc;

    fn rf(s: &str) -> RatFunc {
        parse_ratfunc(s).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let r = rf("(2*t^2)/(4*t)");
        assert_eq!(r.num().to_string(), "1/2*t");
        assert_eq!(r, rf("t/2"));
        let r = rf("(t^2 - 1)/(t - 1)");
        assert_eq!(r, rf("t + 1"));
        assert!(r.is_polynomial());
        let r = rf("0/(t^3 + 5)");
        assert!(r.is_zero());
        assert!(r.den().is_one());
        let t = rf("t");
        assert!(matches!(RatFunc::new(t.num().clone(), MultiPoly::zero(t.gens())), Err(FieldError::ZeroDenominator)));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(rf("t").add(&rf("1/t")).unwrap(), rf("(t^2 + 1)/t"));
        assert_eq!(rf("t + 1").mul(&rf("t - 1")).unwrap(), rf("t^2 - 1"));
        assert_eq!(rf("1").div(&rf("t")).unwrap(), rf("1/t"));
        assert!(matches!(rf("t").div(&rf("0")), Err(FieldError::DivisionByZero)));
        assert_eq!(RatFunc::arith(FieldOp::Sub, &rf("1/(t-1)"), &rf("1/(t+1)")).unwrap(), rf("2/(t^2 - 1)"));
    }

    #[test]
    fn display_forms() {
        assert_eq!(rf("t/2").to_string(), "1/2*t");
        assert_eq!(rf("-1/t^2").to_string(), "-1/t^2");
        assert_eq!(rf("(t^2 + 1)/(2*t)").to_string(), "(1/2*t^2 + 1/2)/t");
        assert_eq!(rf("1/(a*b)").to_string(), "1/(a*b)");
    }

    #[test]
    fn substitution_and_partials() {
        let g = rf("1/(u^2 + 1)");
        let f = rf("t - 1/t");
        let comp = g.substitute("u", &f).unwrap();
        assert_eq!(comp, rf("t^2/(t^4 - t^2 + 1)"));
        assert_eq!(rf("1/t").partial("t"), rf("-1/t^2"));
    }
}
