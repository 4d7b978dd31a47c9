//! Arbitrary-precision evaluation of [`Expr`] trees.
//!
//! Every operation runs with 32 guard bits above the requested precision.
//! A quantity whose magnitude is below `2^-(prec - prec/4)` is treated as
//! zero where that matters (poles, divisions, logarithms).

use std::collections::BTreeMap;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_traits::{Signed, ToPrimitive};

use super::constant::Constant;
use super::expr::{Expr, Func, NamedConst};
use super::CatalogError;
use crate::rational::{is_integer, Rational};

const GUARD_BITS: usize = 32;
pub const MIN_PRECISION: u32 = 64;
const RM: RoundingMode = RoundingMode::ToEven;

pub type Assignment = BTreeMap<String, BigFloat>;

pub struct Evaluator {
    target: usize,
    prec: usize,
    cc: Consts,
    zero: BigFloat,
}

impl Evaluator {
    pub fn new(precision_bits: u32) -> Result<Evaluator, CatalogError> {
        if precision_bits < MIN_PRECISION {
            return Err(CatalogError::Precision(precision_bits));
        }
        let target = precision_bits as usize;
        let prec = target + GUARD_BITS;
        let cc = Consts::new().map_err(|e| CatalogError::Domain(format!("constant cache: {e:?}")))?;
        let mut ev = Evaluator { target, prec, cc, zero: BigFloat::from_i64(0, prec) };
        ev.zero = ev.pow2(-((target - target / 4) as i64));
        Ok(ev)
    }

    pub fn precision(&self) -> u32 {
        self.target as u32
    }

    /// `2^k` at working precision.
    pub fn pow2(&self, k: i64) -> BigFloat {
        let two = BigFloat::from_i64(2, self.prec);
        let m = two.powi(k.unsigned_abs() as usize, self.prec, RM);
        if k < 0 {
            m.reciprocal(self.prec, RM)
        } else {
            m
        }
    }

    /// Values with magnitude below this count as zero.
    pub fn zero_threshold(&self) -> &BigFloat {
        &self.zero
    }

    pub fn rational(&mut self, r: &Rational) -> BigFloat {
        let n = BigFloat::parse(&r.numer().to_string(), Radix::Dec, self.prec, RM, &mut self.cc);
        if r.denom() == &num_bigint::BigInt::from(1) {
            return n;
        }
        let d = BigFloat::parse(&r.denom().to_string(), Radix::Dec, self.prec, RM, &mut self.cc);
        n.div(&d, self.prec, RM)
    }

    pub fn constant(&mut self, c: &Constant) -> BigFloat {
        self.eval(&c.to_expr(), &Assignment::new()).expect("constants evaluate")
    }

    pub fn is_negligible(&self, x: &BigFloat) -> bool {
        less(&x.abs(), &self.zero)
    }

    pub fn eval(&mut self, e: &Expr, env: &Assignment) -> Result<BigFloat, CatalogError> {
        let p = self.prec;
        let v = match e {
            Expr::Var(name) => {
                let mut v = env.get(name).cloned().ok_or_else(|| CatalogError::UnboundVariable(name.clone()))?;
                v.set_precision(p, RM).map_err(|e| CatalogError::Domain(format!("{e:?}")))?;
                v
            }
            Expr::Const(r) => self.rational(r),
            Expr::Named(NamedConst::Pi) => self.cc.pi(p, RM),
            Expr::Named(NamedConst::E) => self.cc.e(p, RM),
            Expr::Add(a, b) => self.eval(a, env)?.add(&self.eval(b, env)?, p, RM),
            Expr::Mul(a, b) => self.eval(a, env)?.mul(&self.eval(b, env)?, p, RM),
            Expr::Div(a, b) => {
                let num = self.eval(a, env)?;
                let den = self.eval(b, env)?;
                if self.is_negligible(&den) {
                    return Err(CatalogError::Domain(format!("division by zero in {e}")));
                }
                num.div(&den, p, RM)
            }
            Expr::Pow(a, r) => {
                let base = self.eval(a, env)?;
                self.power(base, r, e)?
            }
            Expr::Apply(f, a) => {
                let x = self.eval(a, env)?;
                self.apply(*f, x, e)?
            }
        };
        if v.is_nan() || v.is_inf() {
            return Err(CatalogError::Domain(format!("non-finite value of {e}")));
        }
        Ok(v)
    }

    fn power(&mut self, base: BigFloat, r: &Rational, e: &Expr) -> Result<BigFloat, CatalogError> {
        let p = self.prec;
        if is_integer(r) {
            let n = r.to_integer().to_i64().ok_or_else(|| CatalogError::Domain(format!("exponent too large in {e}")))?;
            let m = base.powi(n.unsigned_abs() as usize, p, RM);
            if n >= 0 {
                return Ok(m);
            }
            if self.is_negligible(&base) {
                return Err(CatalogError::Domain(format!("division by zero in {e}")));
            }
            return Ok(m.reciprocal(p, RM));
        }
        if self.is_negligible(&base) {
            if r.is_positive() {
                return Ok(BigFloat::from_i64(0, p));
            }
            return Err(CatalogError::Domain(format!("division by zero in {e}")));
        }
        if base.is_negative() {
            return Err(CatalogError::Domain(format!("non-integer power of a negative base in {e}")));
        }
        let exponent = self.rational(r);
        Ok(base.ln(p, RM, &mut self.cc).mul(&exponent, p, RM).exp(p, RM, &mut self.cc))
    }

    fn apply(&mut self, f: Func, x: BigFloat, e: &Expr) -> Result<BigFloat, CatalogError> {
        let p = self.prec;
        let cc = &mut self.cc;
        let pole = |what: &str| CatalogError::Domain(format!("{what} of {e}"));
        Ok(match f {
            Func::Sin => x.sin(p, RM, cc),
            Func::Cos => x.cos(p, RM, cc),
            Func::Tan => {
                let c = x.cos(p, RM, cc);
                if less(&c.abs(), &self.zero) {
                    return Err(pole("pole"));
                }
                x.sin(p, RM, cc).div(&c, p, RM)
            }
            Func::Cot => {
                let s = x.sin(p, RM, cc);
                if less(&s.abs(), &self.zero) {
                    return Err(pole("pole"));
                }
                x.cos(p, RM, cc).div(&s, p, RM)
            }
            Func::Sinh => x.sinh(p, RM, cc),
            Func::Cosh => x.cosh(p, RM, cc),
            Func::Tanh => x.tanh(p, RM, cc),
            Func::Coth => {
                let s = x.sinh(p, RM, cc);
                if less(&s.abs(), &self.zero) {
                    return Err(pole("pole"));
                }
                x.cosh(p, RM, cc).div(&s, p, RM)
            }
            Func::Exp => x.exp(p, RM, cc),
            Func::Ln => {
                if less(&x, &self.zero) {
                    return Err(pole("logarithm of a non-positive value"));
                }
                x.ln(p, RM, cc)
            }
            Func::Sqrt => {
                if less(&x.abs(), &self.zero) {
                    BigFloat::from_i64(0, p)
                } else if x.is_negative() {
                    return Err(pole("square root of a negative value"));
                } else {
                    x.sqrt(p, RM)
                }
            }
        })
    }

    /// Rounds to the requested precision.
    pub fn finish(&self, mut x: BigFloat) -> BigFloat {
        x.set_precision(self.target, RM).expect("precision in range");
        x
    }

    /// Short decimal rendering for reports.
    pub fn format(&mut self, x: &BigFloat) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut y = x.clone();
        y.set_precision(40, RM).expect("precision in range");
        y.format(Radix::Dec, RM, &mut self.cc).unwrap_or_else(|_| "?".into())
    }
}

pub fn less(a: &BigFloat, b: &BigFloat) -> bool {
    a.cmp(b).is_some_and(|c| c < 0)
}

/// Evaluates `e` with the variables in `assignment` at `precision_bits` bits.
pub fn numeric_eval(e: &Expr, assignment: &Assignment, precision_bits: u32) -> Result<BigFloat, CatalogError> {
    let mut ev = Evaluator::new(precision_bits)?;
    let v = ev.eval(e, assignment)?;
    Ok(ev.finish(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(e: &str, x: f64) -> Result<BigFloat, CatalogError> {
        let mut env = Assignment::new();
        env.insert("x".into(), BigFloat::from_f64(x, 128));
        numeric_eval(&Expr::parse(e).unwrap(), &env, 128)
    }

    #[test]
    fn special_values() {
        let mut ev = Evaluator::new(128).unwrap();
        let s = numeric_eval(&Expr::parse("sin(pi)").unwrap(), &Assignment::new(), 128).unwrap();
        assert!(less(&s.abs(), &ev.pow2(-100)));
        let c = numeric_eval(&Expr::parse("cosh(0)").unwrap(), &Assignment::new(), 128).unwrap();
        let one = BigFloat::from_i64(1, 128);
        assert!(less(&c.sub(&one, 128, RM).abs(), &ev.pow2(-120)));
        assert!(matches!(at("tan(pi/2 + 0*x)", 0.0), Err(CatalogError::Domain(_))));
        let q = ev.rational(&crate::rational::frac(1, 4));
        assert_eq!(ev.format(&q), "2.5e-1");
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(at("ln(x)", -1.0), Err(CatalogError::Domain(_))));
        assert!(matches!(at("ln(x)", 0.0), Err(CatalogError::Domain(_))));
        assert!(matches!(at("1/x", 0.0), Err(CatalogError::Domain(_))));
        assert!(matches!(at("x^(1/2)", -2.0), Err(CatalogError::Domain(_))));
        assert!(matches!(at("cot(x)", 0.0), Err(CatalogError::Domain(_))));
        assert!(matches!(at("coth(x)", 0.0), Err(CatalogError::Domain(_))));
        assert!(at("sqrt(x)", 0.0).unwrap().is_zero());
        assert!(matches!(at("y", 0.0), Err(CatalogError::UnboundVariable(_))));
        assert!(matches!(Evaluator::new(32), Err(CatalogError::Precision(32))));
    }

    #[test]
    fn powers() {
        let v = at("x^(3/2)", 4.0).unwrap();
        let eight = BigFloat::from_i64(8, 128);
        let gap = v.sub(&eight, 128, RM).abs();
        assert!(gap.is_zero() || gap.exponent().unwrap() < -100);
        let w = at("x^(-2)", 2.0).unwrap();
        assert_eq!(w, BigFloat::from_f64(0.25, 128));
    }
}
