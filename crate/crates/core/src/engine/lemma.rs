//! The algebraic step behind the covering rule, checked exactly over ℚ(x, y).
//!
//! With `x + y + z = 0` and `u = x/y`, `u + 1 = −z/y`, so
//! `d(u) − d(u + 1) = (d(x)y − x·d(y))/y² + (d(z)y − z·d(y))/y² = (d(x) + d(y) + d(z))/y`.

use std::fmt;
use std::sync::OnceLock;

use crate::field::{parse_ratfunc, FieldError, FormalDerivation, RatFunc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    /// The identity with `d(z)` a free symbol and `z := −x − y`.
    pub free_image: bool,
    /// The identity for the formal derivation on ℚ(x, y, a, b) with
    /// `d(x) = a`, `d(y) = b`, so that `d(z) = −a − b` is forced.
    pub forced_image: bool,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.free_image && self.forced_image
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "ok" } else { "FAILED" };
        write!(f, "free d(z): {}, forced d(z) = -d(x) - d(y): {}", mark(self.free_image), mark(self.forced_image))
    }
}

fn free_route() -> Result<bool, FieldError> {
    let z = "(-x - y)";
    let lhs = parse_ratfunc(&format!("(a*y - x*b)/y^2 + (c*y - {z}*b)/y^2"))?;
    let rhs = parse_ratfunc("(a + b + c)/y")?;
    Ok(lhs.sub(&rhs)?.is_zero())
}

fn forced_route() -> Result<bool, FieldError> {
    let zero = parse_ratfunc("0")?;
    let d = FormalDerivation::new([
        ("x".to_string(), parse_ratfunc("a")?),
        ("y".to_string(), parse_ratfunc("b")?),
        ("a".to_string(), zero.clone()),
        ("b".to_string(), zero),
    ])?;
    let (x, y) = (parse_ratfunc("x")?, parse_ratfunc("y")?);
    let z = parse_ratfunc("-x - y")?;
    let dz = d.apply(&z)?;
    if dz.sub(&parse_ratfunc("-a - b")?)?.is_zero() {
        let u = x.div(&y)?;
        let v = z.div(&y)?.neg();
        let lhs = d.apply(&u)?.sub(&d.apply(&v)?)?;
        let sum = d.apply(&x)?.add(&d.apply(&y)?)?.add(&dz)?;
        let rhs = sum.div(&y)?;
        let expanded: RatFunc = {
            let by = |t: &RatFunc, dt: &RatFunc| -> Result<RatFunc, FieldError> {
                dt.mul(&y)?.sub(&t.mul(&d.apply(&y)?)?)?.div(&y.mul(&y)?)
            };
            by(&x, &d.apply(&x)?)?.add(&by(&z, &dz)?)?
        };
        return Ok(lhs.sub(&rhs)?.is_zero() && expanded.sub(&rhs)?.is_zero());
    }
    Ok(false)
}

/// Runs both exact computations.
pub fn verify_basic_lemma() -> Result<LemmaReport, FieldError> {
    Ok(LemmaReport { free_image: free_route()?, forced_image: forced_route()? })
}

/// The result of [`verify_basic_lemma`], computed once per process.
pub fn basic_lemma_verified() -> &'static Result<LemmaReport, FieldError> {
    static CELL: OnceLock<Result<LemmaReport, FieldError>> = OnceLock::new();
    CELL.get_or_init(verify_basic_lemma)
}
