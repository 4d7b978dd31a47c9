use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::constant::Constant;
use super::diff::differentiate;
use super::expr::Expr;
use super::numeric::{less, Evaluator};
use super::CatalogError;
use crate::orbit::{ExtEndpoint, IntervalSet, MoebiusMap, Piece};
use crate::rational::{floor, frac, int, is_integer, Rational};

/// Minimum distance of sample points from excluded points and open ends.
pub fn sample_margin() -> Rational {
    frac(1, 64)
}

const SAMPLE_BITS: u32 = 20;

/// A subset of the real line on which a function is defined.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum DomainSet {
    FullLine,
    Intervals(IntervalSet),
    /// `ℝ ∖ (period·ℤ + offset)` with `period > 0`, `0 ≤ offset < period`
    /// and `offset/period` rational.
    LineMinusLattice { period: Constant, offset: Constant },
}

impl DomainSet {
    pub fn intervals(set: IntervalSet) -> DomainSet {
        if set.is_full() {
            DomainSet::FullLine
        } else {
            DomainSet::Intervals(set)
        }
    }

    /// `ℝ ∖ (p·ℤ + q)`, with `q` reduced modulo `p`.
    pub fn lattice_complement(p: Constant, q: Constant) -> Result<DomainSet, CatalogError> {
        if !p.is_positive() {
            return Err(CatalogError::InvalidDomain(format!("period {p} must be positive")));
        }
        let ratio = q
            .div(&p)
            .and_then(|r| r.as_rational().cloned())
            .ok_or_else(|| CatalogError::InvalidDomain(format!("offset {q} is not a rational multiple of {p}")))?;
        let reduced = &ratio - Rational::from_integer(floor(&ratio));
        Ok(DomainSet::LineMinusLattice { offset: p.scale(&reduced), period: p })
    }

    pub fn positive_half_line() -> DomainSet {
        DomainSet::Intervals(IntervalSet::interval(ExtEndpoint::Finite(int(0)), false, ExtEndpoint::PosInf, false))
    }

    pub fn parse(text: &str) -> Result<DomainSet, CatalogError> {
        let t = text.trim();
        let invalid = |why: String| CatalogError::InvalidDomain(format!("`{t}`: {why}"));
        let rest = t.strip_prefix('R').or_else(|| t.strip_prefix('ℝ')).map(str::trim_start);
        match rest {
            Some("") => return Ok(DomainSet::FullLine),
            Some(r) if r.starts_with('\\') || r.starts_with('∖') => {
                let body = r.trim_start_matches(['\\', '∖']).trim();
                if body.starts_with('{') {
                    let pts = IntervalSet::parse(body).map_err(|e| invalid(e.to_string()))?;
                    return Ok(DomainSet::intervals(pts.complement()));
                }
                let inner = body
                    .strip_prefix('(')
                    .and_then(|b| b.strip_suffix(')'))
                    .ok_or_else(|| invalid("expected `(p*Z + q)` or `{a}` after `\\`".into()))?;
                return parse_lattice(inner).map_err(|e| match e {
                    CatalogError::InvalidDomain(m) => invalid(m),
                    other => invalid(other.to_string()),
                });
            }
            _ => {}
        }
        let set = IntervalSet::parse(t).map_err(|e| invalid(e.to_string()))?;
        Ok(DomainSet::intervals(set))
    }

    /// Exact membership test; comparisons between rationals and irrational
    /// constants are decided numerically, which is safe because they are
    /// never equal.
    pub fn contains(&self, c: &Constant, ev: &mut Evaluator) -> bool {
        match self {
            DomainSet::FullLine => true,
            DomainSet::Intervals(set) => set.pieces().iter().any(|piece| piece_contains(piece, c, ev)),
            DomainSet::LineMinusLattice { period, offset } => !lattice_contains(period, offset, c),
        }
    }

    /// `true` when `self ⊇ other` is established; `false` means not established.
    pub fn includes(&self, other: &DomainSet, ev: &mut Evaluator) -> bool {
        match (self, other) {
            (DomainSet::FullLine, _) => true,
            (_, DomainSet::FullLine) => false,
            (DomainSet::Intervals(s), DomainSet::Intervals(t)) => t.difference(s).is_empty(),
            (DomainSet::Intervals(s), DomainSet::LineMinusLattice { period, offset }) => {
                s.complement().pieces().iter().all(|piece| {
                    piece.is_point()
                        && piece
                            .lo
                            .finite()
                            .is_some_and(|x| lattice_contains(period, offset, &Constant::rational(x.clone())))
                })
            }
            (
                DomainSet::LineMinusLattice { period: p, offset: q },
                DomainSet::LineMinusLattice { period: p2, offset: q2 },
            ) => lattice_subset(p, q, p2, q2),
            (DomainSet::LineMinusLattice { period, offset }, DomainSet::Intervals(t)) => {
                t.pieces().iter().all(|piece| lattice_misses(period, offset, piece, ev).unwrap_or(false))
            }
        }
    }

    /// `{a·x + b : x ∈ self}` when it is again describable.
    pub fn affine_image(&self, a: &Rational, b: &Constant) -> Option<DomainSet> {
        if a.is_zero() {
            return None;
        }
        match self {
            DomainSet::FullLine => Some(DomainSet::FullLine),
            DomainSet::Intervals(s) => {
                let b = b.as_rational()?;
                let m = MoebiusMap::new(a.clone(), b.clone(), int(0), int(1)).ok()?;
                Some(DomainSet::intervals(m.apply(s)))
            }
            DomainSet::LineMinusLattice { period, offset } => {
                let q = offset.scale(a).add(b)?;
                DomainSet::lattice_complement(period.scale(&a.abs()), q).ok()
            }
        }
    }

    /// Deterministic sample for attempt `stream`; `None` when the draw lands
    /// within the margin of an excluded point.
    pub fn sample(&self, seed: u64, stream: u64, ev: &mut Evaluator) -> Option<Rational> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let wide = (int(-8), int(8));
        match self {
            DomainSet::FullLine => Some(uniform(&mut rng, &wide.0, &wide.1)),
            DomainSet::Intervals(set) => {
                let pieces = set.pieces();
                if pieces.is_empty() {
                    return None;
                }
                let piece = &pieces[rng.gen_range(0..pieces.len())];
                let (a, b) = window(piece)?;
                Some(uniform(&mut rng, &a, &b))
            }
            DomainSet::LineMinusLattice { period, offset } => {
                let x = uniform(&mut rng, &wide.0, &wide.1);
                let xf = ev.rational(&x);
                let p = ev.constant(period);
                let q = ev.constant(offset);
                let prec = ev.precision() as usize + 32;
                let rm = astro_float::RoundingMode::ToEven;
                let y = xf.sub(&q, prec, rm).div(&p, prec, rm);
                let k = y.round(0, rm);
                let nearest = q.add(&k.mul(&p, prec, rm), prec, rm);
                let dist = xf.sub(&nearest, prec, rm).abs();
                if less(&dist, &ev.rational(&sample_margin())) {
                    None
                } else {
                    Some(x)
                }
            }
        }
    }
}

fn parse_lattice(inner: &str) -> Result<DomainSet, CatalogError> {
    if let Some(rest) = inner.trim().strip_prefix('Z').or_else(|| inner.trim().strip_prefix('ℤ')) {
        let rest = rest.trim();
        if let Some(set) = rest.strip_prefix('+').map(str::trim).filter(|r| r.starts_with('{')) {
            let lat = crate::orbit::LatticeSet::parse(&format!("Z+{set}")).map_err(|e| CatalogError::InvalidDomain(e.to_string()))?;
            if lat.offsets().len() != 1 {
                return Err(CatalogError::InvalidDomain("a single lattice offset is supported".into()));
            }
            return DomainSet::lattice_complement(Constant::int(1), Constant::rational(lat.offsets()[0].clone()));
        }
    }
    let e = Expr::parse(inner)?;
    let z = "Z";
    let slope = differentiate(&e, z);
    if !slope.is_closed() || !differentiate(&slope, z).is_closed() {
        return Err(CatalogError::InvalidDomain("lattice must be affine in Z".into()));
    }
    let p = Constant::from_expr(&slope).ok_or_else(|| CatalogError::InvalidDomain(format!("period `{slope}`")))?;
    let rest = e.substitute(z, &Expr::int(0));
    let q = Constant::from_expr(&rest).ok_or_else(|| CatalogError::InvalidDomain(format!("offset `{rest}`")))?;
    if e.variables().iter().any(|v| v != z) {
        return Err(CatalogError::InvalidDomain("only Z may appear in a lattice".into()));
    }
    DomainSet::lattice_complement(p, q)
}

fn cmp_constant(c: &Constant, r: &Rational, ev: &mut Evaluator) -> std::cmp::Ordering {
    if let Some(x) = c.as_rational() {
        return x.cmp(r);
    }
    let v = ev.constant(c);
    let w = ev.rational(r);
    if less(&v, &w) {
        std::cmp::Ordering::Less
    } else {
        std::cmp::Ordering::Greater
    }
}

fn piece_contains(piece: &Piece, c: &Constant, ev: &mut Evaluator) -> bool {
    use std::cmp::Ordering::*;
    let above_lo = match &piece.lo {
        ExtEndpoint::NegInf => true,
        ExtEndpoint::PosInf => false,
        ExtEndpoint::Finite(a) => match cmp_constant(c, a, ev) {
            Greater => true,
            Equal => piece.lo_closed,
            Less => false,
        },
    };
    let below_hi = match &piece.hi {
        ExtEndpoint::PosInf => true,
        ExtEndpoint::NegInf => false,
        ExtEndpoint::Finite(b) => match cmp_constant(c, b, ev) {
            Less => true,
            Equal => piece.hi_closed,
            Greater => false,
        },
    };
    above_lo && below_hi
}

/// `c ∈ p·ℤ + q`
pub fn lattice_contains(p: &Constant, q: &Constant, c: &Constant) -> bool {
    let (Some(t), Some(s)) = (c.div(p), q.div(p)) else { return false };
    match (t.as_rational(), s.as_rational()) {
        (Some(t), Some(s)) => is_integer(&(t - s)),
        _ => false,
    }
}

/// `p·ℤ + q ⊆ p2·ℤ + q2`
fn lattice_subset(p: &Constant, q: &Constant, p2: &Constant, q2: &Constant) -> bool {
    let step = p.div(p2).and_then(|r| r.as_rational().cloned());
    step.is_some_and(|r| is_integer(&r)) && lattice_contains(p2, q2, q)
}

/// `Some(true)` when no lattice point lies in the bounded `piece`.
fn lattice_misses(p: &Constant, q: &Constant, piece: &Piece, ev: &mut Evaluator) -> Option<bool> {
    let (lo, hi) = (piece.lo.finite()?, piece.hi.finite()?);
    let pf = approx(p, ev)?;
    let qf = approx(q, ev)?;
    let k_lo = ((lo.to_f64()? - qf) / pf).floor() as i64 - 1;
    let k_hi = ((hi.to_f64()? - qf) / pf).ceil() as i64 + 1;
    if k_hi - k_lo > 10_000 {
        return None;
    }
    for k in k_lo..=k_hi {
        let point = q.add(&p.scale(&int(k)))?;
        if piece_contains(piece, &point, ev) {
            return Some(false);
        }
    }
    Some(true)
}

fn approx(c: &Constant, ev: &mut Evaluator) -> Option<f64> {
    let v = ev.constant(c);
    let s = ev.format(&v);
    s.parse::<f64>().ok()
}

fn uniform(rng: &mut ChaCha8Rng, a: &Rational, b: &Rational) -> Rational {
    let steps: i64 = 1 << SAMPLE_BITS;
    let k = rng.gen_range(0..=steps);
    a + (b - a) * Rational::new(BigInt::from(k), BigInt::from(steps))
}

/// Finite sampling window for a piece, shrunk away from open ends.
fn window(piece: &Piece) -> Option<(Rational, Rational)> {
    let span = int(16);
    let (mut a, mut b) = match (&piece.lo, &piece.hi) {
        (ExtEndpoint::Finite(a), ExtEndpoint::Finite(b)) => (a.clone(), b.clone()),
        (ExtEndpoint::Finite(a), _) => (a.clone(), a + &span),
        (_, ExtEndpoint::Finite(b)) => (b - &span, b.clone()),
        _ => (int(-8), int(8)),
    };
    let width = &b - &a;
    if width.is_zero() {
        return Some((a, b));
    }
    let m = std::cmp::min(sample_margin(), &width / int(4));
    if piece.lo.is_finite() && !piece.lo_closed {
        a += &m;
    }
    if piece.hi.is_finite() && !piece.hi_closed {
        b -= &m;
    }
    (a <= b).then_some((a, b))
}

impl fmt::Display for DomainSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainSet::FullLine => f.write_str("R"),
            DomainSet::Intervals(s) => write!(f, "{s}"),
            DomainSet::LineMinusLattice { period, offset } => {
                let lattice = if period.as_rational().is_some_and(|r| r.is_one()) {
                    "Z".to_string()
                } else {
                    format!("{period}*Z")
                };
                if offset.is_zero() {
                    write!(f, "R \\ ({lattice})")
                } else {
                    write!(f, "R \\ ({lattice} + {offset})")
                }
            }
        }
    }
}

impl std::str::FromStr for DomainSet {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DomainSet::parse(s)
    }
}

impl TryFrom<String> for DomainSet {
    type Error = CatalogError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        DomainSet::parse(&s)
    }
}

impl From<DomainSet> for String {
    fn from(d: DomainSet) -> String {
        d.to_string()
    }
}
