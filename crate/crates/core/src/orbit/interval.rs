use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::OrbitError;
use crate::rational::{parse_rational, Rational};

/// A point of the extended line. The derived order puts `NegInf` below every
/// finite value and `PosInf` above.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtEndpoint {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtEndpoint {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtEndpoint::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtEndpoint::Finite(_))
    }
}

impl From<Rational> for ExtEndpoint {
    fn from(r: Rational) -> Self {
        ExtEndpoint::Finite(r)
    }
}

impl fmt::Display for ExtEndpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtEndpoint::NegInf => f.write_str("-inf"),
            ExtEndpoint::Finite(r) => write!(f, "{r}"),
            ExtEndpoint::PosInf => f.write_str("inf"),
        }
    }
}

/// One nonempty interval. Infinite endpoints are always open.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub lo: ExtEndpoint,
    pub lo_closed: bool,
    pub hi: ExtEndpoint,
    pub hi_closed: bool,
}

impl Piece {
    /// `None` when the described interval is empty.
    pub fn new(lo: ExtEndpoint, lo_closed: bool, hi: ExtEndpoint, hi_closed: bool) -> Option<Piece> {
        let lo_closed = lo_closed && lo.is_finite();
        let hi_closed = hi_closed && hi.is_finite();
        match lo.cmp(&hi) {
            Ordering::Less => Some(Piece { lo, lo_closed, hi, hi_closed }),
            Ordering::Equal if lo_closed && hi_closed => Some(Piece { lo, lo_closed, hi, hi_closed }),
            _ => None,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let x = ExtEndpoint::Finite(x.clone());
        let above = match self.lo.cmp(&x) {
            Ordering::Less => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Greater => false,
        };
        let below = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    fn intersect(&self, other: &Piece) -> Option<Piece> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Piece::new(lo, lo_closed, hi, hi_closed)
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo);
        }
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        write!(f, "{open}{},{}{close}", self.lo, self.hi)
    }
}

/// Finite union of disjoint, non-touching intervals in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct IntervalSet {
    pieces: Vec<Piece>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { pieces: Vec::new() }
    }

    pub fn full() -> Self {
        IntervalSet::from_pieces(Piece::new(ExtEndpoint::NegInf, false, ExtEndpoint::PosInf, false))
    }

    pub fn point(x: Rational) -> Self {
        let e = ExtEndpoint::Finite(x);
        IntervalSet::from_pieces(Piece::new(e.clone(), true, e, true))
    }

    /// Single interval; empty when the bounds describe nothing.
    pub fn interval(lo: ExtEndpoint, lo_closed: bool, hi: ExtEndpoint, hi_closed: bool) -> Self {
        IntervalSet::from_pieces(Piece::new(lo, lo_closed, hi, hi_closed))
    }

    /// Canonicalizes an arbitrary collection of pieces.
    pub fn from_pieces(pieces: impl IntoIterator<Item = Piece>) -> Self {
        let mut v: Vec<Piece> = pieces.into_iter().collect();
        v.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Piece> = Vec::with_capacity(v.len());
        for p in v {
            if let Some(last) = out.last_mut() {
                let touches = match p.lo.cmp(&last.hi) {
                    Ordering::Less => true,
                    Ordering::Equal => last.hi_closed || p.lo_closed,
                    Ordering::Greater => false,
                };
                if touches {
                    match p.hi.cmp(&last.hi) {
                        Ordering::Greater => {
                            last.hi = p.hi;
                            last.hi_closed = p.hi_closed;
                        }
                        Ordering::Equal => last.hi_closed |= p.hi_closed,
                        Ordering::Less => {}
                    }
                    continue;
                }
            }
            out.push(p);
        }
        IntervalSet { pieces: out }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_full(&self) -> bool {
        matches!(self.pieces.as_slice(), [p] if p.lo == ExtEndpoint::NegInf && p.hi == ExtEndpoint::PosInf)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.pieces.iter().any(|p| p.contains(x))
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_pieces(self.pieces.iter().chain(&other.pieces).cloned())
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.pieces.len() && j < other.pieces.len() {
            let (a, b) = (&self.pieces[i], &other.pieces[j]);
            if let Some(p) = a.intersect(b) {
                out.push(p);
            }
            let a_first = match a.hi.cmp(&b.hi) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => !a.hi_closed || b.hi_closed,
            };
            if a_first {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet::from_pieces(out)
    }

    pub fn complement(&self) -> IntervalSet {
        let mut out = Vec::new();
        let mut lo = ExtEndpoint::NegInf;
        let mut lo_closed = false;
        for p in &self.pieces {
            if p.lo != ExtEndpoint::NegInf {
                out.extend(Piece::new(lo.clone(), lo_closed, p.lo.clone(), !p.lo_closed));
            }
            lo = p.hi.clone();
            lo_closed = !p.hi_closed;
        }
        if lo != ExtEndpoint::PosInf {
            out.extend(Piece::new(lo, lo_closed, ExtEndpoint::PosInf, false));
        }
        IntervalSet { pieces: out }
    }

    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        self.intersection(&other.complement())
    }

    pub fn without_points(&self, points: &[Rational]) -> IntervalSet {
        let holes = IntervalSet::from_pieces(points.iter().map(|x| {
            let e = ExtEndpoint::Finite(x.clone());
            Piece { lo: e.clone(), lo_closed: true, hi: e, hi_closed: true }
        }));
        self.difference(&holes)
    }

    /// Parses `"(-inf,-2] | [1,inf)"`, `"]0,1/2["`, `"{3}"`, `"{}"` or `"R"`.
    pub fn parse(text: &str) -> Result<IntervalSet, OrbitError> {
        let trimmed = text.trim();
        if trimmed == "R" || trimmed == "ℝ" {
            return Ok(IntervalSet::full());
        }
        let mut pieces = Vec::new();
        let mut offset = 0;
        for part in text.split('|') {
            let column = offset + (part.len() - part.trim_start().len()) + 1;
            offset += part.chars().count() + 1;
            let part = part.trim();
            if part == "{}" || (part.is_empty() && text.trim().is_empty()) {
                continue;
            }
            pieces.extend(parse_piece(part, column)?);
        }
        Ok(IntervalSet::from_pieces(pieces))
    }
}

fn parse_error(column: usize, expected: &str, found: &str) -> OrbitError {
    OrbitError::Parse { column, expected: expected.to_string(), found: found.to_string() }
}

fn parse_endpoint(text: &str, column: usize) -> Result<ExtEndpoint, OrbitError> {
    let t = text.trim().replace('−', "-");
    match t.as_str() {
        "-inf" | "-∞" => Ok(ExtEndpoint::NegInf),
        "inf" | "+inf" | "∞" | "+∞" => Ok(ExtEndpoint::PosInf),
        _ => parse_rational(&t)
            .map(ExtEndpoint::Finite)
            .ok_or_else(|| parse_error(column, "rational or inf", text.trim())),
    }
}

fn parse_piece(part: &str, column: usize) -> Result<Option<Piece>, OrbitError> {
    let chars: Vec<char> = part.chars().collect();
    let (Some(&first), Some(&last)) = (chars.first(), chars.last()) else {
        return Err(parse_error(column, "interval", "nothing"));
    };
    if first == '{' {
        if last != '}' {
            return Err(parse_error(column + chars.len() - 1, "`}`", &last.to_string()));
        }
        let inner: String = chars[1..chars.len() - 1].iter().collect();
        let e = parse_endpoint(&inner, column + 1)?;
        if !e.is_finite() {
            return Err(parse_error(column + 1, "finite point", inner.trim()));
        }
        return Ok(Piece::new(e.clone(), true, e, true));
    }
    let lo_closed = match first {
        '[' => true,
        '(' | ']' => false,
        c => return Err(parse_error(column, "`[`, `(` or `]`", &c.to_string())),
    };
    let hi_closed = match last {
        ']' => true,
        ')' | '[' => false,
        c => return Err(parse_error(column + chars.len() - 1, "`]`, `)` or `[`", &c.to_string())),
    };
    if chars.len() < 2 {
        return Err(parse_error(column, "interval", part));
    }
    let inner: String = chars[1..chars.len() - 1].iter().collect();
    let Some((a, b)) = inner.split_once(',') else {
        return Err(parse_error(column + chars.len() - 1, "`,`", &last.to_string()));
    };
    let lo = parse_endpoint(a, column + 1)?;
    let hi = parse_endpoint(b, column + 2 + a.chars().count())?;
    if (lo_closed && !lo.is_finite()) || (hi_closed && !hi.is_finite()) {
        return Err(parse_error(column, "open bracket at an infinite endpoint", part));
    }
    if lo > hi {
        return Err(parse_error(column, "lower endpoint not above upper endpoint", part));
    }
    Ok(Piece::new(lo, lo_closed, hi, hi_closed))
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return f.write_str("{}");
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl From<IntervalSet> for String {
    fn from(s: IntervalSet) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for IntervalSet {
    type Error = OrbitError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        IntervalSet::parse(&s)
    }
}

impl std::str::FromStr for IntervalSet {
    type Err = OrbitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IntervalSet::parse(s)
    }
}
