use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::interval::{ExtEndpoint, IntervalSet, Piece};
use super::OrbitError;
use crate::rational::{int, Rational};

/// `s ↦ (a·s + b)/(c·s + d)` with nonzero determinant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoebiusMap {
    #[serde(with = "crate::rational::text")]
    a: Rational,
    #[serde(with = "crate::rational::text")]
    b: Rational,
    #[serde(with = "crate::rational::text")]
    c: Rational,
    #[serde(with = "crate::rational::text")]
    d: Rational,
}

impl MoebiusMap {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self, OrbitError> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(OrbitError::SingularMap);
        }
        Ok(MoebiusMap { a, b, c, d })
    }

    fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        MoebiusMap::new(int(a), int(b), int(c), int(d)).expect("nonsingular")
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    /// `s ↦ 1/s`
    pub fn rho() -> Self {
        Self::from_ints(0, 1, 1, 0)
    }

    /// `s ↦ −1 − s`
    pub fn sigma() -> Self {
        Self::from_ints(-1, -1, 0, 1)
    }

    pub fn coefficients(&self) -> [&Rational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn determinant(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            a: &self.a * &other.a + &self.b * &other.c,
            b: &self.a * &other.b + &self.b * &other.d,
            c: &self.c * &other.a + &self.d * &other.c,
            d: &self.c * &other.b + &self.d * &other.d,
        }
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    /// Representative scaled so that the first nonzero coefficient is 1.
    pub fn normalized(&self) -> MoebiusMap {
        let lead = [&self.a, &self.b, &self.c, &self.d]
            .into_iter()
            .find(|x| !x.is_zero())
            .expect("nonsingular map")
            .clone();
        let k = Rational::one() / lead;
        MoebiusMap { a: &self.a * &k, b: &self.b * &k, c: &self.c * &k, d: &self.d * &k }
    }

    /// Equality as transformations, i.e. modulo a nonzero scalar.
    pub fn same_map(&self, other: &MoebiusMap) -> bool {
        self.normalized() == other.normalized()
    }

    pub fn pole(&self) -> Option<Rational> {
        if self.c.is_zero() {
            None
        } else {
            Some(-&self.d / &self.c)
        }
    }

    /// `None` at the pole.
    pub fn apply_point(&self, s: &Rational) -> Option<Rational> {
        let den = &self.c * s + &self.d;
        if den.is_zero() {
            None
        } else {
            Some((&self.a * s + &self.b) / den)
        }
    }

    /// Limit of the map at an endpoint of a piece that does not contain the
    /// pole in its interior. `from_above` tells on which side of `e` the piece lies.
    fn endpoint_image(&self, e: &ExtEndpoint, from_above: bool) -> ExtEndpoint {
        let det_pos = self.determinant().is_positive();
        match e {
            ExtEndpoint::Finite(x) => match self.apply_point(x) {
                Some(y) => ExtEndpoint::Finite(y),
                // Approaching the pole from above sends the value to −sign(det)·∞.
                None => {
                    if from_above == det_pos {
                        ExtEndpoint::NegInf
                    } else {
                        ExtEndpoint::PosInf
                    }
                }
            },
            inf => {
                if !self.c.is_zero() {
                    return ExtEndpoint::Finite(&self.a / &self.c);
                }
                let up = (*inf == ExtEndpoint::PosInf) == (&self.a / &self.d).is_positive();
                if up {
                    ExtEndpoint::PosInf
                } else {
                    ExtEndpoint::NegInf
                }
            }
        }
    }

    fn piece_image(&self, p: &Piece) -> Option<Piece> {
        let lo = self.endpoint_image(&p.lo, true);
        let hi = self.endpoint_image(&p.hi, false);
        let keeps = |e: &ExtEndpoint, closed: bool| {
            closed && e.finite().is_some_and(|x| self.apply_point(x).is_some())
        };
        let (lc, hc) = (keeps(&p.lo, p.lo_closed), keeps(&p.hi, p.hi_closed));
        if self.determinant().is_positive() {
            Piece::new(lo, lc, hi, hc)
        } else {
            Piece::new(hi, hc, lo, lc)
        }
    }

    /// Exact image of `set`; the pole itself has no image.
    pub fn apply(&self, set: &IntervalSet) -> IntervalSet {
        let pole = self.pole().map(ExtEndpoint::Finite);
        let mut out = Vec::new();
        for p in set.pieces() {
            match &pole {
                Some(q) if p.lo < *q && *q < p.hi => {
                    out.extend(Piece::new(p.lo.clone(), p.lo_closed, q.clone(), false).and_then(|x| self.piece_image(&x)));
                    out.extend(Piece::new(q.clone(), false, p.hi.clone(), p.hi_closed).and_then(|x| self.piece_image(&x)));
                }
                Some(q) if *q == p.lo || *q == p.hi => {
                    let lc = p.lo_closed && *q != p.lo;
                    let hc = p.hi_closed && *q != p.hi;
                    out.extend(Piece::new(p.lo.clone(), lc, p.hi.clone(), hc).and_then(|x| self.piece_image(&x)));
                }
                _ => out.extend(self.piece_image(p)),
            }
        }
        IntervalSet::from_pieces(out)
    }

    /// `{s : s is not the pole and m(s) ∈ set}`.
    pub fn preimage(&self, set: &IntervalSet) -> IntervalSet {
        self.inverse().apply(set)
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s -> ({}*s + {})/({}*s + {})", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn s(t: &str) -> IntervalSet {
        IntervalSet::parse(t).unwrap()
    }

    #[test]
    fn compositions() {
        let sr = MoebiusMap::sigma().compose(&MoebiusMap::rho());
        assert!(sr.same_map(&MoebiusMap::from_ints(-1, -1, 1, 0)));
        assert!(MoebiusMap::sigma().compose(&MoebiusMap::sigma()).same_map(&MoebiusMap::identity()));
        assert!(MoebiusMap::rho().compose(&MoebiusMap::rho()).same_map(&MoebiusMap::identity()));
        assert_eq!(sr.apply_point(&int(2)), Some(frac(-3, 2)));
        assert_eq!(sr.apply_point(&int(0)), None);
        assert!(MoebiusMap::new(int(1), int(2), int(2), int(4)).is_err());
    }

    #[test]
    fn interval_images() {
        let (rho, sigma) = (MoebiusMap::rho(), MoebiusMap::sigma());
        assert_eq!(sigma.apply(&s("(-inf,-2]")), s("[1,inf)"));
        assert_eq!(rho.apply(&s("(0,1]")), s("[1,inf)"));
        assert_eq!(rho.apply(&s("(-1,1)")), s("(-inf,-1) | (1,inf)"));
        assert_eq!(rho.apply(&IntervalSet::full()), s("(-inf,0) | (0,inf)"));
        assert_eq!(rho.apply(&s("{0}")), IntervalSet::empty());
        assert_eq!(rho.apply(&s("[0,2]")), s("[1/2,inf)"));
        // s ↦ (s + 1)/(s − 1) on (1, 3]: pole at the open end, decreasing.
        let m = MoebiusMap::new(int(1), int(1), int(1), int(-1)).unwrap();
        assert_eq!(m.apply(&s("(1,3]")), s("[2,inf)"));
        assert_eq!(m.apply(&s("[3,inf)")), s("(1,2]"));
    }

    #[test]
    fn preimage_inverts() {
        let m = MoebiusMap::new(int(2), int(1), int(1), int(3)).unwrap();
        let u = s("[-5,-4) | (0,3/2]");
        assert_eq!(m.preimage(&m.apply(&u)), u);
        assert_eq!(m.apply(&m.preimage(&u)), u);
    }
}
