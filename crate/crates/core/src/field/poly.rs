//! Sparse multivariate polynomials over the rationals.
//!
//! Generators are kept sorted by name; exponent vectors follow that order and
//! terms are ordered graded-lexicographically, so the leading term is the last
//! entry of the term map.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::FieldError;
use crate::rational::Rational;

/// Polynomials with more terms than this are rejected by the checked entry points.
pub const MAX_TERMS: usize = 1_000_000;

pub type Generators = Arc<Vec<String>>;

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub(crate) Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn quotient(&self, divisor: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&divisor.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    gens: Generators,
    terms: BTreeMap<Monomial, Rational>,
}

/// Sorted, deduplicated generator list.
pub fn generators<S: AsRef<str>>(names: &[S]) -> Generators {
    let mut v: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
    v.sort();
    v.dedup();
    Arc::new(v)
}

/// Sorted union of two generator lists.
pub fn merge_generators(a: &Generators, b: &Generators) -> Generators {
    if a == b {
        return a.clone();
    }
    let mut v: Vec<String> = a.iter().chain(b.iter()).cloned().collect();
    v.sort();
    v.dedup();
    Arc::new(v)
}

impl MultiPoly {
    pub fn zero(gens: &Generators) -> Self {
        MultiPoly { gens: gens.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(gens: &Generators, c: Rational) -> Self {
        let mut p = Self::zero(gens);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(gens.len()), c);
        }
        p
    }

    pub fn one(gens: &Generators) -> Self {
        Self::constant(gens, Rational::one())
    }

    /// The generator `name` as a polynomial, if it belongs to `gens`.
    pub fn generator(gens: &Generators, name: &str) -> Option<Self> {
        let idx = gens.iter().position(|g| g == name)?;
        let mut e = vec![0; gens.len()];
        e[idx] = 1;
        let mut p = Self::zero(gens);
        p.terms.insert(Monomial(e), Rational::one());
        Some(p)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs given in the
    /// order of `names`, which need not be sorted.
    pub fn from_terms<S: AsRef<str>>(
        names: &[S],
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Result<Self, FieldError> {
        let gens = generators(names);
        if gens.len() != names.len() {
            return Err(FieldError::DuplicateGenerator(
                names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().join(","),
            ));
        }
        let perm: Vec<usize> = names
            .iter()
            .map(|n| gens.iter().position(|g| g == n.as_ref()).expect("name present"))
            .collect();
        let mut p = Self::zero(&gens);
        for (exps, c) in terms {
            if exps.len() != names.len() {
                return Err(FieldError::ExponentLength { expected: names.len(), found: exps.len() });
            }
            let mut e = vec![0; gens.len()];
            for (i, x) in exps.into_iter().enumerate() {
                e[perm[i]] = x;
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn gens(&self) -> &Generators {
        &self.gens
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(Rational::zero))
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Whether generator `var` occurs with a positive exponent.
    pub fn uses(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    /// Names of the generators that actually occur.
    pub fn used_generators(&self) -> Vec<String> {
        (0..self.gens.len()).filter(|&i| self.uses(i)).map(|i| self.gens[i].clone()).collect()
    }

    pub fn check_size(&self) -> Result<(), FieldError> {
        if self.terms.len() > MAX_TERMS {
            return Err(FieldError::ResourceLimit { terms: self.terms.len() });
        }
        Ok(())
    }

    pub(crate) fn from_monomials(gens: &Generators, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(gens);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Re-expresses the polynomial over a larger sorted generator list.
    pub fn embed(&self, target: &Generators) -> MultiPoly {
        if &self.gens == target {
            return self.clone();
        }
        let map: Vec<usize> = self
            .gens
            .iter()
            .map(|g| target.iter().position(|t| t == g).expect("target contains every generator"))
            .collect();
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, x) in m.0.iter().enumerate() {
                e[map[i]] = *x;
            }
            out.terms.insert(Monomial(e), c.clone());
        }
        out
    }

    fn aligned<'a>(&'a self, other: &'a MultiPoly) -> Option<(MultiPoly, MultiPoly)> {
        if self.gens == other.gens {
            None
        } else {
            let g = merge_generators(&self.gens, &other.gens);
            Some((self.embed(&g), other.embed(&g)))
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        if let Some((a, b)) = self.aligned(other) {
            return a.add(&b);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        if let Some((a, b)) = self.aligned(other) {
            return a.sub(&b);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly { gens: self.gens.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn scale(&self, k: &Rational) -> MultiPoly {
        if k.is_zero() {
            return MultiPoly::zero(&self.gens);
        }
        MultiPoly { gens: self.gens.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        if let Some((a, b)) = self.aligned(other) {
            return a.mul(&b);
        }
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero(&self.gens);
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        let mut out = MultiPoly::zero(&self.gens);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut result = MultiPoly::one(&self.gens);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplies by `gens[var]^k`.
    pub fn shift(&self, var: usize, k: u32) -> MultiPoly {
        if k == 0 {
            return self.clone();
        }
        MultiPoly {
            gens: self.gens.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e[var] += k;
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Partial derivative with respect to `gens[var]`.
    pub fn partial(&self, var: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.gens);
        for (m, c) in &self.terms {
            let k = m.0[var];
            if k == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[var] -= 1;
            out.add_term(Monomial(e), c * Rational::from_integer(k.into()));
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder. Relies on the fact that the leading term of any multiple of
    /// `divisor` is divisible by the leading term of `divisor`.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        if let Some((a, b)) = self.aligned(divisor) {
            return a.div_exact(&b);
        }
        let (lm, lc) = divisor.leading()?;
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&(Rational::one() / c)));
        }
        if (0..self.gens.len()).any(|v| divisor.degree_in(v) > self.degree_in(v)) {
            return None;
        }
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(&self.gens);
        while let Some((rm, rc)) = rem.leading() {
            if !lm.divides(rm) {
                return None;
            }
            let qm = rm.quotient(&lm);
            let qc = rc / &lc;
            for (m, c) in &divisor.terms {
                rem.add_term(m.mul(&qm), -(c * &qc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Scales so the leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> MultiPoly {
        let lc = self.leading_coeff();
        if lc.is_zero() || lc.is_one() {
            return self.clone();
        }
        self.scale(&(Rational::one() / lc))
    }

    /// Coefficients with respect to `gens[var]`: entry `k` multiplies `var^k`.
    pub fn coeffs_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![MultiPoly::zero(&self.gens); deg + 1];
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut e = m.0.clone();
            e[var] = 0;
            out[k].terms.insert(Monomial(e), c.clone());
        }
        out
    }

    /// Coefficient of `var^k` (with `var` eliminated).
    pub fn coeff_in(&self, var: usize, k: u32) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.gens);
        for (m, c) in &self.terms {
            if m.0[var] == k {
                let mut e = m.0.clone();
                e[var] = 0;
                out.terms.insert(Monomial(e), c.clone());
            }
        }
        out
    }

    /// Evaluates at a rational point given in generator order.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, e) in point.iter().zip(&m.0) {
                if *e > 0 {
                    t *= num_traits::pow(x.clone(), *e as usize);
                }
            }
            acc += t;
        }
        acc
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(j, e)| if *e == 1 { self.gens[j].clone() } else { format!("{}^{}", self.gens[j], e) })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                f.write_str(&vars.join("*"))?;
            }
        }
        Ok(())
    }
}
