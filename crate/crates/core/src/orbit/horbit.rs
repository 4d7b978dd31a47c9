use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::interval::IntervalSet;
use super::moebius::MoebiusMap;
use super::OrbitError;
use crate::rational::Rational;

/// The orbit `H_t` of `t` under the group generated by `s ↦ 1/s` and
/// `s ↦ −1 − s`, stored in the order of [`orbit_group`] with repeats dropped.
/// Equality is set equality.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitSet {
    #[serde(with = "crate::rational::text")]
    base: Rational,
    #[serde(with = "crate::rational::text_vec")]
    elements: Vec<Rational>,
}

impl OrbitSet {
    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.elements.contains(x)
    }

    pub fn sorted(&self) -> Vec<Rational> {
        let mut v = self.elements.clone();
        v.sort();
        v
    }

    /// First element, in enumeration order, that lies in `u`.
    pub fn first_in(&self, u: &IntervalSet) -> Option<&Rational> {
        self.elements.iter().find(|x| u.contains(x))
    }

    pub fn meets(&self, u: &IntervalSet) -> bool {
        self.first_in(u).is_some()
    }
}

impl PartialEq for OrbitSet {
    fn eq(&self, other: &Self) -> bool {
        self.sorted() == other.sorted()
    }
}

impl Eq for OrbitSet {}

impl fmt::Display for OrbitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// The six maps `id, ρ, σ∘ρ, ρ∘σ∘ρ, ρ∘σ, σ` with `ρ(s) = 1/s`, `σ(s) = −1 − s`.
pub fn orbit_group() -> Vec<MoebiusMap> {
    let (rho, sigma) = (MoebiusMap::rho(), MoebiusMap::sigma());
    let sr = sigma.compose(&rho);
    let rsr = rho.compose(&sr);
    let rs = rho.compose(&sigma);
    vec![MoebiusMap::identity(), rho, sr, rsr, rs, sigma]
}

/// Names matching [`orbit_group`].
pub const ORBIT_MAP_NAMES: [&str; 6] = ["id", "rho", "sigma.rho", "rho.sigma.rho", "rho.sigma", "sigma"];

pub fn is_excluded(t: &Rational) -> bool {
    t.is_zero() || *t == -Rational::one()
}

pub fn h_orbit(t: &Rational) -> Result<OrbitSet, OrbitError> {
    if is_excluded(t) {
        return Err(OrbitError::ExcludedPoint(t.clone()));
    }
    let mut elements: Vec<Rational> = Vec::with_capacity(6);
    for m in orbit_group() {
        let v = m.apply_point(t).expect("orbit maps are defined off {0, -1}");
        if !elements.contains(&v) {
            elements.push(v);
        }
    }
    Ok(OrbitSet { base: t.clone(), elements })
}
