use serde::{Deserialize, Serialize};

use super::horbit::{h_orbit, orbit_group, OrbitSet};
use super::interval::IntervalSet;
use super::stern_brocot::simplest_in_set;
use crate::rational::{int, Rational};

/// Outcome of deciding whether every orbit `H_t`, `t ∉ {0, −1}`, meets `U`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum CoveringVerdict {
    Covered,
    Counterexample {
        #[serde(with = "crate::rational::text")]
        witness: Rational,
        orbit: OrbitSet,
    },
}

impl CoveringVerdict {
    pub fn is_covered(&self) -> bool {
        matches!(self, CoveringVerdict::Covered)
    }
}

/// The set of `t ∉ {0, −1}` whose whole orbit avoids `u`.
pub fn uncovered_set(u: &IntervalSet) -> IntervalSet {
    let c = u.complement();
    let mut bad = IntervalSet::full();
    for m in orbit_group() {
        bad = bad.intersection(&m.preimage(&c));
        if bad.is_empty() {
            break;
        }
    }
    bad.without_points(&[int(0), int(-1)])
}

/// Exact decision. A counterexample carries the simplest rational of the
/// uncovered set together with its orbit.
pub fn covering_decide(u: &IntervalSet) -> CoveringVerdict {
    let bad = uncovered_set(u);
    match simplest_in_set(&bad) {
        None => CoveringVerdict::Covered,
        Some(witness) => {
            let orbit = h_orbit(&witness).expect("witness avoids 0 and -1");
            CoveringVerdict::Counterexample { witness, orbit }
        }
    }
}
