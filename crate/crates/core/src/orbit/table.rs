use std::fmt;

use serde::{Deserialize, Serialize};

use super::interval::{ExtEndpoint, IntervalSet};
use super::moebius::MoebiusMap;
use crate::rational::{frac, int};

/// `I₁ … I₆`: `(-inf,-2]`, `[-2,-1)`, `(-1,-1/2]`, `[-1/2,0)`, `(0,1]`, `[1,inf)`.
pub fn standard_intervals() -> [IntervalSet; 6] {
    let f = |n, d| ExtEndpoint::Finite(frac(n, d));
    [
        IntervalSet::interval(ExtEndpoint::NegInf, false, f(-2, 1), true),
        IntervalSet::interval(f(-2, 1), true, f(-1, 1), false),
        IntervalSet::interval(f(-1, 1), false, f(-1, 2), true),
        IntervalSet::interval(f(-1, 2), true, ExtEndpoint::Finite(int(0)), false),
        IntervalSet::interval(ExtEndpoint::Finite(int(0)), false, f(1, 1), true),
        IntervalSet::interval(f(1, 1), true, ExtEndpoint::PosInf, false),
    ]
}

/// `(map, source index, expected image index)`, indices 1-based.
const TABLE: [(&str, usize, usize); 12] = [
    ("sigma", 1, 6),
    ("sigma", 2, 5),
    ("sigma", 3, 4),
    ("sigma", 4, 3),
    ("sigma", 5, 2),
    ("sigma", 6, 1),
    ("rho", 1, 4),
    ("rho", 2, 3),
    ("rho", 3, 2),
    ("rho", 4, 1),
    ("rho", 5, 6),
    ("rho", 6, 5),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub map: String,
    pub source: usize,
    pub expected: usize,
    pub computed: IntervalSet,
    pub pass: bool,
}

impl fmt::Display for TableEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}(I{}) = I{}: computed {} [{}]",
            self.map,
            self.source,
            self.expected,
            self.computed,
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub entries: Vec<TableEntry>,
}

impl TableReport {
    pub fn passed(&self) -> usize {
        self.entries.iter().filter(|e| e.pass).count()
    }

    pub fn all_pass(&self) -> bool {
        self.passed() == self.entries.len()
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        write!(f, "{}/{} mappings verified", self.passed(), self.entries.len())
    }
}

/// Recomputes the twelve images of `I₁ … I₆` under `σ` and `ρ`.
pub fn interval_table_verify() -> TableReport {
    let intervals = standard_intervals();
    let entries = TABLE
        .iter()
        .map(|&(name, src, dst)| {
            let m = if name == "sigma" { MoebiusMap::sigma() } else { MoebiusMap::rho() };
            let computed = m.apply(&intervals[src - 1]);
            let pass = computed == intervals[dst - 1];
            TableEntry { map: name.to_string(), source: src, expected: dst, computed, pass }
        })
        .collect();
    TableReport { entries }
}
