//! Orbits of `t` under `s ↦ 1/s` and `s ↦ −1 − s`, exact interval-set algebra
//! under Möbius maps, and the decision procedures built on them.

mod covering;
mod horbit;
mod interval;
mod lattice;
mod moebius;
mod stern_brocot;
mod table;

pub use covering::{covering_decide, uncovered_set, CoveringVerdict};
pub use horbit::{h_orbit, is_excluded, orbit_group, OrbitSet, ORBIT_MAP_NAMES};
pub use interval::{ExtEndpoint, IntervalSet, Piece};
pub use lattice::{in_product_set, lattice_condition_check, LatticeSet, LatticeVerdict};
pub use moebius::MoebiusMap;
pub use stern_brocot::{simplest_in_piece, simplest_in_set};
pub use table::{interval_table_verify, standard_intervals, TableEntry, TableReport};

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OrbitError {
    #[error("t = {0} is excluded (the orbit is only defined off 0 and -1)")]
    ExcludedPoint(Rational),
    #[error("lattice offset {0} is outside [0, 1)")]
    InvalidOffset(Rational),
    #[error("lattice set needs at least one offset")]
    EmptyLattice,
    #[error("map has zero determinant")]
    SingularMap,
    #[error("column {column}: expected {expected}, found `{found}`")]
    Parse { column: usize, expected: String, found: String },
}
