//! Exact machinery for derivations with respect to finite sets of smooth
//! functions: rational-function fields with formal derivations, Möbius orbit
//! coverings, a catalog of admissible functions, and a forward-chaining proof
//! engine with replayable traces.

pub mod catalog;
pub mod engine;
pub mod field;
pub mod orbit;
pub mod problem;
pub mod rational;
pub mod syntax;
