//! Forward chaining over facts about an unknown map `d: ℝ → ℝ`.
//!
//! Rules fire in a fixed order until no new fact appears. Every firing
//! re-validates its side conditions and appends a node to a [`ProofTrace`]
//! that can be replayed later.

mod evidence;
mod fact;
mod kb;
mod lemma;
mod rules;
mod trace;

pub use evidence::{Checker, Evidence, Outcome, SideCondition};
pub use fact::{Fact, PowerExponent, ShiftSet};
pub use kb::{fire_rules, kb_init, query, KnowledgeBase, QueryResult};
pub use lemma::{basic_lemma_verified, verify_basic_lemma, LemmaReport};
pub use rules::rule_names;
pub use trace::{trace_render, ProofTrace, TraceError, TraceFormat, TraceNode, AXIOM};

use crate::problem::ProblemSpec;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("malformed problem: {0}")]
    MalformedProblem(String),
}

/// A saturated knowledge base and the answer to the problem's goal.
pub struct Derivation {
    pub kb: KnowledgeBase,
    pub result: QueryResult,
}

/// Initializes, saturates and queries.
pub fn derive(problem: &ProblemSpec) -> Result<Derivation, EngineError> {
    let mut kb = fire_rules(kb_init(problem)?);
    let result = kb.query(&problem.goal);
    Ok(Derivation { kb, result })
}

/// Whether an unknown answer corresponds to the open case of the hyperbolic
/// equivalences: a hyperbolic function and `P2` without `d(2) = 0`.
pub fn is_open_case(problem: &ProblemSpec) -> bool {
    let hyperbolic = problem.axioms.iter().any(|a| match a {
        Fact::Derivates { function } => {
            ["sinh", "cosh", "tanh", "coth"].iter().any(|n| function.name == *n)
        }
        _ => false,
    });
    let two = crate::catalog::Constant::int(2);
    problem.goal == Fact::StandardDerivation
        && hyperbolic
        && problem.axioms.contains(&Fact::DerivatesP2)
        && !problem.axioms.contains(&Fact::zero(two))
}
