use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::evidence::Evidence;
use super::fact::Fact;
use crate::catalog::CheckConfig;

pub const AXIOM: &str = "AXIOM";

/// One rule application. Node ids start at 1 and premises always point to
/// earlier nodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceNode {
    pub id: usize,
    pub rule: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
    pub premises: Vec<usize>,
    pub evidence: Vec<Evidence>,
    pub conclusions: Vec<Fact>,
}

impl fmt::Display for TraceNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.id, self.rule)?;
        if !self.note.is_empty() {
            write!(f, ": {}", self.note)?;
        }
        let mut parts = Vec::new();
        if !self.premises.is_empty() {
            let p: Vec<String> = self.premises.iter().map(|p| format!("[{p}]")).collect();
            parts.push(format!("premises: {}", p.join(", ")));
        }
        if !self.evidence.is_empty() {
            let e: Vec<String> = self.evidence.iter().map(|e| e.to_string()).collect();
            parts.push(format!("evidence: {}", e.join("; ")));
        }
        if !parts.is_empty() {
            write!(f, " ({})", parts.join("; "))?;
        }
        let c: Vec<String> = self.conclusions.iter().map(|c| c.to_string()).collect();
        write!(f, " ⇒ {}", c.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceFormat {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("node [{node}] has premise [{premise}] that is not an earlier node")]
    BadPremise { node: usize, premise: usize },
    #[error("node [{0}] has no premises but is not an axiom")]
    Unsupported(usize),
    #[error("node ids are not 1..n in order at [{0}]")]
    BadId(usize),
    #[error("node [{node}] check `{check}` recorded {recorded} but replayed {replayed}")]
    Mismatch { node: usize, check: String, recorded: String, replayed: String },
    #[error("invalid trace document: {0}")]
    Json(String),
}

/// A DAG of rule applications with the check settings used to validate it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub config: CheckConfig,
    pub nodes: Vec<TraceNode>,
}

impl ProofTrace {
    pub fn new(config: CheckConfig) -> ProofTrace {
        ProofTrace { config, nodes: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: usize) -> Option<&TraceNode> {
        id.checked_sub(1).and_then(|i| self.nodes.get(i))
    }

    pub(crate) fn push(&mut self, rule: &str, note: String, premises: Vec<usize>, evidence: Vec<Evidence>, conclusions: Vec<Fact>) -> usize {
        let id = self.nodes.len() + 1;
        self.nodes.push(TraceNode { id, rule: rule.to_string(), note, premises, evidence, conclusions });
        id
    }

    /// The last node concluding `fact`.
    pub fn producer(&self, fact: &Fact) -> Option<usize> {
        self.nodes.iter().rev().find(|n| n.conclusions.contains(fact)).map(|n| n.id)
    }

    /// Rule names in node order.
    pub fn rules(&self) -> Vec<&str> {
        self.nodes.iter().map(|n| n.rule.as_str()).collect()
    }

    /// The sub-DAG of all ancestors of `roots`, renumbered from 1.
    pub fn slice(&self, roots: &[usize]) -> ProofTrace {
        let mut keep = BTreeSet::new();
        let mut stack: Vec<usize> = roots.to_vec();
        while let Some(id) = stack.pop() {
            if keep.insert(id) {
                if let Some(n) = self.node(id) {
                    stack.extend(n.premises.iter().copied());
                }
            }
        }
        let renumber: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, id)| (*id, i + 1)).collect();
        let nodes = keep
            .iter()
            .filter_map(|id| self.node(*id))
            .map(|n| TraceNode {
                id: renumber[&n.id],
                premises: n.premises.iter().map(|p| renumber[p]).collect(),
                ..n.clone()
            })
            .collect();
        ProofTrace { config: self.config, nodes }
    }

    /// Structural invariants: ids in order, premises point backwards, and
    /// only axioms lack premises.
    pub fn validate(&self) -> Result<(), TraceError> {
        for (i, n) in self.nodes.iter().enumerate() {
            if n.id != i + 1 {
                return Err(TraceError::BadId(n.id));
            }
            if let Some(&p) = n.premises.iter().find(|&&p| p == 0 || p >= n.id) {
                return Err(TraceError::BadPremise { node: n.id, premise: p });
            }
            if n.premises.is_empty() && n.rule != AXIOM {
                return Err(TraceError::Unsupported(n.id));
            }
        }
        Ok(())
    }

    /// Re-runs every recorded side condition and compares outcomes. Returns
    /// the number of checks replayed.
    pub fn replay(&self) -> Result<usize, TraceError> {
        let mut count = 0;
        for n in &self.nodes {
            for e in &n.evidence {
                let replayed = e.check.run(&self.config);
                if replayed != e.outcome {
                    return Err(TraceError::Mismatch {
                        node: n.id,
                        check: e.check.to_string(),
                        recorded: e.outcome.to_string(),
                        replayed: replayed.to_string(),
                    });
                }
                count += 1;
            }
        }
        Ok(count)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            out.push_str(&n.to_string());
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("traces serialize")
    }

    pub fn from_json(text: &str) -> Result<ProofTrace, TraceError> {
        let t: ProofTrace = serde_json::from_str(text).map_err(|e| TraceError::Json(e.to_string()))?;
        t.validate()?;
        Ok(t)
    }

    pub fn render(&self, format: TraceFormat) -> String {
        match format {
            TraceFormat::Text => self.to_text(),
            TraceFormat::Json => self.to_json(),
        }
    }
}

pub fn trace_render(trace: &ProofTrace, format: TraceFormat) -> String {
    trace.render(format)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_axiom() {
        let mut t = ProofTrace::new(CheckConfig::default());
        t.push(AXIOM, String::new(), vec![], vec![], vec![Fact::DerivatesP2]);
        assert_eq!(t.to_text(), "[1] AXIOM ⇒ DerivatesP2\n");
        assert_eq!(ProofTrace::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn slicing_renumbers() {
        let mut t = ProofTrace::new(CheckConfig::default());
        t.push(AXIOM, String::new(), vec![], vec![], vec![Fact::DerivatesP2]);
        t.push(AXIOM, String::new(), vec![], vec![], vec![Fact::Additive]);
        t.push("R-DEF-STD", String::new(), vec![1, 2], vec![], vec![Fact::StandardDerivation]);
        t.push("R-ODD-ZEROS", String::new(), vec![1], vec![], vec![Fact::Odd]);
        let s = t.slice(&[4]);
        assert_eq!(s.len(), 2);
        assert_eq!(s.nodes[1].premises, vec![1]);
        assert!(s.validate().is_ok());
        let bad = ProofTrace { nodes: vec![TraceNode { premises: vec![], ..t.nodes[2].clone() }], ..t.clone() };
        assert!(matches!(bad.validate(), Err(TraceError::BadId(3))));
    }
}
