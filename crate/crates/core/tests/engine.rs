use std::time::Instant;

use derivcert::catalog::{Constant, FunctionSpec};
use derivcert::engine::{derive, fire_rules, is_open_case, kb_init, Fact, ProofTrace, QueryResult};
use derivcert::problem::{parse_problem, ProblemSpec};

fn problem(lines: &str) -> ProblemSpec {
    parse_problem(lines).unwrap()
}

fn with(f: &str, zero2: bool) -> ProblemSpec {
    let z = if zero2 { "assume zero 2\n" } else { "" };
    problem(&format!("assume derivates P2\n{z}assume derivates {f}(x)\ngoal standard"))
}

fn proved(p: &ProblemSpec) -> ProofTrace {
    let t = Instant::now();
    let d = derive(p).unwrap();
    let QueryResult::Proved(trace) = d.result else {
        panic!("not proved: {p}\nlog:\n{}", d.kb.log().join("\n"));
    };
    assert!(t.elapsed().as_secs() < 10, "{p} took {:?}", t.elapsed());
    trace
}

#[test]
fn trigonometric_and_exponential_pipelines() {
    for f in ["sin", "cos", "tan", "cot", "exp"] {
        let trace = proved(&with(f, false));
        assert_eq!(trace.nodes.last().unwrap().conclusions, vec![Fact::StandardDerivation], "{f}");
        trace.validate().unwrap();
        assert!(trace.replay().unwrap() > 0);
    }
}

#[test]
fn hyperbolic_pipelines_need_two() {
    for f in ["sinh", "cosh", "tanh", "coth"] {
        proved(&with(f, true));
    }
    let open = with("cosh", false);
    assert!(is_open_case(&open));
    assert!(!derive(&open).unwrap().result.is_proved());
}

#[test]
fn definition_and_empty() {
    let trace = proved(&problem("assume additive\nassume derivates P2"));
    assert_eq!(trace.rules(), vec!["AXIOM", "AXIOM", "R-DEF-STD"]);
    assert!(!derive(&ProblemSpec::default()).unwrap().result.is_proved());
}

#[test]
fn tan_goes_through_periodicity() {
    let trace = proved(&with("tan", false));
    let node = trace.nodes.iter().find(|n| n.rule == "R-PERIODIC").expect("periodic node");
    let text = node.to_string();
    assert!(text.contains("tan"), "{text}");
    assert!(node.conclusions.iter().any(|c| matches!(c, Fact::Periodic { .. })));
}

#[test]
fn zero_at_pi_from_sin() {
    let mut p = with("sin", false);
    p.goal = Fact::zero(Constant::pi());
    let trace = proved(&p);
    assert!(trace.to_text().contains("KnownZero(pi)"));
}

#[test]
fn equivalence_classes() {
    let trig = ["sin", "cos", "tan", "cot"];
    for f in trig {
        let kb = fire_rules(kb_init(&with(f, false)).unwrap());
        for g in trig {
            let spec = FunctionSpec::builtin(g).unwrap();
            assert!(kb.facts().iter().any(|x| matches!(x, Fact::Derivates { function } if function.name == spec.name)), "{f} -> {g}");
        }
    }
    let hyp = ["sinh", "cosh", "tanh", "coth", "exp"];
    for f in hyp {
        let kb = fire_rules(kb_init(&with(f, true)).unwrap());
        for g in hyp {
            assert!(kb.facts().iter().any(|x| matches!(x, Fact::Derivates { function } if function.name == g)), "{f} -> {g}");
        }
    }
}

#[test]
fn deterministic_and_monotone() {
    for f in ["tan", "exp", "coth"] {
        let p = with(f, true);
        let a = fire_rules(kb_init(&p).unwrap());
        let b = fire_rules(kb_init(&p).unwrap());
        assert_eq!(a.facts(), b.facts());
        assert_eq!(a.trace().to_json(), b.trace().to_json());
        let mut q = p.clone();
        q.axioms.push(Fact::Additive);
        let c = fire_rules(kb_init(&q).unwrap());
        for fact in a.facts() {
            assert!(c.known(fact), "{f}: lost {fact}");
        }
    }
}

#[test]
fn full_trace_replays() {
    let kb = fire_rules(kb_init(&with("sin", false)).unwrap());
    kb.trace().validate().unwrap();
    kb.trace().replay().unwrap();
    let back = ProofTrace::from_json(&kb.trace().to_json()).unwrap();
    assert_eq!(&back, kb.trace());
}

#[test]
fn malformed_problems() {
    let mut p = ProblemSpec::default();
    p.options.precision = 8;
    assert!(kb_init(&p).is_err());
    let mut p = ProblemSpec::default();
    p.options.points = 0;
    assert!(kb_init(&p).is_err());
}
