use std::io::Write;

use derivcert_cli::run_command;

fn run(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["derivcert"];
    argv.extend_from_slice(args);
    run_command(argv)
}

fn problem_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn orbit_output() {
    assert_eq!(run(&["orbit", "2"]), (0, "H(2) = {2, 1/2, -3/2, -2/3, -1/3, -3}\n".to_string()));
    assert_eq!(run(&["orbit", "1"]).1, "H(1) = {1, -2, -1/2}\n");
    assert_eq!(run(&["orbit", "-1"]).0, 2);
    assert_eq!(run(&["orbit", "two"]).0, 2);
    let (code, json) = run(&["--json", "orbit", "3/2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["elements"].as_array().unwrap().len(), 6);
}

#[test]
fn cover_exit_codes() {
    assert_eq!(run(&["cover", "(0,1]"]), (0, "Covered\n".to_string()));
    let (code, out) = run(&["cover", "(0,1/2)"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("Counterexample: t = "), "{out}");
    assert_eq!(run(&["cover", "(0,"]).0, 2);
    let (_, json) = run(&["cover", "(0,1/2)", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["result"]["verdict"], "Counterexample");
}

#[test]
fn lattice_verdicts() {
    assert_eq!(run(&["lattice", "{1/3}"]), (0, "R \\ (Z+{1/3}): CondI\n".to_string()));
    assert_eq!(run(&["lattice", "Z+{1/2}"]).1, "R \\ (Z+{1/2}): CondII\n");
    assert_eq!(run(&["lattice", "{0}"]).1, "R \\ (Z+{0}): DirectZero\n");
    assert_eq!(run(&["lattice", "{0, 1/2}"]).0, 1);
    assert_eq!(run(&["lattice", "{3/2}"]).0, 2);
}

#[test]
fn eval_images() {
    let (code, out) = run(&["eval", "x*y", "--image", "x=1", "--image", "y=x"]);
    assert_eq!(code, 0);
    assert_eq!(out, "d(x*y) = x^2 + y\n");
    assert_eq!(run(&["eval", "x*y", "--image", "x=1"]).0, 2);
    assert_eq!(run(&["eval", "x", "--image", "x"]).0, 2);
    assert_eq!(run(&["eval", "x", "--image", "x=1", "--image", "x=2"]).0, 2);
}

#[test]
fn derive_outcomes() {
    let p = problem_file("assume derivates P2\nassume derivates sin(x)\ngoal standard\n");
    let path = p.path().to_str().unwrap();
    let (code, out) = run(&["derive", path]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("# precision 256 bits, 64 points, seed 0x5eed\n"));
    assert!(out.ends_with("StandardDerivation: Proved\n"));
    assert_eq!(run(&["derive", path]).1, out);

    let open = problem_file("assume derivates P2\nassume derivates cosh(x)\n");
    let (code, out) = run(&["derive", open.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("Unknown (cf. open problem)"), "{out}");

    let empty = problem_file("# nothing\n");
    let (code, out) = run(&["derive", empty.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.ends_with("StandardDerivation: Unknown\n"), "{out}");

    let typo = problem_file("goal standar\n");
    let (code, out) = run(&["derive", typo.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("line 1, column 6"), "{out}");
    assert_eq!(run(&["derive", "/nonexistent/problem.txt"]).0, 2);
}

#[test]
fn derive_options() {
    let p = problem_file("option points 32\nassume additive\nassume derivates P2\n");
    let path = p.path().to_str().unwrap();
    let (_, out) = run(&["derive", path, "--seed", "0xabc"]);
    assert!(out.starts_with("# precision 256 bits, 32 points, seed 0xabc\n"), "{out}");
    assert!(out.contains("R-DEF-STD"));
    let (code, json) = run(&["--json", "derive", path]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["result"], "Proved");
    assert_eq!(v["options"]["points"], 32);
    assert_eq!(v["trace"]["nodes"].as_array().unwrap().len(), 3);
    assert_eq!(run(&["derive", path, "--seed", "xyz"]).0, 2);
    assert_eq!(run(&["derive", path, "--precision", "8"]).0, 2);
}

#[test]
fn selftest_passes() {
    let (code, out) = run(&["selftest"]);
    assert_eq!(code, 0);
    assert!(out.contains("12/12 mappings verified"));
    assert!(out.ends_with("selftest passed\n"));
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&[]).0, 2);
}
