use std::io::Write;
use std::process::{Command, Output};

use apart_core::{check_proof, fixtures, GameKind, ProofDocument};

fn apart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apart")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn prove_fig1_text() {
    let o = apart(&["prove", "fixture:fig1", "x0", "y0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("x0 # y0  by x0 -a-> x1\n"), "{text}");
    assert!(text.contains("no answer from x1"), "{text}");
}

#[test]
fn prove_fig2_json_is_accepted_by_checker() {
    let o = apart(&["prove", "fixture:fig2", "x0", "y0", "--kind", "branching", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let lts = fixtures::fig2();
    let proof = ProofDocument::from_json(&stdout(&o)).unwrap().to_proof(&lts).unwrap();
    assert!(check_proof(&lts, GameKind::Branching, &proof).valid);
}

#[test]
fn prove_dot_is_a_digraph() {
    let o = apart(&["prove", "fixture:fig1", "x0", "y0", "--format", "dot"]);
    assert!(stdout(&o).starts_with("digraph proof {"));
}

#[test]
fn prove_bisimilar_pair_json() {
    let o = apart(&["prove", "fixture:fig1", "x3", "y2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["apart"], false);
    assert!(v["bisimulation"].as_array().unwrap().contains(&serde_json::json!(["x3", "y2"])));
}

#[test]
fn aut_file_with_custom_silent_label() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    // p can go silently to a state that does b; q does b directly
    write!(f, "des (0,2,3)\n(0,\"int\",1)\n(1,\"b\",2)\n").unwrap();
    let path = f.path().to_str().unwrap();

    let strong = apart(&["prove", path, "s0", "s1", "--tau", "int"]);
    assert_eq!(strong.status.code(), Some(0));
    let branching = apart(&["prove", path, "s0", "s1", "--tau", "int", "--kind", "branching"]);
    assert_eq!(branching.status.code(), Some(3), "{}", stdout(&branching));
    // without --tau the label is visible
    let visible = apart(&["prove", path, "s0", "s1", "--kind", "branching"]);
    assert_eq!(visible.status.code(), Some(0));
}

#[test]
fn malformed_file_exits_2() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "des (0,1,2)\n(0,\"a\",5)\n").unwrap();
    let o = apart(&["check", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(apart(&["check", "/nonexistent.aut"]).status.code(), Some(2));
}

#[test]
fn single_state_check() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "des (0,0,1)").unwrap();
    let o = apart(&["check", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("{s0}"));
}

#[test]
fn game_dot_and_json() {
    let dot = stdout(&apart(&["game", "fixture:fig1", "x0", "y0", "--format", "dot"]));
    assert_eq!(dot.matches("c0 -> ").count(), 3);
    let json: serde_json::Value = serde_json::from_str(&stdout(&apart(&[
        "game",
        "fixture:fig2",
        "x0",
        "y0",
        "--kind",
        "branching",
        "--format",
        "json",
    ])))
    .unwrap();
    assert_eq!(json["kind"], "branching");
    assert_eq!(json["configs"][0]["config"], "[x0, y0]");
}

#[test]
fn solve_all_pairs_json() {
    let o = apart(&["solve", "fixture:fig1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["roots"].as_array().unwrap().len(), 81);
}

#[test]
fn selftest_small_run() {
    let o = apart(&["selftest", "--count", "20", "--kind", "branching", "--tau-prob", "0.3", "--max-states", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("game.tau_idling                  20 passed"), "{}", stdout(&o));
}
