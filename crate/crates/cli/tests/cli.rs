use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

fn complrover(args: &[&str], seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_complrover"));
    cmd.env_remove("COMPLROVER_SEED");
    if let Some(s) = seed {
        cmd.env("COMPLROVER_SEED", s);
    }
    for a in args {
        if a.contains('.') && !a.starts_with("--") {
            cmd.arg(fixture(a));
        } else {
            cmd.arg(a);
        }
    }
    cmd.output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn label(query: &str, statements: &str) -> String {
    let out = complrover(
        &["classify", "--graph", "movies.nt", "--statements", statements, "--query", query],
        None,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    json(&out)["classification"]["label"].as_str().unwrap().to_owned()
}

#[test]
fn classify_reports_scenario_labels() {
    assert_eq!(label("queries/oscar_winners.rq", "oscar_complete.txt"), "CERTAIN_AND_COMPLETE");
    assert_eq!(label("queries/tattooed_winners.rq", "oscar_complete.txt"), "CERTAIN_LOWER_BOUND");
    assert_eq!(label("queries/untattooed_winners.rq", "oscar_complete.txt"), "POSSIBLE_UPPER_BOUND");
    assert_eq!(label("queries/oscar_not_gg.rq", "oscar_and_gg_complete.txt"), "CERTAIN_AND_COMPLETE");
}

#[test]
fn classify_without_statements_gives_no_guarantee() {
    let out = complrover(&["classify", "--graph", "movies.nt", "--query", "queries/untattooed_winners.rq"], None);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["classification"]["label"], "NO_GUARANTEE");
    assert!(doc["classification"]["note"].as_str().unwrap().contains("does not prove"));
}

#[test]
fn eval_on_empty_graph() {
    let out = complrover(&["eval", "--graph", "empty.nt", "--query", "queries/oscar_winners.rq"], None);
    assert!(out.status.success());
    assert_eq!(json(&out)["solutions"]["count"], 0);
}

#[test]
fn eval_lists_bindings() {
    let out = complrover(&["eval", "--graph", "movies.nt", "--query", "queries/untattooed_winners.rq"], None);
    let doc = json(&out);
    let names: Vec<&str> = doc["solutions"]["bindings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["x"]["value"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["http://example.org/alice", "http://example.org/erin"]);
}

#[test]
fn entails_both_directions() {
    let yes = complrover(
        &["entails", "--graph", "movies.nt", "--statements", "statements/all_awards.txt", "--query", "statements/gg_given_oscar.txt"],
        None,
    );
    assert!(yes.status.success());
    assert_eq!(json(&yes)["entailment"]["entailed"], true);

    let no = complrover(
        &["entails", "--graph", "movies.nt", "--statements", "statements/gg_given_oscar.txt", "--query", "statements/all_awards.txt"],
        None,
    );
    assert!(no.status.success());
    let doc = json(&no);
    assert_eq!(doc["entailment"]["entailed"], false);
    assert!(!doc["entailment"]["missing"].as_array().unwrap().is_empty());
}

#[test]
fn oracle_agrees_on_small_universe() {
    let out = complrover(
        &["oracle", "--graph", "small.nt", "--statements", "oscar_complete.txt", "--query", "queries/small_untattooed.rq"],
        None,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert!(doc["oracle_summary"]["discrepancies"].as_array().unwrap().is_empty());
}

#[test]
fn oracle_refuses_oversized_universe() {
    let out = complrover(
        &[
            "oracle", "--graph", "movies.nt", "--statements", "oscar_complete.txt",
            "--query", "queries/untattooed_winners.rq", "--candidate-cap", "1",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("universe too large"));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = std::env::temp_dir().join(format!("complrover-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.rq");
    std::fs::write(&bad, "SELECT ?x WHERE {\n  ?x <urn:ex:p> \n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_complrover"))
        .args(["eval", "--graph"])
        .arg(fixture("movies.nt"))
        .arg("--query")
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn missing_file_is_an_error() {
    let out = complrover(&["eval", "--graph", "nope.nt", "--query", "queries/oscar_winners.rq"], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn text_format() {
    let out = complrover(
        &["classify", "--graph", "movies.nt", "--statements", "oscar_complete.txt", "--query", "queries/tattooed_winners.rq", "--format", "text"],
        None,
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("classification: CERTAIN_LOWER_BOUND"));
}

#[test]
fn seed_does_not_change_output() {
    let args = ["oracle", "--graph", "small.nt", "--statements", "oscar_complete.txt", "--query", "queries/small_untattooed.rq"];
    let plain = complrover(&args, None);
    for seed in ["1", "42", "9999"] {
        assert_eq!(complrover(&args, Some(seed)).stdout, plain.stdout);
    }
    let bad = complrover(&args, Some("abc"));
    assert_eq!(bad.status.code(), Some(1));
}
