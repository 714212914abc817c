use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const WORKED: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../core/tests/fixtures/worked_3_6.json"
);

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dimertwist"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn labels(graph: &Value) -> Vec<Vec<u64>> {
    let mut ls: Vec<Vec<u64>> = graph["faces"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| {
            f["label"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_u64().unwrap())
                .collect()
        })
        .collect();
    ls.sort();
    ls
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn regular_graph_has_twelve_internal_faces() {
    let g = json(&run(&["regular", "--k", "4", "--n", "9"]));
    let internal = g["faces"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|f| f["kind"] == "internal")
        .count();
    assert_eq!(internal, 12);
    assert!(g["dot"].as_str().unwrap().starts_with("graph plabic"));
}

#[test]
fn regular_star_graph_contains_2389() {
    let g = json(&run(&["regular", "--k", "4", "--n", "9", "--star"]));
    assert!(labels(&g).contains(&vec![2, 3, 8, 9]));
}

#[test]
fn fan_graph_for_k_one() {
    let g = json(&run(&["regular", "--k", "1", "--n", "5"]));
    assert_eq!(labels(&g).len(), 5);
}

#[test]
fn worked_graph_has_six_matchings() {
    let report = json(&run(&["dimers", WORKED, "--subset", "256"]));
    assert_eq!(report["matchings"].as_array().unwrap().len(), 6);
    assert_eq!(
        report["scaled_partition_function"]
            .as_array()
            .unwrap()
            .len(),
        6
    );
}

#[test]
fn regular_star_subset_has_one_matching() {
    // M_{3,7}(1,2) = {1, 5, 6}
    let report = json(&run(&[
        "dimers", "--k", "3", "--n", "7", "--star", "--subset", "1,5,6",
    ]));
    assert_eq!(report["matchings"].as_array().unwrap().len(), 1);
}

#[test]
fn wrong_subset_size_is_an_input_error() {
    let out = run(&["dimers", WORKED, "--subset", "25"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("size"));
}

#[test]
fn bad_arguments_exit_with_three() {
    assert_eq!(run(&["verify", "nope", "--n", "5"]).status.code(), Some(3));
    assert_eq!(
        run(&["regular", "--k", "5", "--n", "3"]).status.code(),
        Some(3)
    );
    assert_eq!(run(&["labels"]).status.code(), Some(3));
    assert_eq!(
        run(&["labels", "/nonexistent/graph.json"]).status.code(),
        Some(3)
    );
}

#[test]
fn empty_script_is_the_identity_and_a_double_move_restores_labels() {
    let dir = tempfile::tempdir().unwrap();
    let start = json(&run(&["moves", "--k", "3", "--n", "6"]));
    let empty = write(dir.path(), "empty.txt", "# nothing\n");
    let same = json(&run(&["moves", "--k", "3", "--n", "6", "--script", &empty]));
    assert_eq!(same, start);

    let flipped = json(&run(&[
        "moves", "--k", "3", "--n", "6", "--random", "1", "--seed", "4",
    ]));
    let before = labels(&start);
    let new: Vec<Vec<u64>> = labels(&flipped)
        .into_iter()
        .filter(|l| !before.contains(l))
        .collect();
    assert_eq!(new.len(), 1);
    let text: Vec<String> = new[0].iter().map(|x| x.to_string()).collect();
    let graph = write(dir.path(), "flipped.json", &flipped.to_string());
    let script = write(
        dir.path(),
        "back.txt",
        &format!("quad {}\n", text.join(",")),
    );
    let back = json(&run(&["moves", &graph, "--script", &script]));
    assert_eq!(labels(&back), before);
}

#[test]
fn blow_up_then_blow_down_preserves_labels() {
    let dir = tempfile::tempdir().unwrap();
    let start = json(&run(&["moves", "--k", "3", "--n", "6"]));
    let n_vertices = start["vertices"].as_array().unwrap().len();
    let v = start["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .position(|v| v["boundary"].is_null() && v["rotation"].as_array().unwrap().len() == 3)
        .unwrap();
    let script = write(
        dir.path(),
        "blow.txt",
        &format!("blowup {v} 0 1\nblowdown {n_vertices}\n"),
    );
    let out = json(&run(&[
        "moves", "--k", "3", "--n", "6", "--script", &script,
    ]));
    assert_eq!(labels(&out), labels(&start));
}

#[test]
fn inapplicable_move_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let script = write(dir.path(), "bad.txt", "quad 123\n");
    let out = run(&["moves", "--k", "3", "--n", "6", "--script", &script]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn random_moves_are_reproducible_and_verify() {
    let args = [
        "moves", "--k", "3", "--n", "7", "--random", "20", "--seed", "11",
    ];
    let a = run(&args);
    assert_eq!(a.stdout, run(&args).stdout);
    let dir = tempfile::tempdir().unwrap();
    let graph = write(
        dir.path(),
        "g.json",
        std::str::from_utf8(&a.stdout).unwrap(),
    );
    let lbl = json(&run(&["labels", &graph]));
    assert_eq!(lbl["faces"].as_array().unwrap().len(), 3 * 4 + 1);
    assert_eq!(
        lbl["trip_permutation"],
        serde_json::json!([4, 5, 6, 7, 1, 2, 3])
    );
}

#[test]
fn verify_suites_pass_and_are_deterministic() {
    for (suite, k, n) in [
        ("main", "3", "6"),
        ("formula", "3", "8"),
        ("bfz", "3", "7"),
        ("twist2", "2", "5"),
    ] {
        let args = ["verify", suite, "--k", k, "--n", n, "--seed", "9"];
        let a = run(&args);
        let report = json(&a);
        assert_eq!(report["checked"], report["passed"], "{suite}");
        assert!(report["counterexample"].is_null());
        assert_eq!(a.stdout, run(&args).stdout, "{suite}");
    }
}

#[test]
fn out_and_log_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.dot");
    let log = dir.path().join("log.jsonl");
    let status = run(&[
        "export-dot",
        WORKED,
        "--quiver",
        "--out",
        out.to_str().unwrap(),
        "--log",
        log.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    assert!(std::fs::read_to_string(&out)
        .unwrap()
        .starts_with("digraph quiver"));
    let events: Vec<Value> = std::fs::read_to_string(&log)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(events.last().unwrap()["event"], "done");

    let graph_dot = run(&["export-dot", WORKED]);
    assert!(String::from_utf8_lossy(&graph_dot.stdout).contains("[235]"));
    let quiver = json(&run(&["quiver", WORKED]));
    assert_eq!(quiver["vertices"].as_array().unwrap().len(), 10);
}
