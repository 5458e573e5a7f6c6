use std::path::PathBuf;
use std::process::{Command, Output};

use cwcolor::{instantiate_builtin, parse_expression, parse_graph, validate, verify_coloring, Builtin, WeightValue};
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cwcolor")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn mis_on_p3() {
    let o = run(&["solve", "--problem", "mis", "--expr", &fixture("p3.cwe")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn two_coloring_k3_is_infeasible_but_succeeds() {
    let o = run(&["solve", "--problem", "kcoloring", "--k", "2", "--expr", &fixture("k3.cwe")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "INFEASIBLE\n");
}

#[test]
fn compare_sweep_passes() {
    let o = run(&["compare", "--max-n", "5", "--problems", "mis,kcoloring3,kroman2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("0 mismatches"));
}

#[test]
fn compare_covers_drivers() {
    let o = run(&["compare", "--max-n", "4", "--problems", "pds,quasi-clique,community,global-kroman1"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn witness_lines_name_every_vertex() {
    let o = run(&["solve", "--problem", "mis", "--expr", &fixture("p3.cwe"), "--coloring"]);
    assert_eq!(stdout(&o), "2\nv1 1\nv2 0\nv3 1\n");
}

#[test]
fn json_round_trips_through_the_verifier() {
    for (id, spec) in
        [("kroman2", Builtin::KRoman { k: 2 }), ("mds", Builtin::MinDominatingSet), ("mis", Builtin::MaxIndependentSet)]
    {
        let o = run(&["solve", "--problem", id, "--expr", &fixture("c4.cwe"), "--json", "--coloring"]);
        assert_eq!(code(&o), 0);
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["problem"], id);
        for key in ["nodes", "memo_entries", "elapsed_ms"] {
            assert!(v["stats"][key].is_number(), "{key} missing");
        }
        let (g, _) = parse_expression(&std::fs::read_to_string(fixture("c4.cwe")).unwrap()).unwrap().realize();
        let m = instantiate_builtin(&spec, &g).unwrap();
        let coloring: Vec<usize> = (0..g.vertex_count())
            .map(|i| {
                let name = v["coloring"][g.name(i)].as_str().unwrap();
                m.colors().iter().position(|c| c == name).unwrap()
            })
            .collect();
        let weight = WeightValue::Finite(v["weight"].as_i64().unwrap());
        assert_eq!(verify_coloring(&m, &g, &coloring), Ok(weight));
    }
}

#[test]
fn json_marks_infeasible() {
    let o = run(&["solve", "--problem", "kcoloring2", "--expr", &fixture("k3.cwe"), "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["weight"], "infeasible");
    assert!(v.get("coloring").is_none());
}

#[test]
fn oracle_mirrors_solve() {
    for problem in ["mis", "mds", "odd-ds", "kroman1", "kcoloring3"] {
        let dp = run(&["solve", "--problem", problem, "--expr", &fixture("c4.cwe")]);
        let bf = run(&["oracle", "--problem", problem, "--expr", &fixture("c4.cwe")]);
        assert_eq!(stdout(&dp), stdout(&bf), "{problem}");
    }
    let bf = run(&["oracle", "--problem", "mis", "--graph", &fixture("p3.graph")]);
    assert_eq!(stdout(&bf), "2\n");
}

#[test]
fn drivers_on_c4() {
    let dp = run(&["solve", "--problem", "pds", "--expr", &fixture("c4.cwe")]);
    assert_eq!(stdout(&dp), "2\n");
    let bf = run(&["oracle", "--problem", "pds", "--expr", &fixture("c4.cwe")]);
    assert_eq!(stdout(&bf), "2\n");
    let req = run(&[
        "solve",
        "--problem",
        "pds",
        "--expr",
        &fixture("c4.cwe"),
        "--required",
        &fixture("required.txt"),
        "--coloring",
    ]);
    assert!(stdout(&req).lines().any(|l| l == "v1 S"), "{}", stdout(&req));
    let q = run(&["solve", "--problem", "quasi-clique", "--gamma", "1", "--expr", &fixture("c4.cwe")]);
    assert_eq!(stdout(&q), "2\n");
    let c = run(&["solve", "--problem", "community", "--k", "2", "--balanced", "--expr", &fixture("c4.cwe")]);
    assert_eq!(stdout(&c), "0\n");
    let r = run(&["solve", "--problem", "global-kroman", "--k", "1", "--expr", &fixture("c4.cwe")]);
    let b = run(&["oracle", "--problem", "global-kroman", "--k", "1", "--expr", &fixture("c4.cwe")]);
    assert_eq!(stdout(&r), stdout(&b));
}

#[test]
fn fixed_sizes_select_one_instance() {
    let o = run(&["solve", "--problem", "pds", "--sizes", "3", "--expr", &fixture("c4.cwe")]);
    assert_eq!(stdout(&o), "INFEASIBLE\n");
    let o = run(&["solve", "--problem", "community", "--sizes", "2,2", "--expr", &fixture("c4.cwe")]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn graph_flag_checks_realization() {
    let ok = run(&["solve", "--problem", "mis", "--expr", &fixture("p3.cwe"), "--graph", &fixture("p3.graph")]);
    assert_eq!(code(&ok), 0);
    let bad = run(&["solve", "--problem", "mis", "--expr", &fixture("p3.cwe"), "--graph", &fixture("k3.graph")]);
    assert_eq!(code(&bad), 4);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["solve", "--problem", "mis", "--expr", &fixture("unbalanced.cwe")])), 2);
    assert_eq!(code(&run(&["solve", "--problem", "nope", "--expr", &fixture("p3.cwe")])), 2);
    assert_eq!(code(&run(&["solve", "--problem", "kroman", "--expr", &fixture("p3.cwe")])), 2);
    assert_eq!(code(&run(&["solve", "--problem", "mis", "--expr", &fixture("redundant.cwe")])), 3);
    assert_eq!(code(&run(&["oracle", "--problem", "kroman3", "--expr", &fixture("c4.cwe"), "--budget", "10"])), 5);
}

#[test]
fn validate_reports_kinds() {
    let o = run(&["validate", &fixture("redundant.cwe")]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("redundant-join"));
    let o = run(&["validate", "(k 3 (rename 1 3 (node a 1)))"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("rename-into-empty"));
    let o = run(&["validate", &fixture("c4.cwe")]);
    assert_eq!(code(&o), 0);
}

#[test]
fn family_and_realize_agree() {
    let fam = run(&["family", "complete_bipartite", "2", "3"]);
    assert_eq!(code(&fam), 0);
    let text = stdout(&fam);
    let e = parse_expression(&text).unwrap();
    assert!(validate(&e).ok());
    let real = run(&["realize", text.trim()]);
    let g = parse_graph(&stdout(&real)).unwrap();
    assert_eq!(g.vertex_count(), 5);
    assert_eq!(g.edge_count(), 6);
    assert!(e.check_realizes(&g));
    assert_eq!(code(&run(&["family", "star", "3"])), 2);
}
