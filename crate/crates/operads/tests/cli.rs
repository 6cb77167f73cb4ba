//! End-to-end runs of the command-line binary: output shapes and the
//! exit-code contract (0 success, 1 verification failure, 2 usage error).

use std::process::{Command, Output};

use operads::nops::FinNOperad;
use operads::symops::{FinSymOperad, Flavor};
use operads::trees::all_trees_by_nodes;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_operads"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn trees_lists_the_four_small_ordinals() {
    let out = run(&["trees", "--n", "1", "--max-tips", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# 4 trees"));
    assert_eq!(text.lines().count(), 5);
    assert!(text.contains("1; 3; rho_0=[1,1,1]"));
}

#[test]
fn trees_without_bounds_is_a_usage_error() {
    let out = run(&["trees", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommands_are_usage_errors() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pi0_counts_label_orders_with_stabilization() {
    let out = run(&[
        "pi0", "--n", "1", "--k", "3", "--bound", "4", "--depth", "5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("= 6 over"), "{text}");
    assert!(text.contains("stabilized"), "{text}");
    assert!(text.contains("vertex bound 4"), "{text}");
}

#[test]
fn sym_reports_the_terminal_class_count() {
    let out = run(&[
        "sym", "--n", "1", "--k", "2", "--bound", "3", "--depth", "3",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("(2 represented)"));
}

#[test]
fn sym_reads_operad_tables_from_json() {
    // Desymmetrised permutations at arity two: the colimit recovers
    // 2! * |A_2| = 4 represented classes.
    let sym = FinSymOperad::permutation_operad(2, Flavor::Right);
    let des = FinNOperad::desymmetrise(&sym, 1, &all_trees_by_nodes(1, 3)).unwrap();
    let dir = std::env::temp_dir().join("operads-cli-sym");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("perm2.json");
    std::fs::write(&path, serde_json::to_string_pretty(&des).unwrap()).unwrap();

    let out = run(&[
        "sym",
        "--input",
        path.to_str().unwrap(),
        "--n",
        "1",
        "--k",
        "2",
        "--bound",
        "3",
        "--depth",
        "3",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("(4 represented)"), "{}", stdout(&out));

    let mismatched = run(&["sym", "--input", path.to_str().unwrap(), "--n", "2"]);
    assert_eq!(mismatched.status.code(), Some(2));
}

#[test]
fn verify_names_the_broken_diagram_in_corrupted_tables() {
    let sym = FinSymOperad::permutation_operad(2, Flavor::Right);
    let mut des = FinNOperad::desymmetrise(&sym, 1, &all_trees_by_nodes(1, 3)).unwrap();
    // Point one multiplication at the wrong result.
    let (_, table) = des.mult.iter_mut().last().unwrap();
    let (key, &value) = table.iter().next().unwrap();
    let key = key.clone();
    table.insert(key, 1 - value);

    let dir = std::env::temp_dir().join("operads-cli-verify");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("corrupt.json");
    std::fs::write(&path, serde_json::to_string_pretty(&des).unwrap()).unwrap();

    let out = run(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("fails"), "{}", stdout(&out));
}

#[test]
fn verify_accepts_clean_tables() {
    let sym = FinSymOperad::permutation_operad(2, Flavor::Substitution);
    let dir = std::env::temp_dir().join("operads-cli-clean");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("perm.json");
    std::fs::write(&path, serde_json::to_string_pretty(&sym).unwrap()).unwrap();

    let out = run(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("0 violations"));
}

#[test]
fn quick_suites_pass_at_small_bounds() {
    let out = run(&["verify", "--suite", "pisigma", "--n", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("PASS pisigma"));

    let out = run(&["verify", "--suite", "factorize"]);
    assert!(out.status.success());

    let out = run(&["verify", "--suite", "freeop"]);
    assert!(out.status.success());
}

#[test]
fn nerve_matches_at_degree_zero() {
    let out = run(&["nerve", "--n", "1", "--k", "2", "--bound", "2", "--depth", "0"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("shape-weighted 8, symmetrised 8 (match)"));
}

#[test]
fn dot_outputs_are_wellformed() {
    let out = run(&["dot", "--what", "mposet", "--n", "2", "--k", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("digraph mposet_n2_k2 {"));
    assert!(text.trim_end().ends_with('}'));

    let out = run(&[
        "dot", "--n", "1", "--k", "1", "--bound", "2", "--depth", "2",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("digraph category_n1_k1 {"));
}
