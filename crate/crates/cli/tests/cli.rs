use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bvdef::models::enumerate_models;
use bvdef::predicates::Predicate;
use bvdef::space::{ClopenSet, Mode, Space};
use bvdef::syntax::Theory;
use serde_json::Value;

fn theories() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../theories")
}

fn bvdef(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bvdef")).args(args).output().expect("run bvdef")
}

fn unary() -> String {
    theories().join("unary.fol").display().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn e1_args<'a>(cmd: &'a str, theory: &'a str, mode: &'a str) -> Vec<&'a str> {
    vec![cmd, "--theory", theory, "--max-size", "2", "--K", "4", "--mode", mode]
}

#[test]
fn models_lists_five_structures() {
    let out = bvdef(&["models", "--theory", &unary(), "--max-size", "2"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["count"], 5);
}

#[test]
fn eval_gives_seven_points() {
    let t = unary();
    let mut args = e1_args("eval", &t, "balanced");
    args.extend(["--formula", "r(x1)", "--xi", "0"]);
    let out = bvdef(&args);
    assert!(out.status.success());
    assert_eq!(json(&out)["points"].as_array().unwrap().len(), 7);
}

#[test]
fn export_then_synthesize_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    let p_str = p.display().to_string();
    let t = unary();
    let mut args = e1_args("eval", &t, "balanced");
    args.extend(["--formula", "r(y)", "--arity", "1", "--out", &p_str]);
    assert!(bvdef(&args).status.success());

    let mut args = e1_args("synthesize", &t, "balanced");
    args.extend(["--predicate", &p_str]);
    let out = bvdef(&args);
    assert_eq!(out.status.code(), Some(0));
    let result = json(&out);
    assert_eq!(result["verified"], true);

    let psi = result["psi"].as_str().unwrap().to_string();
    let mut args = e1_args("verify", &t, "balanced");
    args.extend(["--predicate", &p_str, "--formula", &psi]);
    assert_eq!(bvdef(&args).status.code(), Some(0));

    let mut args = e1_args("verify", &t, "balanced");
    args.extend(["--predicate", &p_str, "--formula", "~r(y)"]);
    assert_eq!(bvdef(&args).status.code(), Some(2));

    let mut args = e1_args("invariance", &t, "balanced");
    args.extend(["--predicate", &p_str, "--samples", "20", "--seed", "4"]);
    assert_eq!(bvdef(&args).status.code(), Some(0));
}

#[test]
fn outputs_are_deterministic() {
    let t = unary();
    let mut args = e1_args("atoms", &t, "balanced");
    args.extend(["--arity", "2"]);
    let a = bvdef(&args);
    let b = bvdef(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut args = e1_args("space", &t, "unbalanced");
    args.push("--points");
    assert_eq!(bvdef(&args).stdout, bvdef(&args).stdout);
}

#[test]
fn predicate_from_another_space_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    let p_str = p.display().to_string();
    let t = unary();
    let mut args = e1_args("eval", &t, "balanced");
    args.extend(["--formula", "r(y)", "--arity", "1", "--out", &p_str]);
    assert!(bvdef(&args).status.success());
    let mut args = e1_args("synthesize", &t, "unbalanced");
    args.extend(["--predicate", &p_str]);
    let out = bvdef(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("space"));
}

fn write_predicate(dir: &Path, p: &Predicate) -> String {
    let path = dir.join("q.json");
    p.save(&path).unwrap();
    path.display().to_string()
}

#[test]
fn non_invariant_and_undefinable_predicates_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let t = unary();
    let theory = Theory::load(theories().join("unary.fol")).unwrap();

    let space = Space::build(enumerate_models(&theory, 2).unwrap(), 4, Mode::Balanced).unwrap();
    let tied = Predicate::from_fn(&space, 1, |m| space.index_equality(m[0], 0).unwrap()).unwrap();
    let path = write_predicate(dir.path(), &tied);
    let mut args = e1_args("invariance", &t, "balanced");
    args.extend(["--predicate", &path]);
    assert_eq!(bvdef(&args).status.code(), Some(2));
    let mut args = e1_args("synthesize", &t, "balanced");
    args.extend(["--predicate", &path]);
    assert_eq!(bvdef(&args).status.code(), Some(2));

    let space = Space::build(enumerate_models(&theory, 2).unwrap(), 4, Mode::Unbalanced).unwrap();
    let q = Predicate::from_fn(&space, 1, |m| {
        ClopenSet::from_indices(
            space.len(),
            (0..space.len()).filter(|&x| {
                let alpha = &space.point(x).enumeration;
                alpha.fibre(alpha.image(m[0])).len() == 1
            }),
        )
    })
    .unwrap();
    let path = write_predicate(dir.path(), &q);
    let mut args = e1_args("synthesize", &t, "unbalanced");
    args.extend(["--predicate", &path]);
    let out = bvdef(&args);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["verified"], false);
}

#[test]
fn conservativity_battery_agrees() {
    let t = unary();
    let battery = theories().join("unary_battery.txt").display().to_string();
    let mut args = e1_args("conservativity", &t, "balanced");
    args.extend(["--sentences", &battery]);
    let out = bvdef(&args);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["entries"].as_array().unwrap().len(), 10);
}

#[test]
fn usage_errors_exit_1_and_help_exits_0() {
    assert_eq!(bvdef(&["eval", "--theory", &unary()]).status.code(), Some(1));
    assert_eq!(bvdef(&["--help"]).status.code(), Some(0));
    assert_eq!(bvdef(&["--version"]).status.code(), Some(0));
    let t = unary();
    let mut args = e1_args("eval", &t, "balanced");
    args.extend(["--formula", "r(x1", "--xi", "0"]);
    assert_eq!(bvdef(&args).status.code(), Some(1));
    assert_eq!(bvdef(&["models", "--theory", "/nonexistent.fol", "--max-size", "2"]).status.code(), Some(1));
}
