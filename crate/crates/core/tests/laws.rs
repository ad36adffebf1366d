mod common;

use bvdef::corpus::{corpus, CorpusConfig};
use bvdef::laws::{
    connective_laws, constant_function_laws, equality_laws, equivariance_checks, quantifier_laws, tautology_laws,
    translation_laws, LawReport,
};
use bvdef::space::{Mode, Space};
use bvdef::syntax::{x_vars, Formula};

fn formulas(space: &Space, seed: u64) -> Vec<Formula> {
    let fs = corpus(space.class().signature(), &CorpusConfig::new(x_vars(2)), 200, seed);
    assert!(fs.iter().all(|f| f.quantifier_depth() <= 2));
    fs
}

fn assert_all(reports: Vec<LawReport>) {
    for r in reports {
        assert!(r.passed(), "{r}");
    }
}

fn suite(space: &Space, bindings: &[Vec<usize>], seed: u64) {
    let fs = formulas(space, seed);
    assert_all(vec![
        connective_laws(space, &fs, bindings).unwrap(),
        quantifier_laws(space, &fs, bindings).unwrap(),
        tautology_laws(space, &fs, bindings).unwrap(),
        equality_laws(space).unwrap(),
        constant_function_laws(space).unwrap(),
        translation_laws(space, &fs, bindings).unwrap(),
    ]);
}

#[test]
fn e1_laws() {
    let space = common::e1(Mode::Balanced);
    let bindings: Vec<Vec<usize>> = (0..16).map(|c| vec![c / 4, c % 4]).collect();
    suite(&space, &bindings, 11);
}

#[test]
fn e1_unbalanced_laws() {
    let space = common::e1(Mode::Unbalanced);
    suite(&space, &[vec![0, 1], vec![2, 2]], 12);
}

#[test]
fn graph_laws() {
    let space = common::graphs();
    suite(&space, &[vec![0, 1], vec![5, 5], vec![11, 3]], 13);
}

#[test]
fn function_and_constant_laws() {
    let space = common::pointed_map();
    let bindings: Vec<Vec<usize>> = (0..16).map(|c| vec![c / 4, c % 4]).collect();
    suite(&space, &bindings, 14);
    assert!(constant_function_laws(&space).unwrap().checks > 200);
}

#[test]
fn equivariance_on_each_configuration() {
    for (space, seed) in [(common::e1(Mode::Balanced), 1), (common::graphs(), 2), (common::pointed_map(), 3)] {
        let fs = formulas(&space, 20 + seed);
        let report = equivariance_checks(&space, &fs, 2, 100, seed).unwrap();
        assert_eq!(report.checks, 100);
        assert!(report.passed(), "{report}");
    }
}

#[test]
fn distinct_points_are_separated() {
    // any two points differ on some ⟦φ(ξ)⟧ with φ an atom
    let space = common::e1(Mode::Balanced);
    let sig = space.class().signature().clone();
    let atoms =
        [bvdef::syntax::parse_formula("r(x1)", &sig).unwrap(), bvdef::syntax::parse_formula("x1 = x2", &sig).unwrap()];
    let mut values = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for f in &atoms {
                values.push(space.evaluate_bound(f, &x_vars(2), &[a, b]).unwrap());
            }
        }
    }
    for x in 0..space.len() {
        for y in x + 1..space.len() {
            assert!(values.iter().any(|v| v.contains(x) != v.contains(y)), "points {x} and {y}");
        }
    }
}
