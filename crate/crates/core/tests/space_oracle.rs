mod common;

use bvdef::models::Structure;
use bvdef::space::{Mode, Space};
use bvdef::syntax::{parse_formula, x_vars};
use bvdef_oracle::{self as oracle, Labelled, OraclePoint};

fn unary_oracle() -> Vec<Labelled> {
    oracle::iso_classes(&[1], 2, |_| true)
}

fn graph_oracle() -> Vec<Labelled> {
    oracle::iso_classes(&[2], 3, |m| {
        (0..m.size).all(|a| !m.holds(0, &[a, a]))
            && (0..m.size).all(|a| (0..m.size).all(|b| m.holds(0, &[a, b]) == m.holds(0, &[b, a])))
    })
}

fn to_labelled(m: &Structure) -> Labelled {
    let arities: Vec<usize> = m.signature().relations().iter().map(|r| r.arity).collect();
    let tables = arities
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            (0..m.size().pow(a as u32))
                .map(|code| {
                    let mut t = vec![0; a];
                    let mut c = code;
                    for slot in t.iter_mut().rev() {
                        *slot = c % m.size();
                        c /= m.size();
                    }
                    m.relation_holds(i, &t)
                })
                .collect()
        })
        .collect();
    Labelled { size: m.size(), arities, tables }
}

/// Library point index → oracle point, through an explicit isomorphism of
/// the library model onto the oracle representative.
fn match_points(space: &Space, models: &[Labelled], points: &[OraclePoint]) -> Vec<usize> {
    let isos: Vec<(usize, Vec<usize>)> = space
        .models()
        .iter()
        .map(|m| {
            let l = to_labelled(m);
            models
                .iter()
                .enumerate()
                .find_map(|(i, o)| {
                    oracle::permutations(l.size).into_iter().find(|t| l.relabel(t) == *o).map(|t| (i, t))
                })
                .expect("library model has an oracle counterpart")
        })
        .collect();
    let auts: Vec<Vec<Vec<usize>>> = models.iter().map(oracle::automorphisms).collect();
    space
        .points()
        .iter()
        .map(|p| {
            let (om, theta) = &isos[p.model];
            let alpha: Vec<usize> = p.enumeration.as_slice().iter().map(|&a| theta[a]).collect();
            let c = oracle::canonical(&alpha, &auts[*om]);
            points.iter().position(|q| q.model == *om && q.alpha == c).expect("oracle point")
        })
        .collect()
}

#[test]
fn e1_counts_match_oracle() {
    let models = unary_oracle();
    assert_eq!(models.len(), 5);
    for (mode, balanced, expected) in [(Mode::Balanced, true, 14), (Mode::Unbalanced, false, 30)] {
        let pts = oracle::points(&models, 4, balanced);
        assert_eq!(pts.len(), expected);
        let space = common::e1(mode);
        assert_eq!(space.models().len(), 5);
        assert_eq!(space.len(), expected);
        let mut matched = match_points(&space, &models, &pts);
        matched.sort_unstable();
        matched.dedup();
        assert_eq!(matched.len(), expected, "point matching is a bijection");
    }
}

#[test]
fn e1_clopens_match_oracle() {
    let models = unary_oracle();
    let pts = oracle::points(&models, 4, true);
    let space = common::e1(Mode::Balanced);
    let matched = match_points(&space, &models, &pts);
    let sig = space.class().signature().clone();

    let r0 = |p: &OraclePoint| models[p.model].holds(0, &[p.alpha[0]]);
    let eq01 = |p: &OraclePoint| p.alpha[0] == p.alpha[1];
    let some_r = |p: &OraclePoint| (0..models[p.model].size).any(|a| models[p.model].holds(0, &[a]));
    assert_eq!(pts.iter().filter(|p| r0(p)).count(), 7);
    assert_eq!(pts.iter().filter(|p| eq01(p)).count(), 6);
    assert_eq!(pts.iter().filter(|p| some_r(p)).count(), 10);

    type Case<'a> = (&'a str, Vec<usize>, &'a dyn Fn(&OraclePoint) -> bool);
    let cases: [Case; 3] = [("r(x1)", vec![0], &r0), ("x1 = x2", vec![0, 1], &eq01), ("ex x r(x)", vec![], &some_r)];
    for (text, xi, truth) in cases {
        let f = parse_formula(text, &sig).unwrap();
        let value = space.evaluate_bound(&f, &x_vars(xi.len()), &xi).unwrap();
        for (x, &o) in matched.iter().enumerate() {
            assert_eq!(value.contains(x), truth(&pts[o]), "{text} at point {x}");
        }
    }
}

#[test]
fn graph_counts_match_oracle() {
    let models = graph_oracle();
    assert_eq!(models.len(), 7);
    let count = oracle::point_count(&models, 12, true);
    assert_eq!(count, 47125);
    let space = common::graphs();
    assert_eq!(space.models().len(), 7);
    assert_eq!(space.len(), count);
}
