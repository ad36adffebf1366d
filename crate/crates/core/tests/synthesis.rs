mod common;

use bvdef::action::{check_invariance, symmetric_generators};
use bvdef::corpus::{corpus, CorpusConfig};
use bvdef::predicates::{
    atom_decomposition, check_extensionality, invariant_atoms, predicate_from_formula, union_of_atoms, Predicate,
};
use bvdef::space::{Mode, Space};
use bvdef::syntax::{parse_formula, y_vars};
use bvdef::synthesis::{
    check_transport, element_classes, eta_cover, factors_through_elements, local_formula, synthesize_definition,
    verify_definition, SynthesisError,
};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn all_unions(space: &Space, arity: usize) -> Vec<Predicate> {
    let atoms = invariant_atoms(space, arity).unwrap();
    (0u64..1 << atoms.len())
        .map(|mask| {
            let selection: Vec<usize> = (0..atoms.len()).filter(|i| mask >> i & 1 == 1).collect();
            union_of_atoms(space, arity, &atoms, &selection).unwrap()
        })
        .collect()
}

#[test]
fn every_unary_invariant_predicate_is_defined() {
    let space = common::e1(Mode::Balanced);
    let preds = all_unions(&space, 1);
    assert_eq!(preds.len(), 64);
    for p in &preds {
        let result = synthesize_definition(&space, p).unwrap();
        assert!(result.verified, "{}", result.psi);
    }
}

#[test]
fn every_binary_invariant_predicate_is_defined() {
    let space = common::e1(Mode::Balanced);
    for p in all_unions(&space, 2) {
        let result = synthesize_definition(&space, &p).unwrap();
        assert!(result.verified, "{}", result.psi);
    }
}

#[test]
fn corpus_round_trip() {
    for (space, arity) in [(common::e1(Mode::Balanced), 1), (common::e1(Mode::Balanced), 2), (common::pointed_map(), 1)]
    {
        let sig = space.class().signature().clone();
        for phi in corpus(&sig, &CorpusConfig::new(y_vars(arity)), 50, 5) {
            let p = predicate_from_formula(&space, &phi, arity).unwrap();
            let result = synthesize_definition(&space, &p).unwrap();
            assert!(result.verified, "{phi}");
            assert!(verify_definition(&space, &p, &result.psi).unwrap().holds, "{phi}");
        }
    }
}

#[test]
fn corpus_predicates_are_invariant() {
    for space in [common::e1(Mode::Balanced), common::e1(Mode::Unbalanced), common::graphs()] {
        let sig = space.class().signature().clone();
        let gens = symmetric_generators(space.k()).unwrap();
        for phi in corpus(&sig, &CorpusConfig::new(y_vars(1)), 50, 8) {
            let p = predicate_from_formula(&space, &phi, 1).unwrap();
            assert!(check_invariance(&space, &p, &gens).unwrap().invariant, "{phi}");
            assert!(check_extensionality(&space, &p).unwrap().holds, "{phi}");
        }
    }
}

fn local_and_cover_checks(space: &Space, p: &Predicate) {
    for r in 0..p.tuple_count() {
        let eta0 = p.tuple(r);
        let target = p.get(&eta0);
        for x in 0..space.len() {
            let u = if target.contains(x) { target.clone() } else { target.complement() };
            let datum = local_formula(space, x, &eta0, &u).unwrap();
            assert!(datum.extent.contains(x) && datum.extent.is_subset(&u), "point {x}, {eta0:?}");
            assert_eq!(check_transport(space, &datum).unwrap(), None, "point {x}, {eta0:?}");
        }
        let cover = eta_cover(space, p, &eta0).unwrap();
        assert!(cover.all_checks_hold(), "{eta0:?}");
    }
}

#[test]
fn local_formulas_and_covers_hold() {
    let space = common::e1(Mode::Balanced);
    let sig = space.class().signature().clone();
    local_and_cover_checks(&space, &predicate_from_formula(&space, &parse_formula("r(y)", &sig).unwrap(), 1).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for arity in [1, 2] {
        let atoms = invariant_atoms(&space, arity).unwrap();
        for _ in 0..3 {
            let mut selection = sample(&mut rng, atoms.len(), atoms.len() / 2).into_vec();
            selection.sort_unstable();
            local_and_cover_checks(&space, &union_of_atoms(&space, arity, &atoms, &selection).unwrap());
        }
    }
}

fn fibre_size_predicate(space: &Space) -> Predicate {
    Predicate::from_fn(space, 1, |t| {
        let set = (0..space.len()).filter(|&x| {
            let alpha = &space.point(x).enumeration;
            alpha.fibre(alpha.image(t[0])).len() == 1
        });
        bvdef::space::ClopenSet::from_indices(space.len(), set)
    })
    .unwrap()
}

#[test]
fn fibre_size_predicate_is_not_definable() {
    let space = common::e1(Mode::Unbalanced);
    let q = fibre_size_predicate(&space);
    assert!(check_extensionality(&space, &q).unwrap().holds);
    assert!(check_invariance(&space, &q, &symmetric_generators(4).unwrap()).unwrap().invariant);
    let result = synthesize_definition(&space, &q).unwrap();
    assert!(!result.verified);
    assert!(factors_through_elements(&space, &q).unwrap().is_some());
    // no union of element classes equals q
    let classes = element_classes(&space, 1).unwrap();
    assert_eq!(atom_decomposition(&q, &classes), None);
    for mask in 0u64..1 << classes.len() {
        let selection: Vec<usize> = (0..classes.len()).filter(|i| mask >> i & 1 == 1).collect();
        assert_ne!(union_of_atoms(&space, 1, &classes, &selection).unwrap(), q);
    }
}

#[test]
fn refuses_non_invariant_predicate() {
    let space = common::e1(Mode::Balanced);
    let p = Predicate::from_fn(&space, 1, |t| space.index_equality(t[0], 0).unwrap()).unwrap();
    assert!(matches!(synthesize_definition(&space, &p), Err(SynthesisError::NotInvariant(_))));
}
