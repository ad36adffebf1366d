use std::collections::HashMap;

use serde::Serialize;
use serde_json::{json, Value};

use super::cover::{global_family, FamilyMember};
use super::SynthesisError;
use crate::action::{check_invariance, symmetric_generators};
use crate::models::{tuple_count, tuple_unrank};
use crate::predicates::{check_extensionality, predicate_complement, InvariantAtom, Predicate, PredicateError};
use crate::space::{ClopenSet, Space};
use crate::syntax::{y_vars, Formula};

/// A point where `⟦ψ(m)⟧` and `p(m)` differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub tuple: Vec<usize>,
    pub point: usize,
    /// Whether the point belongs to `p(m)`.
    pub in_predicate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationRow {
    pub tuple: Vec<usize>,
    pub expected: usize,
    pub actual: usize,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub holds: bool,
    /// Least tuple, then least point.
    pub mismatch: Option<Mismatch>,
    pub rows: Vec<VerificationRow>,
}

/// Exact comparison of `⟦ψ(m)⟧` with `p(m)` at every tuple.
pub fn verify_definition(space: &Space, p: &Predicate, psi: &Formula) -> Result<VerificationReport, SynthesisError> {
    p.check_space(space)?;
    let vars = y_vars(p.arity());
    if let Some(var) = psi.free_variables().into_iter().find(|v| !vars.contains(v)) {
        return Err(PredicateError::FreeVariable { var, allowed: vars }.into());
    }
    let mut rows = Vec::with_capacity(p.tuple_count());
    let mut mismatch = None;
    for (r, expected) in p.entries().iter().enumerate() {
        let tuple = p.tuple(r);
        let actual = space.evaluate_bound(psi, &vars, &tuple)?;
        let equal = actual == *expected;
        if !equal && mismatch.is_none() {
            let extra = actual.first_outside(expected);
            let missing = expected.first_outside(&actual);
            let (point, in_predicate) = match (extra, missing) {
                (Some(a), Some(b)) if b < a => (b, true),
                (Some(a), _) => (a, false),
                (None, Some(b)) => (b, true),
                (None, None) => unreachable!("sets differ"),
            };
            mismatch = Some(Mismatch { tuple: tuple.clone(), point, in_predicate });
        }
        rows.push(VerificationRow { tuple, expected: expected.len(), actual: actual.len(), equal });
    }
    Ok(VerificationReport { holds: mismatch.is_none(), mismatch, rows })
}

/// Output of [`synthesize_definition`].
#[derive(Debug, Clone, Serialize)]
pub struct SynthesisResult {
    pub arity: usize,
    pub space_hash: String,
    #[serde(serialize_with = "crate::synthesis::serialize_formula")]
    pub psi: Formula,
    pub family: Vec<FamilyMember>,
    pub complement_family: Vec<FamilyMember>,
    /// Indices into `family` forming `ψ`, in selection order.
    pub selected: Vec<usize>,
    pub selected_complement: Vec<usize>,
    /// The selected formulas of both families cover every (point, tuple).
    pub cover_complete: bool,
    pub family_exact: bool,
    pub complement_family_exact: bool,
    pub verified: bool,
    pub mismatch: Option<Mismatch>,
    pub verification: Vec<VerificationRow>,
}

impl SynthesisResult {
    pub fn to_json(&self) -> Value {
        let mut v = json!(self);
        v["family_size"] = json!(self.family.len());
        v["complement_family_size"] = json!(self.complement_family.len());
        v
    }
}

/// Bit `r * |X| + x` stands for the pair (point x, tuple of rank r).
fn incidence(space: &Space, member: &FamilyMember) -> ClopenSet {
    let n = space.len();
    let pairs = member.values.iter().enumerate().flat_map(|(r, set)| set.iter().map(move |x| r * n + x));
    ClopenSet::from_indices(n * member.values.len(), pairs)
}

/// Greedy set cover: repeatedly take the candidate covering the most
/// uncovered pairs, earliest on ties. Returns the chosen indices and whether
/// everything got covered.
fn greedy_cover(universe: usize, candidates: &[ClopenSet]) -> (Vec<usize>, bool) {
    let mut uncovered = ClopenSet::full(universe);
    let mut chosen = Vec::new();
    while !uncovered.is_empty() {
        let best = candidates
            .iter()
            .enumerate()
            .map(|(i, c)| (c.intersection(&uncovered).len(), i))
            .fold((0, usize::MAX), |acc, (gain, i)| if gain > acc.0 { (gain, i) } else { acc });
        if best.0 == 0 {
            return (chosen, false);
        }
        chosen.push(best.1);
        uncovered = uncovered.difference(&candidates[best.1]);
    }
    (chosen, true)
}

/// Builds the families for `p` and its complement, extracts a finite cover of
/// all (point, tuple) pairs, emits the disjunction of the selected formulas
/// from the family for `p` and verifies it exactly.
///
/// Refuses predicates that are not extensional or not invariant under the
/// generators. A failed verification is a result, not an error.
pub fn synthesize_definition(space: &Space, p: &Predicate) -> Result<SynthesisResult, SynthesisError> {
    p.check_space(space)?;
    let ext = check_extensionality(space, p)?;
    if let Some(v) = ext.violation {
        return Err(SynthesisError::NotExtensional(v));
    }
    let gens = symmetric_generators(space.k())?;
    let inv = check_invariance(space, p, &gens)?;
    if let Some(v) = inv.violation {
        return Err(SynthesisError::NotInvariant(v));
    }

    let family = global_family(space, p)?;
    let complement = global_family(space, &predicate_complement(p))?;
    let candidates: Vec<ClopenSet> =
        family.members.iter().chain(&complement.members).map(|m| incidence(space, m)).collect();
    let universe = space.len() * p.tuple_count();
    let (chosen, cover_complete) = greedy_cover(universe, &candidates);
    let split = family.members.len();
    let selected: Vec<usize> = chosen.iter().copied().filter(|&i| i < split).collect();
    let selected_complement: Vec<usize> = chosen.iter().filter(|&&i| i >= split).map(|&i| i - split).collect();

    let psi = Formula::or(selected.iter().map(|&i| family.members[i].psi.clone()));
    let report = verify_definition(space, p, &psi)?;
    Ok(SynthesisResult {
        arity: p.arity(),
        space_hash: space.hash().to_string(),
        psi,
        selected,
        selected_complement,
        cover_complete,
        family_exact: family.exact,
        complement_family_exact: complement.exact,
        verified: report.holds,
        mismatch: report.mismatch,
        verification: report.rows,
        family: family.members,
        complement_family: complement.members,
    })
}

/// Classes of (point, tuple) pairs sharing the model and the automorphism
/// orbit of the element tuple `α(m)`. Every formula's predicate is a union
/// of these classes, and every union is defined by a disjunction of complete
/// descriptions, so they are exactly the definable predicates.
pub fn element_classes(space: &Space, arity: usize) -> Result<Vec<InvariantAtom>, SynthesisError> {
    if arity == 0 {
        return Err(PredicateError::ZeroArity.into());
    }
    let k = space.k();
    let tuples = tuple_count(k, arity);
    let mut index: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    for x in 0..space.len() {
        let point = space.point(x);
        let auts = space.model_automorphisms(point.model);
        for r in 0..tuples {
            let elems = point.enumeration.images(&tuple_unrank(r, k, arity));
            let orbit_min = auts
                .iter()
                .map(|theta| elems.iter().map(|&a| theta[a]).collect::<Vec<_>>())
                .min()
                .expect("identity automorphism");
            let next = classes.len();
            let c = *index.entry((point.model, orbit_min)).or_insert(next);
            if c == next {
                classes.push(Vec::new());
            }
            classes[c].push((x, r));
        }
    }
    Ok(classes.into_iter().map(|members| InvariantAtom::from_members(arity, members)).collect())
}

/// Two (point, tuple) pairs in the same element class on which `p` differs,
/// or `None` if `p` factors through the classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorConflict {
    pub inside: (usize, Vec<usize>),
    pub outside: (usize, Vec<usize>),
}

pub fn factors_through_elements(space: &Space, p: &Predicate) -> Result<Option<FactorConflict>, SynthesisError> {
    p.check_space(space)?;
    for class in element_classes(space, p.arity())? {
        let inside = class.members().iter().find(|&&(x, r)| p.entries()[r].contains(x));
        let outside = class.members().iter().find(|&&(x, r)| !p.entries()[r].contains(x));
        if let (Some(&(a, ra)), Some(&(b, rb))) = (inside, outside) {
            return Ok(Some(FactorConflict { inside: (a, p.tuple(ra)), outside: (b, p.tuple(rb)) }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::enumerate_models;
    use crate::predicates::{atom_decomposition, invariant_atoms, predicate_from_formula, union_of_atoms};
    use crate::space::Mode;
    use crate::syntax::{parse_formula, Signature, Theory};

    fn space(mode: Mode) -> Space {
        let sig = Signature::empty().with_relation("r", 1).unwrap();
        Space::build(enumerate_models(&Theory::empty(sig), 2).unwrap(), 4, mode).unwrap()
    }

    fn formula(s: &Space, f: &str) -> Formula {
        parse_formula(f, s.class().signature()).unwrap()
    }

    #[test]
    fn verify_examples() {
        let s = space(Mode::Balanced);
        let p = predicate_from_formula(&s, &formula(&s, "r(y)"), 1).unwrap();
        assert!(verify_definition(&s, &p, &formula(&s, "r(y)")).unwrap().holds);
        let bad = verify_definition(&s, &p, &formula(&s, "~r(y)")).unwrap();
        assert!(!bad.holds);
        assert_eq!(bad.mismatch.unwrap().tuple, vec![0]);
    }

    #[test]
    fn synthesizes_relation() {
        let s = space(Mode::Balanced);
        let p = predicate_from_formula(&s, &formula(&s, "r(y)"), 1).unwrap();
        let result = synthesize_definition(&s, &p).unwrap();
        assert!(result.verified && result.cover_complete);
        assert!(verify_definition(&s, &p, &result.psi).unwrap().holds);
        assert_eq!(result.to_json()["verified"], json!(true));
    }

    #[test]
    fn size_two_or_relation() {
        let s = space(Mode::Balanced);
        let p = Predicate::from_fn(&s, 1, |t| {
            let members = (0..s.len()).filter(|&x| {
                let point = s.point(x);
                let m = s.model(point.model);
                m.size() == 1 || m.relation_holds(0, &[point.enumeration.image(t[0])])
            });
            ClopenSet::from_indices(s.len(), members)
        })
        .unwrap();
        assert!(verify_definition(&s, &p, &formula(&s, "r(y) | all x all z (x = z)")).unwrap().holds);
        let result = synthesize_definition(&s, &p).unwrap();
        assert!(result.verified);
    }

    #[test]
    fn refuses_non_invariant_input() {
        let s = space(Mode::Balanced);
        let p = Predicate::from_fn(&s, 1, |t| s.index_equality(t[0], 0).unwrap()).unwrap();
        assert!(matches!(synthesize_definition(&s, &p), Err(SynthesisError::NotInvariant(_))));
        let q = Predicate::from_fn(&s, 1, |t| if t[0] == 0 { s.full_set() } else { s.empty_set() }).unwrap();
        assert!(matches!(synthesize_definition(&s, &q), Err(SynthesisError::NotExtensional(_))));
    }

    #[test]
    fn unbalanced_fibre_predicate_is_not_definable() {
        let s = space(Mode::Unbalanced);
        let q = Predicate::from_fn(&s, 1, |t| {
            let members = (0..s.len()).filter(|&x| {
                let alpha = &s.point(x).enumeration;
                alpha.fibre(alpha.image(t[0])).len() == 1
            });
            ClopenSet::from_indices(s.len(), members)
        })
        .unwrap();
        let result = synthesize_definition(&s, &q).unwrap();
        assert!(!result.verified);
        assert!(result.mismatch.is_some());
        assert!(factors_through_elements(&s, &q).unwrap().is_some());
        let classes = element_classes(&s, 1).unwrap();
        assert_eq!(atom_decomposition(&q, &classes), None);
    }

    #[test]
    fn element_classes_match_atoms_in_balanced_mode() {
        let s = space(Mode::Balanced);
        let classes = element_classes(&s, 1).unwrap();
        let atoms = invariant_atoms(&s, 1).unwrap();
        assert_eq!(classes.len(), atoms.len());
        for (i, _) in classes.iter().enumerate() {
            let p = union_of_atoms(&s, 1, &classes, &[i]).unwrap();
            assert!(atom_decomposition(&p, &atoms).is_some());
        }
    }
}
