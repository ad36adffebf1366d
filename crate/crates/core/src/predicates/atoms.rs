use std::collections::HashMap;

use petgraph::unionfind::UnionFind;

use super::{Predicate, PredicateError};
use crate::action::{symmetric_generators, ActionError, ActionMap};
use crate::models::{tuple_count, tuple_rank, tuple_unrank};
use crate::space::{ClopenSet, Space};

/// Default bound on the number of (point, tuple) pairs.
pub const DEFAULT_ATOM_CAP: u64 = 20_000_000;

/// A minimal nonempty set of (point, tuple) pairs closed under the index
/// action and under extensionality. Members are `(point, tuple rank)`,
/// sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantAtom {
    arity: usize,
    members: Vec<(usize, usize)>,
}

impl InvariantAtom {
    pub(crate) fn from_members(arity: usize, mut members: Vec<(usize, usize)>) -> Self {
        members.sort_unstable();
        Self { arity, members }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn members(&self) -> &[(usize, usize)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `m ↦ {x : (x, m) ∈ A}`.
    pub fn predicate(&self, space: &Space) -> Result<Predicate, PredicateError> {
        union_of_atoms(space, self.arity, std::slice::from_ref(self), &[0])
    }
}

pub fn invariant_atoms(space: &Space, arity: usize) -> Result<Vec<InvariantAtom>, PredicateError> {
    invariant_atoms_with_cap(space, arity, DEFAULT_ATOM_CAP)
}

/// Partition of all (point, tuple) pairs into the classes of the closure
/// under the generators of the symmetric group and under extensionality
/// moves `(x, m) ~ (x, m′)` for `x ∈ ⟦m = m′⟧`. Atoms are ordered by their
/// least member.
pub fn invariant_atoms_with_cap(space: &Space, arity: usize, cap: u64) -> Result<Vec<InvariantAtom>, PredicateError> {
    if arity == 0 {
        return Err(PredicateError::ZeroArity);
    }
    let k = space.k();
    let tuples = (k as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
    let count = tuples.saturating_mul(space.len() as u128);
    if count > cap as u128 {
        return Err(PredicateError::AtomCap { count, cap });
    }
    let tuples = tuples as usize;
    let id = |x: usize, r: usize| x * tuples + r;
    let mut uf = UnionFind::<usize>::new(space.len() * tuples);

    let gens = symmetric_generators(k).map_err(action_error)?;
    for pi in &gens {
        let map = ActionMap::new(space, pi).map_err(action_error)?;
        let moved: Vec<usize> =
            (0..tuples).map(|r| tuple_rank(&pi.apply_tuple(&tuple_unrank(r, k, arity)), k)).collect();
        for x in 0..space.len() {
            let y = map.point(x);
            for (r, &s) in moved.iter().enumerate() {
                uf.union(id(x, r), id(y, s));
            }
        }
    }

    for x in 0..space.len() {
        let point = space.point(x);
        let n = space.model(point.model).size();
        let mut first: HashMap<usize, usize> = HashMap::new();
        for r in 0..tuples {
            let elems = point.enumeration.images(&tuple_unrank(r, k, arity));
            let key = tuple_rank(&elems, n);
            let rep = *first.entry(key).or_insert(r);
            uf.union(id(x, rep), id(x, r));
        }
    }

    let mut index_of_root: HashMap<usize, usize> = HashMap::new();
    let mut atoms: Vec<InvariantAtom> = Vec::new();
    for x in 0..space.len() {
        for r in 0..tuples {
            let root = uf.find(id(x, r));
            let next = atoms.len();
            let a = *index_of_root.entry(root).or_insert(next);
            if a == next {
                atoms.push(InvariantAtom { arity, members: Vec::new() });
            }
            atoms[a].members.push((x, r));
        }
    }
    Ok(atoms)
}

fn action_error(e: ActionError) -> PredicateError {
    match e {
        ActionError::Space(s) => PredicateError::Space(s),
        ActionError::Predicate(p) => p,
        other => PredicateError::Action(Box::new(other)),
    }
}

/// The predicate whose graph is the union of the selected atoms.
pub fn union_of_atoms(
    space: &Space,
    arity: usize,
    atoms: &[InvariantAtom],
    selection: &[usize],
) -> Result<Predicate, PredicateError> {
    let mut entries = vec![ClopenSet::empty(space.len()); tuple_count(space.k(), arity)];
    for &a in selection {
        let atom = &atoms[a];
        if atom.arity != arity {
            return Err(PredicateError::ArityMismatch { expected: arity, found: atom.arity });
        }
        for &(x, r) in &atom.members {
            entries[r].insert(x);
        }
    }
    Predicate::new(space, arity, entries)
}

/// The atoms whose union is `p`, or `None` if some atom is split by `p`.
pub fn atom_decomposition(p: &Predicate, atoms: &[InvariantAtom]) -> Option<Vec<usize>> {
    let mut selected = Vec::new();
    for (a, atom) in atoms.iter().enumerate() {
        let inside = atom.members.iter().filter(|&&(x, r)| p.entries()[r].contains(x)).count();
        if inside == atom.len() {
            selected.push(a);
        } else if inside != 0 {
            return None;
        }
    }
    Some(selected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::check_invariance;
    use crate::models::enumerate_models;
    use crate::predicates::{check_extensionality, predicate_from_formula};
    use crate::space::Mode;
    use crate::syntax::{parse_formula, Signature, Theory};

    fn space(sig: Signature, max: usize, mode: Mode) -> Space {
        Space::build(enumerate_models(&Theory::empty(sig), max).unwrap(), 4, mode).unwrap()
    }

    #[test]
    fn empty_signature_single_atom() {
        let s = space(Signature::empty(), 1, Mode::Balanced);
        assert_eq!(invariant_atoms(&s, 1).unwrap().len(), 1);
    }

    #[test]
    fn unary_counts() {
        let sig = Signature::empty().with_relation("r", 1).unwrap();
        let s = space(sig.clone(), 2, Mode::Balanced);
        let atoms = invariant_atoms(&s, 1).unwrap();
        assert_eq!(atoms.len(), 6);
        assert_eq!(atoms.iter().map(InvariantAtom::len).sum::<usize>(), 14 * 4);
        let u = space(sig, 2, Mode::Unbalanced);
        assert!(invariant_atoms(&u, 1).unwrap().len() > 6);
    }

    #[test]
    fn atoms_are_invariant_extensional_and_disjoint() {
        let sig = Signature::empty().with_relation("r", 1).unwrap();
        let s = space(sig, 2, Mode::Balanced);
        let gens = symmetric_generators(4).unwrap();
        let atoms = invariant_atoms(&s, 1).unwrap();
        for atom in &atoms {
            let p = atom.predicate(&s).unwrap();
            assert!(check_extensionality(&s, &p).unwrap().holds);
            assert!(check_invariance(&s, &p, &gens).unwrap().invariant);
        }
        let all = union_of_atoms(&s, 1, &atoms, &(0..atoms.len()).collect::<Vec<_>>()).unwrap();
        assert!(all.entries().iter().all(ClopenSet::is_full));
        let r = predicate_from_formula(&s, &parse_formula("r(y)", s.class().signature()).unwrap(), 1).unwrap();
        let parts = atom_decomposition(&r, &atoms).unwrap();
        assert_eq!(union_of_atoms(&s, 1, &atoms, &parts).unwrap(), r);
        let tied = Predicate::from_fn(&s, 1, |t| s.index_equality(t[0], 0).unwrap()).unwrap();
        assert_eq!(atom_decomposition(&tied, &atoms), None);
    }

    #[test]
    fn cap() {
        let s = space(Signature::empty(), 1, Mode::Balanced);
        assert!(matches!(invariant_atoms_with_cap(&s, 3, 10), Err(PredicateError::AtomCap { .. })));
    }
}
