use std::collections::HashSet;

use serde::Serialize;

use super::local::{local_formula, LocalDatum};
use super::SynthesisError;
use crate::exec;
use crate::models::{tuple_count, tuple_unrank};
use crate::predicates::Predicate;
use crate::space::{ClopenSet, Space};
use crate::syntax::{y_vars, Formula};

/// A formula `ψ(y)` with its value `⟦ψ(η)⟧` at every tuple, in
/// lexicographic tuple order.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyMember {
    #[serde(serialize_with = "crate::synthesis::serialize_formula")]
    pub psi: Formula,
    #[serde(skip)]
    pub values: Vec<ClopenSet>,
}

impl FamilyMember {
    pub fn new(space: &Space, psi: Formula, arity: usize) -> Result<Self, SynthesisError> {
        let vars = y_vars(arity);
        let k = space.k();
        let values = (0..tuple_count(k, arity))
            .map(|r| space.evaluate_bound(&psi, &vars, &tuple_unrank(r, k, arity)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { psi, values })
    }
}

/// `⟦ψi(η)⟧ ⊄ p(η)`: a cover formula overshoots the predicate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OvershootViolation {
    pub member: usize,
    pub tuple: Vec<usize>,
    pub point: usize,
}

fn first_overshoot(members: &[FamilyMember], p: &Predicate) -> Option<OvershootViolation> {
    members.iter().enumerate().find_map(|(i, m)| {
        m.values.iter().enumerate().find_map(|(r, value)| {
            value.first_outside(&p.entries()[r]).map(|point| OvershootViolation { member: i, tuple: p.tuple(r), point })
        })
    })
}

/// The cover of `p(η0)` by basic sets, with the checks on it.
#[derive(Debug, Clone, Serialize)]
pub struct EtaCover {
    pub eta0: Vec<usize>,
    pub locals: Vec<LocalDatum>,
    pub members: Vec<FamilyMember>,
    /// The basic sets `Ui` cover `p(η0)`.
    pub covers: bool,
    /// Every `Ui ⊆ ⟦ψi(η0)⟧`.
    pub inside_own_value: bool,
    /// Least `(member, tuple, point)` with `⟦ψi(η)⟧ ⊄ p(η)`.
    pub overshoot: Option<OvershootViolation>,
    /// `⋃i ⟦ψi(η0)⟧ = p(η0)`.
    pub exact_at_eta0: bool,
}

impl EtaCover {
    pub fn all_checks_hold(&self) -> bool {
        self.covers && self.inside_own_value && self.overshoot.is_none() && self.exact_at_eta0
    }
}

/// Local data for the points of `p(η0)`, taken in order and skipping points
/// already inside an earlier basic set; `ψi = ∃x δi`.
pub fn eta_cover(space: &Space, p: &Predicate, eta0: &[usize]) -> Result<EtaCover, SynthesisError> {
    p.check_space(space)?;
    p.check_arity(eta0.len())?;
    let target = p.get(eta0);
    let mut covered = space.empty_set();
    let mut locals = Vec::new();
    for x in target.iter() {
        if covered.contains(x) {
            continue;
        }
        let datum = local_formula(space, x, eta0, target)?;
        covered.union_with(&datum.extent);
        locals.push(datum);
    }
    let members =
        locals.iter().map(|d| FamilyMember::new(space, d.psi(), eta0.len())).collect::<Result<Vec<_>, _>>()?;

    let r0 = p.rank(eta0);
    let inside_own_value = locals.iter().zip(&members).all(|(d, m)| d.extent.is_subset(&m.values[r0]));
    let overshoot = first_overshoot(&members, p);
    let mut union = space.empty_set();
    for m in &members {
        union.union_with(&m.values[r0]);
    }
    Ok(EtaCover {
        eta0: eta0.to_vec(),
        covers: covered == *target,
        inside_own_value,
        overshoot,
        exact_at_eta0: union == *target,
        locals,
        members,
    })
}

/// The union of the `η0`-covers over all tuples, deduplicated by printed
/// form, in order of discovery.
#[derive(Debug, Clone, Serialize)]
pub struct GlobalFamily {
    pub arity: usize,
    pub members: Vec<FamilyMember>,
    /// `p(η) = ⋃i ⟦ψi(η)⟧` at every tuple.
    pub exact: bool,
    /// Least tuple where the union differs from `p`.
    pub first_difference: Option<Vec<usize>>,
    pub overshoot: Option<OvershootViolation>,
}

pub fn global_family(space: &Space, p: &Predicate) -> Result<GlobalFamily, SynthesisError> {
    p.check_space(space)?;
    let arity = p.arity();
    let covers = exec::map_range(p.tuple_count(), |r| eta_cover(space, p, &p.tuple(r)));
    let mut seen = HashSet::new();
    let mut members = Vec::new();
    for cover in covers {
        for m in cover?.members {
            if seen.insert(m.psi.to_string()) {
                members.push(m);
            }
        }
    }
    let mut first_difference = None;
    for r in 0..p.tuple_count() {
        let mut union = space.empty_set();
        for m in &members {
            union.union_with(&m.values[r]);
        }
        if union != p.entries()[r] {
            first_difference = Some(p.tuple(r));
            break;
        }
    }
    let overshoot = first_overshoot(&members, p);
    Ok(GlobalFamily { arity, exact: first_difference.is_none(), first_difference, overshoot, members })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::enumerate_models;
    use crate::predicates::predicate_from_formula;
    use crate::space::Mode;
    use crate::syntax::{parse_formula, Signature, Theory};

    fn unary_space() -> Space {
        let sig = Signature::empty().with_relation("r", 1).unwrap();
        Space::build(enumerate_models(&Theory::empty(sig), 2).unwrap(), 4, Mode::Balanced).unwrap()
    }

    fn from(space: &Space, f: &str, arity: usize) -> Predicate {
        predicate_from_formula(space, &parse_formula(f, space.class().signature()).unwrap(), arity).unwrap()
    }

    #[test]
    fn constant_full_predicate() {
        let s = unary_space();
        let p = Predicate::constant(&s, 1, &s.full_set()).unwrap();
        let cover = eta_cover(&s, &p, &[0]).unwrap();
        assert!(cover.all_checks_hold());
        let family = global_family(&s, &p).unwrap();
        assert!(family.exact);
    }

    #[test]
    fn relation_predicate() {
        let s = unary_space();
        let p = from(&s, "r(y)", 1);
        let cover = eta_cover(&s, &p, &[0]).unwrap();
        assert!(cover.all_checks_hold(), "{:?}", cover.overshoot);
        let family = global_family(&s, &p).unwrap();
        assert!(family.exact && family.overshoot.is_none());
    }

    #[test]
    fn empty_predicate_has_empty_family() {
        let s = unary_space();
        let p = Predicate::constant(&s, 1, &s.empty_set()).unwrap();
        let family = global_family(&s, &p).unwrap();
        assert!(family.members.is_empty() && family.exact);
    }

    #[test]
    fn non_invariant_predicate_overshoots() {
        let s = unary_space();
        let p = Predicate::from_fn(&s, 1, |t| s.index_equality(t[0], 0).unwrap()).unwrap();
        let cover = eta_cover(&s, &p, &[0]).unwrap();
        assert!(cover.overshoot.is_some());
        assert!(cover.covers && cover.inside_own_value);
    }
}
