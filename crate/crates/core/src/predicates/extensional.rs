use serde::Serialize;

use super::{Predicate, PredicateError};
use crate::exec;
use crate::models::{tuple_count, tuple_unrank};
use crate::space::{ClopenSet, Space};
use crate::syntax::{y_vars, Formula};

/// `p(m) = ⟦f(m)⟧` with `y` (arity 1) or `y1..yn` bound to the tuple.
pub fn predicate_from_formula(space: &Space, f: &Formula, arity: usize) -> Result<Predicate, PredicateError> {
    if arity == 0 {
        return Err(PredicateError::ZeroArity);
    }
    let vars = y_vars(arity);
    if let Some(var) = f.free_variables().into_iter().find(|v| !vars.contains(v)) {
        return Err(PredicateError::FreeVariable { var, allowed: vars });
    }
    let k = space.k();
    let entries =
        exec::map_range(tuple_count(k, arity), |r| space.evaluate_bound(f, &vars, &tuple_unrank(r, k, arity)));
    let entries = entries.into_iter().collect::<Result<Vec<_>, _>>()?;
    Predicate::new(space, arity, entries)
}

/// A point of `p(m) ∩ ⟦m = m′⟧` missing from `p(m′)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionalityViolation {
    pub tuple: Vec<usize>,
    pub other: Vec<usize>,
    pub point: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionalityReport {
    pub holds: bool,
    /// Least violation in the order (tuple, other tuple), then point.
    pub violation: Option<ExtensionalityViolation>,
}

/// Exhaustive check of `p(m) ∩ ⟦m = m′⟧ ⊆ p(m′)` over all pairs of tuples.
pub fn check_extensionality(space: &Space, p: &Predicate) -> Result<ExtensionalityReport, PredicateError> {
    p.check_space(space)?;
    let k = space.k();
    let eq: Vec<ClopenSet> = exec::map_range(k * k, |c| space.index_equality(c / k, c % k).expect("indices below K"));
    let count = p.tuple_count();
    let violation = exec::find_first(count, |r| {
        let m = p.tuple(r);
        let value = &p.entries()[r];
        if value.is_empty() {
            return None;
        }
        (0..count).filter(|&r2| r2 != r).find_map(|r2| {
            let m2 = p.tuple(r2);
            let mut forced = value.clone();
            for (&a, &b) in m.iter().zip(&m2) {
                if a != b {
                    forced.intersect_with(&eq[a * k + b]);
                }
            }
            forced.first_outside(&p.entries()[r2]).map(|point| ExtensionalityViolation {
                tuple: m.clone(),
                other: m2,
                point,
            })
        })
    });
    Ok(ExtensionalityReport { holds: violation.is_none(), violation })
}

/// `p′(m) = X \ p(m)`.
pub fn predicate_complement(p: &Predicate) -> Predicate {
    Predicate { entries: p.entries.iter().map(ClopenSet::complement).collect(), ..p.clone() }
}
