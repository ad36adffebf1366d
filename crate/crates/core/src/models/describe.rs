use thiserror::Error;

use super::structure::{tuple_count, tuple_unrank, Structure};
use crate::syntax::{x_vars, Formula, Term};

/// Bound variable of the domain-closure clause.
pub const CLOSURE_VAR: &str = "z";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescribeError {
    #[error("element {0} is not listed")]
    NotCovering(usize),
    #[error("element {value} lies outside a domain of size {size}")]
    OutOfDomain { value: usize, size: usize },
}

/// A formula `χ(x1..xk)` true of `(N, b)` exactly when some isomorphism
/// `M → N` sends `elems` pointwise to `b`.
///
/// Conjuncts, in order: every relation literal, function graph fact and
/// constant fact over the first occurrence of each element; `xi = xj` or
/// `xi != xj` for every pair of positions; `∀z (z = x.. | ...)`.
pub fn complete_description(m: &Structure, elems: &[usize]) -> Result<Formula, DescribeError> {
    let n = m.size();
    if let Some(&value) = elems.iter().find(|&&e| e >= n) {
        return Err(DescribeError::OutOfDomain { value, size: n });
    }
    // position of the first occurrence of each element
    let mut rep = vec![usize::MAX; n];
    for (pos, &e) in elems.iter().enumerate() {
        if rep[e] == usize::MAX {
            rep[e] = pos;
        }
    }
    if let Some(missing) = rep.iter().position(|&p| p == usize::MAX) {
        return Err(DescribeError::NotCovering(missing));
    }
    let vars = x_vars(elems.len());
    let var_of = |element: usize| Term::var(vars[rep[element]].clone());
    // elements in order of first occurrence
    let mut reps: Vec<usize> = (0..n).collect();
    reps.sort_by_key(|&e| rep[e]);

    let sig = m.signature();
    let mut parts = Vec::new();
    for (idx, sym) in sig.relations().iter().enumerate() {
        for k in 0..tuple_count(n, sym.arity) {
            let t: Vec<usize> = tuple_unrank(k, n, sym.arity).into_iter().map(|i| reps[i]).collect();
            let atom = Formula::rel(sym.name.clone(), t.iter().map(|&e| var_of(e)).collect());
            parts.push(if m.relation_holds(idx, &t) { atom } else { Formula::not(atom) });
        }
    }
    for (idx, sym) in sig.functions().iter().enumerate() {
        for k in 0..tuple_count(n, sym.arity) {
            let t: Vec<usize> = tuple_unrank(k, n, sym.arity).into_iter().map(|i| reps[i]).collect();
            let app = Term::app(sym.name.clone(), t.iter().map(|&e| var_of(e)).collect());
            parts.push(Formula::eq(app, var_of(m.function_value(idx, &t))));
        }
    }
    for (idx, c) in sig.constants().iter().enumerate() {
        parts.push(Formula::eq(Term::constant(c.clone()), var_of(m.constant_value(idx))));
    }
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            let eq = Formula::var_eq(&vars[i], &vars[j]);
            parts.push(if elems[i] == elems[j] { eq } else { Formula::not(eq) });
        }
    }
    let closure = Formula::or(reps.iter().map(|&e| Formula::eq(Term::var(CLOSURE_VAR), var_of(e))));
    parts.push(Formula::Forall(CLOSURE_VAR.to_string(), Box::new(closure)));
    Ok(Formula::and(parts))
}
