use serde::Serialize;

use super::SynthesisError;
use crate::action::{apply_to_point, Permutation};
use crate::models::{complete_description, tuple_count, tuple_unrank, CompiledFormula};
use crate::space::{ClopenSet, Enumeration, Space};
use crate::syntax::{x_vars, y_vars, Formula};

fn check_indices(k: usize, tuples: &[&[usize]]) -> Result<(), SynthesisError> {
    for t in tuples {
        if let Some(&index) = t.iter().find(|&&i| i >= k) {
            return Err(SynthesisError::IndexOutOfRange { index, k });
        }
    }
    Ok(())
}

/// `⋀ xi = xj` over `i < j` with `α(ξi) = α(ξj)`, and `⋀ xi = yt` over
/// `α(ξi) = α(η0t)`. `⊤` when nothing is equal.
pub fn eq_alpha_formula(alpha: &Enumeration, xi: &[usize], eta0: &[usize]) -> Result<Formula, SynthesisError> {
    check_indices(alpha.len(), &[xi, eta0])?;
    let xs = x_vars(xi.len());
    let ys = y_vars(eta0.len());
    let mut parts = Vec::new();
    for i in 0..xi.len() {
        for j in i + 1..xi.len() {
            if alpha.image(xi[i]) == alpha.image(xi[j]) {
                parts.push(Formula::var_eq(&xs[i], &xs[j]));
            }
        }
    }
    for i in 0..xi.len() {
        for t in 0..eta0.len() {
            if alpha.image(xi[i]) == alpha.image(eta0[t]) {
                parts.push(Formula::var_eq(&xs[i], &ys[t]));
            }
        }
    }
    Ok(Formula::and(parts))
}

/// Indices `ζ` with `β(ζi) = bi` such that `(ζ, η)` has exactly the index
/// equality pattern of `(ξ, η0)`. Forced choices come first; otherwise the
/// least unused index of the fibre is taken.
pub fn zeta_witness(
    beta: &Enumeration,
    b: &[usize],
    eta: &[usize],
    xi: &[usize],
    eta0: &[usize],
) -> Result<Vec<usize>, SynthesisError> {
    let k = beta.len();
    check_indices(k, &[eta, xi, eta0])?;
    if b.len() != xi.len() || eta.len() != eta0.len() {
        return Err(SynthesisError::PatternMismatch("tuple lengths differ".into()));
    }
    for s in 0..eta.len() {
        for t in s + 1..eta.len() {
            if (eta[s] == eta[t]) != (eta0[s] == eta0[t]) {
                return Err(SynthesisError::PatternMismatch(format!(
                    "{eta:?} and {eta0:?} differ in their equalities"
                )));
            }
        }
    }
    let mut zeta: Vec<usize> = Vec::with_capacity(xi.len());
    for i in 0..xi.len() {
        let forced = (0..i)
            .find(|&j| xi[j] == xi[i])
            .map(|j| zeta[j])
            .or_else(|| (0..eta0.len()).find(|&t| eta0[t] == xi[i]).map(|t| eta[t]));
        let chosen = match forced {
            Some(index) => {
                if beta.image(index) != b[i] {
                    return Err(SynthesisError::PatternMismatch(format!(
                        "position {} is forced to index {index}, which does not map to {}",
                        i + 1,
                        b[i]
                    )));
                }
                index
            }
            None => (0..k)
                .find(|&j| beta.image(j) == b[i] && !zeta.contains(&j) && !eta.contains(&j))
                .ok_or(SynthesisError::FibreExhausted { element: b[i], position: i + 1 })?,
        };
        zeta.push(chosen);
    }
    Ok(zeta)
}

/// A permutation sending `from[i]` to `to[i]`, extended by matching the
/// remaining indices in increasing order. The pairs must be consistent.
pub fn permutation_from_partial(k: usize, from: &[usize], to: &[usize]) -> Result<Permutation, SynthesisError> {
    check_indices(k, &[from, to])?;
    let mut images = vec![usize::MAX; k];
    let mut used = vec![false; k];
    for (&a, &b) in from.iter().zip(to) {
        if images[a] == usize::MAX && !used[b] {
            images[a] = b;
            used[b] = true;
        } else if images[a] != b {
            return Err(SynthesisError::PatternMismatch(format!("{from:?} ↦ {to:?} is not injective")));
        }
    }
    let mut free = (0..k).filter(|&b| !used[b]);
    for image in images.iter_mut().filter(|i| **i == usize::MAX) {
        *image = free.next().expect("as many free targets as free sources");
    }
    Ok(Permutation::new(images).expect("bijection by construction"))
}

/// The data of one local step: `point ∈ U_{δ,(ξ,η0)} ⊆ U`.
#[derive(Debug, Clone, Serialize)]
pub struct LocalDatum {
    pub point: usize,
    #[serde(serialize_with = "crate::synthesis::serialize_formula")]
    pub delta: Formula,
    pub xi: Vec<usize>,
    pub eta0: Vec<usize>,
    /// `U_{δ,(ξ,η0)}`.
    pub extent: ClopenSet,
}

impl LocalDatum {
    /// Free variables of `δ` in binding order: `x1..xl` then the `y`s.
    pub fn variables(&self) -> Vec<String> {
        let mut vars = x_vars(self.xi.len());
        vars.extend(y_vars(self.eta0.len()));
        vars
    }

    /// `ψ = ∃x1…∃xl δ`.
    pub fn psi(&self) -> Formula {
        Formula::exists_many(&x_vars(self.xi.len()), self.delta.clone())
    }
}

fn delta_for(space: &Space, point: usize, xi: &[usize], eta0: &[usize]) -> Result<Formula, SynthesisError> {
    let p = space.point(point);
    let elems = p.enumeration.images(xi);
    let mut parts = match complete_description(space.model(p.model), &elems)? {
        Formula::And(parts) => parts,
        other => vec![other],
    };
    match eq_alpha_formula(&p.enumeration, xi, eta0)? {
        Formula::True => {}
        Formula::And(eqs) => parts.extend(eqs),
        eq => parts.push(eq),
    }
    Ok(Formula::and(parts))
}

/// A formula `δ(x, y)` and indices `ξ` with `point ∈ U_{δ,(ξ,η0)} ⊆ U`.
///
/// `ξ` starts as the least index of every fibre of the point's enumeration.
/// While the basic set is not inside `U`, the least unused index is
/// appended; with all `K` indices listed the basic set is the singleton, so
/// the loop ends.
pub fn local_formula(space: &Space, point: usize, eta0: &[usize], u: &ClopenSet) -> Result<LocalDatum, SynthesisError> {
    check_indices(space.k(), &[eta0])?;
    if eta0.is_empty() {
        return Err(SynthesisError::PatternMismatch("empty target tuple".into()));
    }
    if !u.contains(point) {
        return Err(SynthesisError::NotInSet { point });
    }
    let alpha = &space.point(point).enumeration;
    let n = space.model(space.point(point).model).size();
    let mut xi: Vec<usize> = (0..n).map(|a| alpha.fibre(a)[0]).collect();
    xi.sort_unstable();
    loop {
        let delta = delta_for(space, point, &xi, eta0)?;
        let mut vars = x_vars(xi.len());
        vars.extend(y_vars(eta0.len()));
        let binding: Vec<usize> = xi.iter().chain(eta0).copied().collect();
        let extent = space.evaluate_bound(&delta, &vars, &binding)?;
        debug_assert!(extent.contains(point));
        if extent.is_subset(u) {
            return Ok(LocalDatum { point, delta, xi, eta0: eta0.to_vec(), extent });
        }
        let next = (0..space.k()).find(|i| !xi.contains(i)).expect("the full index list gives a singleton");
        xi.push(next);
    }
}

/// A failure of the transport property for one local datum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransportFailure {
    pub point: usize,
    pub elements: Vec<usize>,
    pub eta: Vec<usize>,
    pub reason: String,
}

/// For every point `(N, β)`, every `(b, c)` with `N ⊨ δ(b, c)` and every
/// `η` with `β(η) = c` and the equality pattern of `η0`: a witness `ζ`
/// exists and the induced `π` has `π(η) = η0` and `π·(N, β) ∈ U_{δ,(ξ,η0)}`.
/// Returns the first failure.
pub fn check_transport(space: &Space, datum: &LocalDatum) -> Result<Option<TransportFailure>, SynthesisError> {
    let k = space.k();
    let l = datum.xi.len();
    let a = datum.eta0.len();
    let compiled = CompiledFormula::compile(&datum.delta, space.class().signature(), &datum.variables())
        .map_err(crate::space::SpaceError::from)?;
    let same_pattern =
        |eta: &[usize]| (0..a).all(|s| (s + 1..a).all(|t| (eta[s] == eta[t]) == (datum.eta0[s] == datum.eta0[t])));
    for x in 0..space.len() {
        let point = space.point(x);
        let model = space.model(point.model);
        let n = model.size();
        let beta = &point.enumeration;
        for code in 0..tuple_count(n, l + a) {
            let elements = tuple_unrank(code, n, l + a);
            if !compiled.eval(model, &elements) {
                continue;
            }
            let (b, c) = elements.split_at(l);
            for eta_code in 0..tuple_count(k, a) {
                let eta = tuple_unrank(eta_code, k, a);
                if beta.images(&eta) != c || !same_pattern(&eta) {
                    continue;
                }
                let fail = |reason: String| {
                    Ok(Some(TransportFailure { point: x, elements: elements.clone(), eta: eta.clone(), reason }))
                };
                let zeta = match zeta_witness(beta, b, &eta, &datum.xi, &datum.eta0) {
                    Ok(z) => z,
                    Err(e) => return fail(e.to_string()),
                };
                let from: Vec<usize> = zeta.iter().chain(&eta).copied().collect();
                let to: Vec<usize> = datum.xi.iter().chain(&datum.eta0).copied().collect();
                let pi = match permutation_from_partial(k, &from, &to) {
                    Ok(p) => p,
                    Err(e) => return fail(e.to_string()),
                };
                if pi.apply_tuple(&eta) != datum.eta0 {
                    return fail(format!("{pi} does not send {eta:?} to {:?}", datum.eta0));
                }
                let moved = apply_to_point(space, &pi, point)?;
                let index = space.locate_canonical(&moved).expect("points map to points");
                if !datum.extent.contains(index) {
                    return fail(format!("{pi} moves the point outside the basic set"));
                }
            }
        }
    }
    Ok(None)
}
