use std::sync::Arc;

use itertools::Itertools;
use serde_json::{json, Value};
use thiserror::Error;

use super::eval::{CompiledFormula, EvalError};
use super::structure::{tuple_count, Structure};
use crate::exec;
use crate::syntax::{Signature, Theory};

/// Default bound on the number of raw candidate structures examined.
pub const DEFAULT_CANDIDATE_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("size bound must be at least 1")]
    ZeroBound,
    #[error("{count} raw candidate structures exceed the cap of {cap}")]
    CandidateCap { count: String, cap: u64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Every model of a theory with at most `max_size` elements, one canonical
/// representative per isomorphism class, sorted by encoding.
#[derive(Debug, Clone)]
pub struct ModelClass {
    theory: Theory,
    signature: Arc<Signature>,
    max_size: usize,
    models: Vec<Structure>,
}

impl ModelClass {
    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn models(&self) -> &[Structure] {
        &self.models
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let models: Vec<Value> = self
            .models
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let mut v = m.to_json();
                v.as_object_mut().unwrap().shift_insert(0, "index".into(), json!(i));
                v
            })
            .collect();
        json!({
            "max_size": self.max_size,
            "theory": self.theory.to_text(),
            "count": self.models.len(),
            "models": models,
        })
    }
}

/// Mixed-radix layout of the raw candidates of one size.
struct CandidateSpace {
    size: usize,
    relation_bits: usize,
    value_digits: usize,
    count: u128,
}

impl CandidateSpace {
    fn new(sig: &Signature, size: usize) -> Self {
        let relation_bits: usize = sig.relations().iter().map(|r| tuple_count(size, r.arity)).sum();
        let value_digits: usize =
            sig.functions().iter().map(|f| tuple_count(size, f.arity)).sum::<usize>() + sig.constants().len();
        let count = u32::try_from(relation_bits)
            .ok()
            .and_then(|bits| 2u128.checked_pow(bits))
            .zip(u32::try_from(value_digits).ok().and_then(|d| (size as u128).checked_pow(d)))
            .and_then(|(a, b)| a.checked_mul(b))
            .unwrap_or(u128::MAX);
        Self { size, relation_bits, value_digits, count }
    }

    fn encoding(&self, mut index: usize) -> Vec<usize> {
        let mut enc = Vec::with_capacity(1 + self.relation_bits + self.value_digits);
        enc.push(self.size);
        for _ in 0..self.relation_bits {
            enc.push(index % 2);
            index /= 2;
        }
        for _ in 0..self.value_digits {
            enc.push(index % self.size);
            index /= self.size;
        }
        enc
    }
}

fn is_canonical(m: &Structure, perms: &[Vec<usize>]) -> bool {
    let own = m.encoding();
    perms.iter().all(|p| m.relabel(p).encoding() >= own)
}

/// Canonical representative of the isomorphism class of `m`.
pub fn canonical_form(m: &Structure) -> Structure {
    (0..m.size())
        .permutations(m.size())
        .map(|p| m.relabel(&p))
        .min_by(|a, b| a.encoding().cmp(&b.encoding()))
        .expect("at least the identity relabelling")
}

pub fn enumerate_models(theory: &Theory, max_size: usize) -> Result<ModelClass, ModelError> {
    enumerate_models_with_cap(theory, max_size, DEFAULT_CANDIDATE_CAP)
}

/// Exhaustive enumeration up to isomorphism. Raw candidates of every size are
/// generated, filtered by the axioms and kept only when they are the
/// lexicographically least relabelling of themselves.
pub fn enumerate_models_with_cap(theory: &Theory, max_size: usize, cap: u64) -> Result<ModelClass, ModelError> {
    if max_size == 0 {
        return Err(ModelError::ZeroBound);
    }
    let signature = Arc::new(theory.signature.clone());
    let spaces: Vec<_> = (1..=max_size).map(|n| CandidateSpace::new(&signature, n)).collect();
    let total = spaces.iter().fold(0u128, |acc, s| acc.saturating_add(s.count));
    if total > cap as u128 {
        let count = if total == u128::MAX { "more than 2^128".to_string() } else { total.to_string() };
        return Err(ModelError::CandidateCap { count, cap });
    }
    let axioms =
        theory.axioms.iter().map(|a| CompiledFormula::compile(a, &signature, &[])).collect::<Result<Vec<_>, _>>()?;

    let mut models = Vec::new();
    for space in &spaces {
        let perms: Vec<Vec<usize>> = (0..space.size).permutations(space.size).skip(1).collect();
        let found = exec::filter_map_range(space.count as usize, |index| {
            let m = Structure::from_encoding(signature.clone(), &space.encoding(index)).ok()?;
            let ok = axioms.iter().all(|a| a.eval(&m, &[])) && is_canonical(&m, &perms);
            ok.then_some(m)
        });
        models.extend(found);
    }
    models.sort_by_cached_key(Structure::encoding);
    Ok(ModelClass { theory: theory.clone(), signature, max_size, models })
}
