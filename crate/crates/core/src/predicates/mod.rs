//! Boolean-valued predicates: dense tables from index tuples to clopen sets,
//! with extensionality checks, complements and the invariant-atom oracle.

mod atoms;
mod extensional;

use std::path::Path;

use serde_json::{json, Map, Value};
use thiserror::Error;

pub use atoms::{
    atom_decomposition, invariant_atoms, invariant_atoms_with_cap, union_of_atoms, InvariantAtom, DEFAULT_ATOM_CAP,
};
pub use extensional::{
    check_extensionality, predicate_complement, predicate_from_formula, ExtensionalityReport, ExtensionalityViolation,
};

use crate::models::{tuple_count, tuple_rank, tuple_unrank};
use crate::space::{ClopenSet, Space, SpaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PredicateError {
    #[error("predicate arity must be at least 1")]
    ZeroArity,
    #[error("expected arity {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("predicate belongs to space {found}, not {expected}")]
    SpaceMismatch { expected: String, found: String },
    #[error("predicate has K = {found}, the space has K = {expected}")]
    KMismatch { expected: usize, found: usize },
    #[error("bad tuple key `{0}`")]
    BadKey(String),
    #[error("point {point} outside a space of {universe} points")]
    BadPoint { point: usize, universe: usize },
    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("free variable `{var}` is not among {allowed:?}")]
    FreeVariable { var: String, allowed: Vec<String> },
    #[error("{count} (point, tuple) pairs exceed the cap of {cap}")]
    AtomCap { count: u128, cap: u64 },
    #[error("malformed predicate JSON: {0}")]
    Json(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Action(Box<crate::action::ActionError>),
}

/// A total map from `{0..K-1}^n` to clopen sets of one space, stored densely
/// in lexicographic tuple order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicate {
    arity: usize,
    k: usize,
    space_hash: String,
    entries: Vec<ClopenSet>,
}

impl Predicate {
    /// `entries[r]` is the value at the tuple of rank `r`.
    pub fn new(space: &Space, arity: usize, entries: Vec<ClopenSet>) -> Result<Self, PredicateError> {
        if arity == 0 {
            return Err(PredicateError::ZeroArity);
        }
        let expected = tuple_count(space.k(), arity);
        if entries.len() != expected {
            return Err(PredicateError::EntryCount { expected, found: entries.len() });
        }
        if let Some(bad) = entries.iter().find(|e| e.universe() != space.len()) {
            return Err(PredicateError::BadPoint { point: bad.universe(), universe: space.len() });
        }
        Ok(Self { arity, k: space.k(), space_hash: space.hash().to_string(), entries })
    }

    pub fn from_fn(
        space: &Space,
        arity: usize,
        mut f: impl FnMut(&[usize]) -> ClopenSet,
    ) -> Result<Self, PredicateError> {
        if arity == 0 {
            return Err(PredicateError::ZeroArity);
        }
        let entries = (0..tuple_count(space.k(), arity)).map(|r| f(&tuple_unrank(r, space.k(), arity))).collect();
        Self::new(space, arity, entries)
    }

    /// The same set at every tuple.
    pub fn constant(space: &Space, arity: usize, set: &ClopenSet) -> Result<Self, PredicateError> {
        Self::from_fn(space, arity, |_| set.clone())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn space_hash(&self) -> &str {
        &self.space_hash
    }

    pub fn tuple_count(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[ClopenSet] {
        &self.entries
    }

    pub fn rank(&self, tuple: &[usize]) -> usize {
        assert_eq!(tuple.len(), self.arity, "tuple length differs from arity");
        assert!(tuple.iter().all(|&i| i < self.k), "index out of range");
        tuple_rank(tuple, self.k)
    }

    pub fn tuple(&self, rank: usize) -> Vec<usize> {
        tuple_unrank(rank, self.k, self.arity)
    }

    /// `p(m)`. Panics on a malformed tuple.
    pub fn get(&self, tuple: &[usize]) -> &ClopenSet {
        &self.entries[self.rank(tuple)]
    }

    pub fn set(&mut self, tuple: &[usize], value: ClopenSet) {
        assert_eq!(value.universe(), self.entries[0].universe(), "set from another space");
        let r = self.rank(tuple);
        self.entries[r] = value;
    }

    /// Tuples in lexicographic order with their values.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &ClopenSet)> + '_ {
        self.entries.iter().enumerate().map(|(r, e)| (self.tuple(r), e))
    }

    /// Pointwise union. Panics if the predicates are incompatible.
    pub fn union(&self, other: &Predicate) -> Predicate {
        assert!(self.arity == other.arity && self.space_hash == other.space_hash, "incompatible predicates");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.union(b)).collect();
        Predicate { entries, ..self.clone() }
    }

    pub fn check_space(&self, space: &Space) -> Result<(), PredicateError> {
        if self.space_hash != space.hash() {
            return Err(PredicateError::SpaceMismatch {
                expected: space.hash().to_string(),
                found: self.space_hash.clone(),
            });
        }
        if self.k != space.k() {
            return Err(PredicateError::KMismatch { expected: space.k(), found: self.k });
        }
        Ok(())
    }

    pub fn check_arity(&self, arity: usize) -> Result<(), PredicateError> {
        if self.arity != arity {
            return Err(PredicateError::ArityMismatch { expected: arity, found: self.arity });
        }
        Ok(())
    }

    /// Exchange format. Keys look like `<0,1>`; empty entries are omitted.
    pub fn to_json(&self) -> Value {
        let mut entries = Map::new();
        for (r, set) in self.entries.iter().enumerate() {
            if !set.is_empty() {
                let key = self.tuple(r).iter().map(usize::to_string).collect::<Vec<_>>().join(",");
                entries.insert(format!("<{key}>"), json!(set));
            }
        }
        json!({
            "arity": self.arity,
            "K": self.k,
            "space_hash": self.space_hash,
            "entries": entries,
        })
    }

    /// Reads the exchange format against `space`. Keys may omit the angle
    /// brackets; missing keys stand for the empty set.
    pub fn from_json(value: &Value, space: &Space) -> Result<Self, PredicateError> {
        let field = |name: &str| value.get(name).ok_or_else(|| PredicateError::Json(format!("missing field `{name}`")));
        let as_usize = |v: &Value, name: &str| {
            v.as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| PredicateError::Json(format!("`{name}` must be a nonnegative integer")))
        };
        let arity = as_usize(field("arity")?, "arity")?;
        let k = as_usize(field("K")?, "K")?;
        let hash = field("space_hash")?
            .as_str()
            .ok_or_else(|| PredicateError::Json("`space_hash` must be a string".into()))?
            .to_string();
        if hash != space.hash() {
            return Err(PredicateError::SpaceMismatch { expected: space.hash().to_string(), found: hash });
        }
        if k != space.k() {
            return Err(PredicateError::KMismatch { expected: space.k(), found: k });
        }
        let mut p = Predicate::constant(space, arity, &space.empty_set())?;
        let entries =
            field("entries")?.as_object().ok_or_else(|| PredicateError::Json("`entries` must be an object".into()))?;
        for (key, points) in entries {
            let tuple = parse_key(key, arity, k)?;
            let list =
                points.as_array().ok_or_else(|| PredicateError::Json(format!("entry `{key}` must be an array")))?;
            let mut set = space.empty_set();
            for v in list {
                let point = as_usize(v, key)?;
                if point >= space.len() {
                    return Err(PredicateError::BadPoint { point, universe: space.len() });
                }
                set.insert(point);
            }
            p.set(&tuple, set);
        }
        Ok(p)
    }

    pub fn load(path: &Path, space: &Space) -> Result<Self, PredicateError> {
        let io = |message: String| PredicateError::Io { path: path.display().to_string(), message };
        let text = std::fs::read_to_string(path).map_err(|e| io(e.to_string()))?;
        let value: Value = serde_json::from_str(&text).map_err(|e| PredicateError::Json(e.to_string()))?;
        Self::from_json(&value, space)
    }

    pub fn save(&self, path: &Path) -> Result<(), PredicateError> {
        let text = serde_json::to_string_pretty(&self.to_json()).expect("predicate JSON");
        std::fs::write(path, text + "\n")
            .map_err(|e| PredicateError::Io { path: path.display().to_string(), message: e.to_string() })
    }
}

fn parse_key(key: &str, arity: usize, k: usize) -> Result<Vec<usize>, PredicateError> {
    let bad = || PredicateError::BadKey(key.to_string());
    let inner = key.trim();
    let inner = inner.strip_prefix('<').and_then(|s| s.strip_suffix('>')).unwrap_or(inner);
    let tuple =
        inner.split(',').map(|s| s.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?;
    if tuple.len() != arity || tuple.iter().any(|&i| i >= k) {
        return Err(bad());
    }
    Ok(tuple)
}
