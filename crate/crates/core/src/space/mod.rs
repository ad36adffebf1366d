//! The space of enumerated models, its Boolean algebra of clopen sets and the
//! Boolean-valued interpretation of formulas.

mod clopen;
mod conservativity;
mod enumeration;

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;
use std::sync::RwLock;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use clopen::ClopenSet;
pub use conservativity::{conservativity_report, ConservativityEntry, ConservativityReport};
pub use enumeration::{enumerate_enumerations, Enumeration, Mode};

use crate::exec;
use crate::models::{automorphisms, CompiledFormula, EvalError, ModelClass, Structure};
use crate::syntax::{x_vars, Formula};

/// Default bound on the number of raw enumerations generated while building
/// a space.
pub const DEFAULT_POINT_CAP: u64 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("K = {k} is smaller than a model of size {size}")]
    TooFewIndices { k: usize, size: usize },
    #[error("balanced mode needs every model size to divide K, but {size} does not divide {k}")]
    Divisibility { k: usize, size: usize },
    #[error("invalid enumeration {enumeration:?}: {reason}")]
    InvalidEnumeration { enumeration: Vec<usize>, reason: String },
    #[error("{count} raw enumerations exceed the cap of {cap}")]
    PointCap { count: String, cap: u64 },
    #[error("no model with index {0}")]
    UnknownModel(usize),
    #[error("index {index} is out of range for K = {k}")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("free variable `{0}` has no index")]
    UnboundVariable(String),
    #[error("{vars} variables but {indices} indices")]
    BindingLength { vars: usize, indices: usize },
    #[error("`{0}` is not a sentence")]
    OpenFormula(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A point: a canonical model together with the lex-least enumeration in its
/// automorphism orbit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Point {
    pub model: usize,
    pub enumeration: Enumeration,
}

type CacheKey = (String, Vec<usize>);

/// Above this many element tuples per model, truth values are memoized in a
/// hash map instead of a dense table.
const DENSE_TABLE_LIMIT: usize = 1 << 16;

pub struct Space {
    class: ModelClass,
    k: usize,
    mode: Mode,
    points: Vec<Point>,
    model_ranges: Vec<Range<usize>>,
    automorphisms: Vec<Vec<Vec<usize>>>,
    hash: String,
    cache: RwLock<HashMap<CacheKey, ClopenSet>>,
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Space")
            .field("K", &self.k)
            .field("mode", &self.mode)
            .field("models", &self.class.len())
            .field("points", &self.points.len())
            .field("hash", &self.hash)
            .finish()
    }
}

fn lex_least(alpha: &Enumeration, auts: &[Vec<usize>]) -> Enumeration {
    auts.iter().map(|theta| alpha.compose(theta)).min().unwrap_or_else(|| alpha.clone())
}

impl Space {
    pub fn build(class: ModelClass, k: usize, mode: Mode) -> Result<Self, SpaceError> {
        Self::build_with_cap(class, k, mode, DEFAULT_POINT_CAP)
    }

    pub fn build_with_cap(class: ModelClass, k: usize, mode: Mode, cap: u64) -> Result<Self, SpaceError> {
        let mut total: u128 = 0;
        for m in class.models() {
            let size = m.size();
            if k < size {
                return Err(SpaceError::TooFewIndices { k, size });
            }
            if mode == Mode::Balanced && !k.is_multiple_of(size) {
                return Err(SpaceError::Divisibility { k, size });
            }
            total = total.saturating_add(enumeration::enumeration_count_bound(size, k, mode));
        }
        if total > cap as u128 {
            return Err(SpaceError::PointCap { count: total.to_string(), cap });
        }

        let automorphisms: Vec<Vec<Vec<usize>>> = exec::map(class.models(), automorphisms);
        let mut points = Vec::new();
        let mut model_ranges = Vec::with_capacity(class.len());
        for (index, m) in class.models().iter().enumerate() {
            let auts = &automorphisms[index];
            let all = enumerate_enumerations(m.size(), k, mode)?;
            // canonical iff no automorphism image is lexicographically smaller
            let keep = exec::map(&all, |alpha| auts.iter().skip(1).all(|theta| alpha.compose(theta) >= *alpha));
            let start = points.len();
            points.extend(
                all.into_iter()
                    .zip(keep)
                    .filter(|(_, keep)| *keep)
                    .map(|(enumeration, _)| Point { model: index, enumeration }),
            );
            model_ranges.push(start..points.len());
        }
        let hash = space_hash(&class, k, mode);
        Ok(Self { class, k, mode, points, model_ranges, automorphisms, hash, cache: RwLock::new(HashMap::new()) })
    }

    pub fn class(&self) -> &ModelClass {
        &self.class
    }

    pub fn models(&self) -> &[Structure] {
        self.class.models()
    }

    pub fn model(&self, index: usize) -> &Structure {
        &self.class.models()[index]
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, index: usize) -> &Point {
        &self.points[index]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Point indices belonging to one model.
    pub fn model_range(&self, model: usize) -> Range<usize> {
        self.model_ranges[model].clone()
    }

    pub fn model_automorphisms(&self, model: usize) -> &[Vec<usize>] {
        &self.automorphisms[model]
    }

    /// Hex SHA-256 of the space description (theory, size bound, K, mode and
    /// model encodings).
    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn empty_set(&self) -> ClopenSet {
        ClopenSet::empty(self.len())
    }

    pub fn full_set(&self) -> ClopenSet {
        ClopenSet::full(self.len())
    }

    /// Every point of the given model.
    pub fn model_set(&self, model: usize) -> ClopenSet {
        ClopenSet::from_indices(self.len(), self.model_range(model))
    }

    /// The canonical point of `(model, α)`: the lex-least enumeration among
    /// `θ∘α` over automorphisms `θ`.
    pub fn canonical_point(&self, model: usize, alpha: &Enumeration) -> Result<Point, SpaceError> {
        let m = self.class.models().get(model).ok_or(SpaceError::UnknownModel(model))?;
        alpha.validate(m.size(), self.k, self.mode)?;
        Ok(Point { model, enumeration: lex_least(alpha, &self.automorphisms[model]) })
    }

    /// Index of the point `(model, α)`, canonicalizing first.
    pub fn locate(&self, model: usize, alpha: &Enumeration) -> Result<usize, SpaceError> {
        let point = self.canonical_point(model, alpha)?;
        Ok(self.locate_canonical(&point).expect("canonical points are listed"))
    }

    /// Index of a point already in canonical form.
    pub fn locate_canonical(&self, point: &Point) -> Option<usize> {
        let range = self.model_ranges.get(point.model)?.clone();
        let offset = self.points[range.clone()].binary_search_by(|p| p.enumeration.cmp(&point.enumeration)).ok()?;
        Some(range.start + offset)
    }

    /// `⟦f(ξ)⟧` with free variable `xi` bound to `ξi`.
    pub fn evaluate_bvm(&self, f: &Formula, xi: &[usize]) -> Result<ClopenSet, SpaceError> {
        self.evaluate_bound(f, &x_vars(xi.len()), xi)
    }

    /// `⟦σ⟧` for a sentence.
    pub fn evaluate_sentence(&self, sentence: &Formula) -> Result<ClopenSet, SpaceError> {
        if !sentence.is_sentence() {
            return Err(SpaceError::OpenFormula(sentence.to_string()));
        }
        self.evaluate_bound(sentence, &[], &[])
    }

    /// `{(M, α) : M ⊨ f[vars ↦ α(indices)]}`. Every free variable of `f`
    /// must be among `vars`; unused bindings are ignored.
    pub fn evaluate_bound(&self, f: &Formula, vars: &[String], indices: &[usize]) -> Result<ClopenSet, SpaceError> {
        if vars.len() != indices.len() {
            return Err(SpaceError::BindingLength { vars: vars.len(), indices: indices.len() });
        }
        if let Some(&index) = indices.iter().find(|&&i| i >= self.k) {
            return Err(SpaceError::IndexOutOfRange { index, k: self.k });
        }
        let free = f.free_variables();
        if let Some(v) = free.iter().find(|v| !vars.contains(v)) {
            return Err(SpaceError::UnboundVariable(v.clone()));
        }
        let mut used_vars = Vec::new();
        let mut used_indices = Vec::new();
        for (v, &i) in vars.iter().zip(indices) {
            if free.contains(v) && !used_vars.contains(v) {
                used_vars.push(v.clone());
                used_indices.push(i);
            }
        }
        let key = (format!("{f}\u{1f}{}", used_vars.join(",")), used_indices);
        if let Some(hit) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let compiled = CompiledFormula::compile(f, self.class.signature(), &used_vars)?;
        let set = self.compute(&compiled, &key.1);
        self.cache.write().expect("cache lock").insert(key, set.clone());
        Ok(set)
    }

    fn compute(&self, compiled: &CompiledFormula, indices: &[usize]) -> ClopenSet {
        let members = exec::map_range(self.class.len(), |model| {
            let m = &self.class.models()[model];
            let n = m.size();
            let tuples = n.checked_pow(indices.len() as u32).filter(|&t| t <= DENSE_TABLE_LIMIT);
            let mut dense = vec![0u8; tuples.unwrap_or(0)];
            let mut sparse: HashMap<Vec<usize>, bool> = HashMap::new();
            let mut args = vec![0; indices.len()];
            let mut out = Vec::new();
            for p in self.model_range(model) {
                let alpha = self.points[p].enumeration.as_slice();
                for (slot, &i) in args.iter_mut().zip(indices) {
                    *slot = alpha[i];
                }
                let value = if tuples.is_some() {
                    let rank = args.iter().fold(0, |acc, &a| acc * n + a);
                    if dense[rank] == 0 {
                        dense[rank] = 1 + u8::from(compiled.eval(m, &args));
                    }
                    dense[rank] == 2
                } else {
                    *sparse.entry(args.clone()).or_insert_with(|| compiled.eval(m, &args))
                };
                if value {
                    out.push(p);
                }
            }
            out
        });
        ClopenSet::from_indices(self.len(), members.into_iter().flatten())
    }

    /// `⟦ηi = ηj⟧`, computed directly from the enumerations.
    pub fn index_equality(&self, i: usize, j: usize) -> Result<ClopenSet, SpaceError> {
        for index in [i, j] {
            if index >= self.k {
                return Err(SpaceError::IndexOutOfRange { index, k: self.k });
            }
        }
        let members = (0..self.len()).filter(|&p| {
            let alpha = &self.points[p].enumeration;
            alpha.image(i) == alpha.image(j)
        });
        Ok(ClopenSet::from_indices(self.len(), members))
    }

    /// `⟦m = m′⟧` for index tuples of equal length: the intersection of the
    /// componentwise equalities.
    pub fn tuple_equality(&self, m: &[usize], m2: &[usize]) -> Result<ClopenSet, SpaceError> {
        if m.len() != m2.len() {
            return Err(SpaceError::BindingLength { vars: m.len(), indices: m2.len() });
        }
        let mut set = self.full_set();
        for (&a, &b) in m.iter().zip(m2) {
            if a != b {
                set.intersect_with(&self.index_equality(a, b)?);
            }
        }
        Ok(set)
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }

    pub fn clear_cache(&self) {
        self.cache.write().expect("cache lock").clear();
    }

    /// Summary and, optionally, the full point list.
    pub fn to_json(&self, with_points: bool) -> Value {
        let mut v = json!({
            "space_hash": self.hash,
            "K": self.k,
            "mode": self.mode,
            "max_size": self.class.max_size(),
            "model_count": self.class.len(),
            "point_count": self.len(),
            "points_per_model": self.model_ranges.iter().map(|r| r.len()).collect::<Vec<_>>(),
        });
        if with_points {
            let points: Vec<Value> = self
                .points
                .iter()
                .enumerate()
                .map(|(i, p)| json!({"index": i, "model": p.model, "enumeration": p.enumeration}))
                .collect();
            v["points"] = Value::Array(points);
        }
        v
    }
}

fn space_hash(class: &ModelClass, k: usize, mode: Mode) -> String {
    let encodings: Vec<Vec<usize>> = class.models().iter().map(Structure::encoding).collect();
    let description = json!({
        "theory": class.theory().to_text(),
        "max_size": class.max_size(),
        "K": k,
        "mode": mode,
        "models": encodings,
    });
    hex::encode(Sha256::digest(description.to_string().as_bytes()))
}
