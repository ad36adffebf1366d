use std::sync::Arc;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::syntax::{Signature, SymbolKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("a structure needs at least one element")]
    EmptyDomain,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{0}` is not a {1}")]
    WrongKind(String, &'static str),
    #[error("`{symbol}` expects {expected} argument(s), found {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("element {value} lies outside a domain of size {size}")]
    OutOfDomain { value: usize, size: usize },
    #[error("function table for `{symbol}` needs {expected} entries, found {found}")]
    TableSize { symbol: String, expected: usize, found: usize },
}

/// Position of `tuple` in the lexicographic order of `{0..n-1}^len`.
pub fn tuple_rank(tuple: &[usize], n: usize) -> usize {
    tuple.iter().fold(0, |acc, &t| acc * n + t)
}

/// Inverse of [`tuple_rank`].
pub fn tuple_unrank(mut rank: usize, n: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = rank % n;
        rank /= n;
    }
    out
}

/// `n^len`, the number of tuples of length `len` over `n` values.
pub fn tuple_count(n: usize, len: usize) -> usize {
    n.pow(len as u32)
}

/// A finite two-valued structure over `{0..size-1}`.
///
/// Relation and function tables are indexed by [`tuple_rank`] and stored in
/// signature declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    signature: Arc<Signature>,
    size: usize,
    relations: Vec<Vec<bool>>,
    functions: Vec<Vec<usize>>,
    constants: Vec<usize>,
}

impl Structure {
    /// All relations empty, every function constantly 0, every constant 0.
    pub fn new(signature: Arc<Signature>, size: usize) -> Result<Self, StructureError> {
        if size == 0 {
            return Err(StructureError::EmptyDomain);
        }
        let relations = signature.relations().iter().map(|r| vec![false; tuple_count(size, r.arity)]).collect();
        let functions = signature.functions().iter().map(|f| vec![0; tuple_count(size, f.arity)]).collect();
        let constants = vec![0; signature.constants().len()];
        Ok(Self { signature, size, relations, functions, constants })
    }

    fn check_element(&self, value: usize) -> Result<(), StructureError> {
        if value < self.size {
            Ok(())
        } else {
            Err(StructureError::OutOfDomain { value, size: self.size })
        }
    }

    pub fn with_relation(mut self, name: &str, tuples: &[&[usize]]) -> Result<Self, StructureError> {
        let Some(SymbolKind::Relation(idx)) = self.signature.lookup(name) else {
            return Err(self.kind_error(name, "relation"));
        };
        let arity = self.signature.relations()[idx].arity;
        for t in tuples {
            if t.len() != arity {
                return Err(StructureError::ArityMismatch { symbol: name.into(), expected: arity, found: t.len() });
            }
            t.iter().try_for_each(|&v| self.check_element(v))?;
            let rank = tuple_rank(t, self.size);
            self.relations[idx][rank] = true;
        }
        Ok(self)
    }

    /// Sets the full table of a function; `values[k]` is the value at the
    /// argument tuple of rank `k`.
    pub fn with_function(mut self, name: &str, values: &[usize]) -> Result<Self, StructureError> {
        let Some(SymbolKind::Function(idx)) = self.signature.lookup(name) else {
            return Err(self.kind_error(name, "function"));
        };
        let expected = self.functions[idx].len();
        if values.len() != expected {
            return Err(StructureError::TableSize { symbol: name.into(), expected, found: values.len() });
        }
        values.iter().try_for_each(|&v| self.check_element(v))?;
        self.functions[idx] = values.to_vec();
        Ok(self)
    }

    pub fn with_constant(mut self, name: &str, value: usize) -> Result<Self, StructureError> {
        let Some(SymbolKind::Constant(idx)) = self.signature.lookup(name) else {
            return Err(self.kind_error(name, "constant"));
        };
        self.check_element(value)?;
        self.constants[idx] = value;
        Ok(self)
    }

    fn kind_error(&self, name: &str, kind: &'static str) -> StructureError {
        match self.signature.lookup(name) {
            None => StructureError::UnknownSymbol(name.into()),
            Some(_) => StructureError::WrongKind(name.into(), kind),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn relation_table(&self, idx: usize) -> &[bool] {
        &self.relations[idx]
    }

    pub fn function_table(&self, idx: usize) -> &[usize] {
        &self.functions[idx]
    }

    pub fn relation_holds(&self, idx: usize, tuple: &[usize]) -> bool {
        self.relations[idx][tuple_rank(tuple, self.size)]
    }

    pub fn function_value(&self, idx: usize, args: &[usize]) -> usize {
        self.functions[idx][tuple_rank(args, self.size)]
    }

    pub fn constant_value(&self, idx: usize) -> usize {
        self.constants[idx]
    }

    /// Integer encoding: size, relation bits, function tables, constants.
    /// The canonical representative of an isomorphism class is the member
    /// with the lexicographically least encoding.
    pub fn encoding(&self) -> Vec<usize> {
        let mut out = vec![self.size];
        for table in &self.relations {
            out.extend(table.iter().map(|&b| b as usize));
        }
        for table in &self.functions {
            out.extend_from_slice(table);
        }
        out.extend_from_slice(&self.constants);
        out
    }

    /// Rebuilds a structure from [`Structure::encoding`].
    pub fn from_encoding(signature: Arc<Signature>, encoding: &[usize]) -> Result<Self, StructureError> {
        let size = *encoding.first().ok_or(StructureError::EmptyDomain)?;
        let mut s = Self::new(signature, size)?;
        let mut pos = 1;
        let mut take = |len: usize| -> Result<Vec<usize>, StructureError> {
            let chunk = encoding.get(pos..pos + len).ok_or(StructureError::TableSize {
                symbol: "<encoding>".into(),
                expected: pos + len,
                found: encoding.len(),
            })?;
            pos += len;
            Ok(chunk.to_vec())
        };
        for table in s.relations.iter_mut() {
            *table = take(table.len())?.into_iter().map(|b| b != 0).collect();
        }
        for table in s.functions.iter_mut() {
            *table = take(table.len())?;
        }
        s.constants = take(s.constants.len())?;
        let values = s.functions.iter().flatten().chain(&s.constants);
        if let Some(&value) = values.into_iter().find(|&&v| v >= size) {
            return Err(StructureError::OutOfDomain { value, size });
        }
        Ok(s)
    }

    /// The isomorphic copy in which element `a` is renamed `perm[a]`.
    pub fn relabel(&self, perm: &[usize]) -> Structure {
        let n = self.size;
        let mut out = self.clone();
        for (idx, sym) in self.signature.relations().iter().enumerate() {
            let table = &mut out.relations[idx];
            table.iter_mut().for_each(|b| *b = false);
            for (rank, &holds) in self.relations[idx].iter().enumerate() {
                if holds {
                    let t: Vec<_> = tuple_unrank(rank, n, sym.arity).into_iter().map(|a| perm[a]).collect();
                    table[tuple_rank(&t, n)] = true;
                }
            }
        }
        for (idx, sym) in self.signature.functions().iter().enumerate() {
            for (rank, &value) in self.functions[idx].iter().enumerate() {
                let t: Vec<_> = tuple_unrank(rank, n, sym.arity).into_iter().map(|a| perm[a]).collect();
                out.functions[idx][tuple_rank(&t, n)] = perm[value];
            }
        }
        for (idx, &c) in self.constants.iter().enumerate() {
            out.constants[idx] = perm[c];
        }
        out
    }

    /// Tables as JSON: relations as lists of tuples, functions as
    /// `[args.., value]` rows, constants as elements.
    pub fn to_json(&self) -> Value {
        let n = self.size;
        let mut relations = Map::new();
        for (idx, sym) in self.signature.relations().iter().enumerate() {
            let tuples: Vec<Value> = (0..self.relations[idx].len())
                .filter(|&rank| self.relations[idx][rank])
                .map(|rank| json!(tuple_unrank(rank, n, sym.arity)))
                .collect();
            relations.insert(sym.name.clone(), Value::Array(tuples));
        }
        let mut functions = Map::new();
        for (idx, sym) in self.signature.functions().iter().enumerate() {
            let rows: Vec<Value> = self.functions[idx]
                .iter()
                .enumerate()
                .map(|(rank, &v)| {
                    let mut row = tuple_unrank(rank, n, sym.arity);
                    row.push(v);
                    json!(row)
                })
                .collect();
            functions.insert(sym.name.clone(), Value::Array(rows));
        }
        let constants: Map<String, Value> =
            self.signature.constants().iter().zip(&self.constants).map(|(c, &v)| (c.clone(), json!(v))).collect();
        json!({
            "size": n,
            "relations": relations,
            "functions": functions,
            "constants": constants,
        })
    }
}
