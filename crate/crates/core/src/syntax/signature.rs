use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Words the formula grammar reserves; they can never name a symbol.
pub const RESERVED_WORDS: [&str; 4] = ["all", "ex", "true", "false"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("symbol `{0}` is declared more than once")]
    Duplicate(String),
    #[error("symbol `{0}` must have arity at least 1")]
    ZeroArity(String),
    #[error("`{0}` is not a valid symbol name")]
    InvalidName(String),
}

/// A relation or function symbol together with its arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// What a name refers to in a [`Signature`]; the payload is the position of
/// the symbol in its declaration list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Relation(usize),
    Function(usize),
    Constant(usize),
}

/// A finite single-sorted signature. Symbol order is declaration order and
/// is significant: structures store their tables in this order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    relations: Vec<Symbol>,
    functions: Vec<Symbol>,
    constants: Vec<String>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new<R, F, C>(relations: R, functions: F, constants: C) -> Result<Self, SignatureError>
    where
        R: IntoIterator<Item = (String, usize)>,
        F: IntoIterator<Item = (String, usize)>,
        C: IntoIterator<Item = String>,
    {
        let mut sig = Self::empty();
        for (name, arity) in relations {
            sig.add_relation(&name, arity)?;
        }
        for (name, arity) in functions {
            sig.add_function(&name, arity)?;
        }
        for name in constants {
            sig.add_constant(&name)?;
        }
        Ok(sig)
    }

    fn check_fresh(&self, name: &str) -> Result<(), SignatureError> {
        if !is_identifier(name) || RESERVED_WORDS.contains(&name) {
            return Err(SignatureError::InvalidName(name.to_string()));
        }
        if self.lookup(name).is_some() {
            return Err(SignatureError::Duplicate(name.to_string()));
        }
        Ok(())
    }

    pub fn add_relation(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        self.check_fresh(name)?;
        if arity == 0 {
            return Err(SignatureError::ZeroArity(name.to_string()));
        }
        self.relations.push(Symbol { name: name.to_string(), arity });
        Ok(())
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        self.check_fresh(name)?;
        if arity == 0 {
            return Err(SignatureError::ZeroArity(name.to_string()));
        }
        self.functions.push(Symbol { name: name.to_string(), arity });
        Ok(())
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), SignatureError> {
        self.check_fresh(name)?;
        self.constants.push(name.to_string());
        Ok(())
    }

    /// Builder-style variant of [`Signature::add_relation`].
    pub fn with_relation(mut self, name: &str, arity: usize) -> Result<Self, SignatureError> {
        self.add_relation(name, arity)?;
        Ok(self)
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Result<Self, SignatureError> {
        self.add_function(name, arity)?;
        Ok(self)
    }

    pub fn with_constant(mut self, name: &str) -> Result<Self, SignatureError> {
        self.add_constant(name)?;
        Ok(self)
    }

    pub fn relations(&self) -> &[Symbol] {
        &self.relations
    }

    pub fn functions(&self) -> &[Symbol] {
        &self.functions
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolKind> {
        if let Some(i) = self.relations.iter().position(|s| s.name == name) {
            return Some(SymbolKind::Relation(i));
        }
        if let Some(i) = self.functions.iter().position(|s| s.name == name) {
            return Some(SymbolKind::Function(i));
        }
        self.constants.iter().position(|c| c == name).map(SymbolKind::Constant)
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty() && self.functions.is_empty() && self.constants.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_across_kinds() {
        let sig = Signature::empty().with_relation("r", 1).unwrap();
        assert_eq!(sig.clone().with_constant("r"), Err(SignatureError::Duplicate("r".into())));
        assert_eq!(sig.with_function("r", 2), Err(SignatureError::Duplicate("r".into())));
    }

    #[test]
    fn rejects_zero_arity_and_bad_names() {
        assert_eq!(Signature::empty().with_relation("p", 0), Err(SignatureError::ZeroArity("p".into())));
        assert!(Signature::empty().with_constant("all").is_err());
        assert!(Signature::empty().with_constant("1x").is_err());
        assert!(Signature::empty().with_constant("a_1").is_ok());
    }

    #[test]
    fn lookup_reports_kind_and_position() {
        let sig =
            Signature::new([("r".to_string(), 1), ("s".to_string(), 2)], [("f".to_string(), 1)], ["c".to_string()])
                .unwrap();
        assert_eq!(sig.lookup("s"), Some(SymbolKind::Relation(1)));
        assert_eq!(sig.lookup("f"), Some(SymbolKind::Function(0)));
        assert_eq!(sig.lookup("c"), Some(SymbolKind::Constant(0)));
        assert_eq!(sig.lookup("x"), None);
    }
}
