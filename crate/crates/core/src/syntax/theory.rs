use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use super::formula::Formula;
use super::parse::{parse_formula, ParseError};
use super::signature::{Signature, SignatureError};

#[derive(Debug, Error)]
pub enum TheoryError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Signature {
        line: usize,
        #[source]
        source: SignatureError,
    },
    #[error("line {line}: {source}")]
    Formula {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("line {line}: axiom has free variables {vars:?}")]
    OpenAxiom { line: usize, vars: Vec<String> },
    #[error("cannot read theory file: {0}")]
    Io(#[from] std::io::Error),
}

/// A signature plus a finite list of axioms (sentences).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    pub signature: Signature,
    pub axioms: Vec<Formula>,
}

impl Theory {
    pub fn new(signature: Signature, axioms: Vec<Formula>) -> Self {
        Self { signature, axioms }
    }

    pub fn empty(signature: Signature) -> Self {
        Self::new(signature, Vec::new())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TheoryError> {
        std::fs::read_to_string(path)?.parse()
    }

    /// Renders the theory back into the line format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in self.signature.relations() {
            out.push_str(&format!("relation {} {}\n", r.name, r.arity));
        }
        for f in self.signature.functions() {
            out.push_str(&format!("function {} {}\n", f.name, f.arity));
        }
        for c in self.signature.constants() {
            out.push_str(&format!("constant {c}\n"));
        }
        for a in &self.axioms {
            out.push_str(&format!("axiom {a}\n"));
        }
        out
    }
}

impl FromStr for Theory {
    type Err = TheoryError;

    /// Line format: `relation <name> <arity>`, `function <name> <arity>`,
    /// `constant <name>`, `axiom <formula>`; `#` starts a comment. Symbol
    /// declarations may appear anywhere in the file.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut signature = Signature::empty();
        let mut pending = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (keyword, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
            let rest = rest.trim();
            let syntax = |message: &str| TheoryError::Syntax { line, message: message.to_string() };
            let sig_err = |source| TheoryError::Signature { line, source };
            match keyword {
                "relation" | "function" => {
                    let mut words = rest.split_whitespace();
                    let (Some(name), Some(arity), None) = (words.next(), words.next(), words.next()) else {
                        return Err(syntax(&format!("expected `{keyword} <name> <arity>`")));
                    };
                    let arity: usize = arity.parse().map_err(|_| syntax("arity must be a non-negative integer"))?;
                    if keyword == "relation" {
                        signature.add_relation(name, arity).map_err(sig_err)?;
                    } else {
                        signature.add_function(name, arity).map_err(sig_err)?;
                    }
                }
                "constant" => {
                    let mut words = rest.split_whitespace();
                    let (Some(name), None) = (words.next(), words.next()) else {
                        return Err(syntax("expected `constant <name>`"));
                    };
                    signature.add_constant(name).map_err(sig_err)?;
                }
                "axiom" => {
                    if rest.is_empty() {
                        return Err(syntax("empty axiom"));
                    }
                    pending.push((line, rest.to_string()));
                }
                other => return Err(syntax(&format!("unknown directive `{other}`"))),
            }
        }
        let mut axioms = Vec::with_capacity(pending.len());
        for (line, text) in pending {
            let f = parse_formula(&text, &signature).map_err(|source| TheoryError::Formula { line, source })?;
            let vars = f.free_variables();
            if !vars.is_empty() {
                return Err(TheoryError::OpenAxiom { line, vars });
            }
            axioms.push(f);
        }
        Ok(Theory { signature, axioms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRAPHS: &str = "\
# simple graphs
relation e 2
axiom all x ~e(x,x)      # irreflexive
axiom all x all y (e(x,y) -> e(y,x))
";

    #[test]
    fn parses_declarations_and_axioms() {
        let t: Theory = GRAPHS.parse().unwrap();
        assert_eq!(t.signature.relations().len(), 1);
        assert_eq!(t.axioms.len(), 2);
        let again: Theory = t.to_text().parse().unwrap();
        assert_eq!(again, t);
    }

    #[test]
    fn declarations_may_follow_axioms() {
        let t: Theory = "axiom ex x r(x)\nrelation r 1\n".parse().unwrap();
        assert_eq!(t.axioms.len(), 1);
    }

    #[test]
    fn reports_line_numbers() {
        let err = "relation r 1\nrelation r 2\n".parse::<Theory>().unwrap_err();
        assert!(matches!(err, TheoryError::Signature { line: 2, .. }));
        let err = "relation r 1\n\naxiom r(x)\n".parse::<Theory>().unwrap_err();
        assert!(matches!(err, TheoryError::OpenAxiom { line: 3, .. }));
        let err = "relation r 1\naxiom r(x,y)\n".parse::<Theory>().unwrap_err();
        assert!(matches!(err, TheoryError::Formula { line: 2, .. }));
        let err = "predicate p 1\n".parse::<Theory>().unwrap_err();
        assert!(matches!(err, TheoryError::Syntax { line: 1, .. }));
    }
}
