//! First-order syntax: signatures, terms, formulas, the ASCII surface
//! syntax, theory files and the functional-relation translation.

mod formula;
mod parse;
mod print;
mod signature;
mod theory;
mod translate;

pub use formula::{fresh_name, x_vars, y_vars, Formula, Term, WellFormedError};
pub use parse::{parse_formula, ParseError, ParseErrorKind};
pub use signature::{Signature, SignatureError, Symbol, SymbolKind, RESERVED_WORDS};
pub use theory::{Theory, TheoryError};
pub use translate::{is_relational, translate_to_relational};
