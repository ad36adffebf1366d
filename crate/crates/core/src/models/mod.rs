//! Classical finite structures: satisfaction, isomorphism, exhaustive
//! enumeration of a theory's models and complete descriptions.

mod describe;
mod enumerate;
mod eval;
mod iso;
mod structure;

pub use describe::{complete_description, DescribeError, CLOSURE_VAR};
pub use enumerate::{
    canonical_form, enumerate_models, enumerate_models_with_cap, ModelClass, ModelError, DEFAULT_CANDIDATE_CAP,
};
pub use eval::{evaluate_classical, holds, CompiledFormula, EvalError};
pub use iso::{are_isomorphic, automorphisms, find_isomorphisms};
pub use structure::{tuple_count, tuple_rank, tuple_unrank, Structure, StructureError};
