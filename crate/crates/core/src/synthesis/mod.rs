//! Definitions of invariant predicates: local formulas around single points,
//! covers of `p(η0)`, the global family and the finite cover extraction.

mod cover;
mod definition;
mod local;

use serde::Serializer;
use thiserror::Error;

pub use cover::{eta_cover, global_family, EtaCover, FamilyMember, GlobalFamily, OvershootViolation};
pub use definition::{
    element_classes, factors_through_elements, synthesize_definition, verify_definition, FactorConflict, Mismatch,
    SynthesisResult, VerificationReport, VerificationRow,
};
pub use local::{
    check_transport, eq_alpha_formula, local_formula, permutation_from_partial, zeta_witness, LocalDatum,
    TransportFailure,
};

use crate::action::{ActionError, InvarianceViolation};
use crate::models::DescribeError;
use crate::predicates::{ExtensionalityViolation, PredicateError};
use crate::space::SpaceError;
use crate::syntax::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("index {index} is out of range for K = {k}")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("point {point} is not in the target set")]
    NotInSet { point: usize },
    #[error("fibre of element {element} is exhausted at position {position}")]
    FibreExhausted { element: usize, position: usize },
    #[error("equality pattern mismatch: {0}")]
    PatternMismatch(String),
    #[error("predicate is not extensional: p{:?} ∩ ⟦{:?} = {:?}⟧ contains point {} outside p{:?}", .0.tuple, .0.tuple, .0.other, .0.point, .0.other)]
    NotExtensional(ExtensionalityViolation),
    #[error("predicate is not invariant: {} moves p{:?} off p{:?} at point {}", .0.permutation, .0.tuple, .0.image_tuple, .0.point)]
    NotInvariant(InvarianceViolation),
    #[error(transparent)]
    Describe(#[from] DescribeError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Predicate(#[from] PredicateError),
}

/// Formulas appear in exports in their printed form.
pub(crate) fn serialize_formula<S: Serializer>(f: &Formula, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(f)
}
