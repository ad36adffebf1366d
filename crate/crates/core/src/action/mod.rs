//! The symmetric group on indices acting on points and clopen sets by
//! `π(M, α) = (M, α∘π⁻¹)`, and invariance of predicates under it.

mod permutation;

use serde::Serialize;
use thiserror::Error;

pub use permutation::{symmetric_generators, Permutation};

use crate::exec;
use crate::predicates::{Predicate, PredicateError};
use crate::space::{ClopenSet, Point, Space, SpaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("{0:?} is not a permutation")]
    NotBijection(Vec<usize>),
    #[error("permutation acts on {found} indices, the space has K = {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("the symmetric group needs K >= 2, got {0}")]
    TooFewIndices(usize),
    #[error("bad permutation: {0}")]
    Parse(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Predicate(#[from] PredicateError),
}

fn check_degree(space: &Space, pi: &Permutation) -> Result<(), ActionError> {
    if pi.len() != space.k() {
        return Err(ActionError::SizeMismatch { expected: space.k(), found: pi.len() });
    }
    Ok(())
}

/// The image of one point: `(M, α∘π⁻¹)`, recanonicalized.
pub fn apply_to_point(space: &Space, pi: &Permutation, point: &Point) -> Result<Point, ActionError> {
    check_degree(space, pi)?;
    let moved = point.enumeration.precompose_inverse(pi.images());
    Ok(space.canonical_point(point.model, &moved)?)
}

/// The action of one permutation as a map on point indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionMap {
    permutation: Permutation,
    images: Vec<usize>,
}

impl ActionMap {
    pub fn new(space: &Space, pi: &Permutation) -> Result<Self, ActionError> {
        check_degree(space, pi)?;
        let images = exec::map_range(space.len(), |x| {
            let image = apply_to_point(space, pi, space.point(x)).expect("valid permutation");
            space.locate_canonical(&image).expect("images of points are points")
        });
        Ok(Self { permutation: pi.clone(), images })
    }

    pub fn permutation(&self) -> &Permutation {
        &self.permutation
    }

    /// Index of the image of point `x`.
    pub fn point(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn point_images(&self) -> &[usize] {
        &self.images
    }

    /// Pointwise image of a set.
    pub fn set(&self, set: &ClopenSet) -> ClopenSet {
        ClopenSet::from_indices(set.universe(), set.iter().map(|x| self.images[x]))
    }
}

/// Things the index permutations act on.
pub trait Permutable: Sized {
    fn permuted(&self, space: &Space, pi: &Permutation) -> Result<Self, ActionError>;
}

impl Permutable for Point {
    fn permuted(&self, space: &Space, pi: &Permutation) -> Result<Self, ActionError> {
        apply_to_point(space, pi, self)
    }
}

impl Permutable for ClopenSet {
    fn permuted(&self, space: &Space, pi: &Permutation) -> Result<Self, ActionError> {
        if self.universe() != space.len() {
            return Err(ActionError::SizeMismatch { expected: space.len(), found: self.universe() });
        }
        let map = ActionMap::new(space, pi)?;
        Ok(map.set(self))
    }
}

pub fn apply_permutation<T: Permutable>(space: &Space, pi: &Permutation, target: &T) -> Result<T, ActionError> {
    target.permuted(space, pi)
}

/// Which side of `π·p(m) = p(π(m))` the witness point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSide {
    /// In `π·p(m)` but not in `p(π(m))`.
    ImageOnly,
    /// In `p(π(m))` but not in `π·p(m)`.
    TargetOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceViolation {
    pub permutation_index: usize,
    pub permutation: String,
    pub tuple: Vec<usize>,
    pub image_tuple: Vec<usize>,
    pub point: usize,
    pub side: WitnessSide,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub permutations_checked: usize,
    /// Least violation by (permutation index, tuple).
    pub violation: Option<InvarianceViolation>,
}

/// Checks `π·p(m) = p(π(m))` for every supplied `π` and every tuple `m`.
pub fn check_invariance(space: &Space, p: &Predicate, perms: &[Permutation]) -> Result<InvarianceReport, ActionError> {
    p.check_space(space)?;
    let maps = perms.iter().map(|pi| ActionMap::new(space, pi)).collect::<Result<Vec<_>, _>>()?;
    check_invariance_with(p, &maps)
}

/// As [`check_invariance`] with precomputed action maps.
pub fn check_invariance_with(p: &Predicate, maps: &[ActionMap]) -> Result<InvarianceReport, ActionError> {
    for (index, map) in maps.iter().enumerate() {
        let pi = map.permutation();
        let found = exec::find_first(p.tuple_count(), |r| {
            let m = p.tuple(r);
            let image = map.set(&p.entries()[r]);
            let moved = pi.apply_tuple(&m);
            let target = p.get(&moved);
            let a = image.first_outside(target);
            let b = target.first_outside(&image);
            let (point, side) = match (a, b) {
                (None, None) => return None,
                (Some(x), Some(y)) if y < x => (y, WitnessSide::TargetOnly),
                (Some(x), _) => (x, WitnessSide::ImageOnly),
                (None, Some(y)) => (y, WitnessSide::TargetOnly),
            };
            Some(InvarianceViolation {
                permutation_index: index,
                permutation: pi.to_string(),
                tuple: m,
                image_tuple: moved,
                point,
                side,
            })
        });
        if let Some(v) = found {
            return Ok(InvarianceReport { invariant: false, permutations_checked: index + 1, violation: Some(v) });
        }
    }
    Ok(InvarianceReport { invariant: true, permutations_checked: maps.len(), violation: None })
}
