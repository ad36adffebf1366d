#![allow(dead_code)]

use std::path::PathBuf;

use bvdef::models::enumerate_models;
use bvdef::space::{Mode, Space};
use bvdef::syntax::Theory;

pub fn theory(name: &str) -> Theory {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../theories").join(name);
    Theory::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn space(name: &str, max_size: usize, k: usize, mode: Mode) -> Space {
    Space::build(enumerate_models(&theory(name), max_size).unwrap(), k, mode).unwrap()
}

/// `{unary r}`, no axioms, sizes up to 2, K = 4.
pub fn e1(mode: Mode) -> Space {
    space("unary.fol", 2, 4, mode)
}

/// Simple graphs up to 3 vertices, K = 12.
pub fn graphs() -> Space {
    space("graphs.fol", 3, 12, Mode::Balanced)
}

/// A unary function, a constant and a unary relation; sizes up to 2, K = 4.
pub fn pointed_map() -> Space {
    space("pointed_map.fol", 2, 4, Mode::Balanced)
}
