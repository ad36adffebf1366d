use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ActionError;

/// A bijection of `{0..K-1}`, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = ActionError;

    fn try_from(images: Vec<usize>) -> Result<Self, Self::Error> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, ActionError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(ActionError::NotBijection(images));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(k: usize) -> Self {
        Self { images: (0..k).collect() }
    }

    pub fn transposition(k: usize, a: usize, b: usize) -> Result<Self, ActionError> {
        Self::cycle(k, &[a, b])
    }

    /// The cycle `(c0 c1 … cm)`: `c0 ↦ c1 ↦ … ↦ cm ↦ c0`.
    pub fn cycle(k: usize, cycle: &[usize]) -> Result<Self, ActionError> {
        let mut images: Vec<usize> = (0..k).collect();
        let mut seen = vec![false; k];
        for (pos, &c) in cycle.iter().enumerate() {
            if c >= k {
                return Err(ActionError::Parse(format!("point {c} outside 0..{k}")));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(ActionError::Parse(format!("cycle {cycle:?} repeats a point")));
            }
            images[c] = cycle[(pos + 1) % cycle.len()];
        }
        Ok(Self { images })
    }

    pub fn random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..k).collect();
        images.shuffle(rng);
        Self { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "permutations of different degree");
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// `π(m) = (π(m1), …, π(mn))`.
    pub fn apply_tuple(&self, tuple: &[usize]) -> Vec<usize> {
        tuple.iter().map(|&i| self.images[i]).collect()
    }

    /// Disjoint cycles of length at least 2, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.images[i];
            }
            out.push(cycle);
        }
        out
    }

    /// Accepts cycle notation such as `(0 1)(2 3 4)` or `()` (products of
    /// overlapping cycles compose right to left), or a JSON image
    /// array such as `[1,0,2,3]`.
    pub fn parse(text: &str, k: usize) -> Result<Self, ActionError> {
        let text = text.trim();
        if text.starts_with('[') {
            let images: Vec<usize> = serde_json::from_str(text).map_err(|e| ActionError::Parse(e.to_string()))?;
            if images.len() != k {
                return Err(ActionError::SizeMismatch { expected: k, found: images.len() });
            }
            return Self::new(images);
        }
        let mut perm = Self::identity(k);
        let mut rest = text;
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(|| ActionError::Parse(format!("expected `(` in `{text}`")))?;
            let close = open.find(')').ok_or_else(|| ActionError::Parse(format!("unclosed cycle in `{text}`")))?;
            let points = open[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| ActionError::Parse(format!("bad point `{s}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            if !points.is_empty() {
                perm = perm.compose(&Self::cycle(k, &points)?);
            }
            rest = open[close + 1..].trim_start();
        }
        Ok(perm)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// The transposition `(0 1)` and the cycle `(0 1 … K-1)`, deduplicated.
pub fn symmetric_generators(k: usize) -> Result<Vec<Permutation>, ActionError> {
    if k < 2 {
        return Err(ActionError::TooFewIndices(k));
    }
    let swap = Permutation::transposition(k, 0, 1)?;
    let rotation = Permutation::cycle(k, &(0..k).collect::<Vec<_>>())?;
    let mut gens = vec![swap];
    if !gens.contains(&rotation) {
        gens.push(rotation);
    }
    Ok(gens)
}
