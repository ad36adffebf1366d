use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SpaceError;

/// Fibre discipline for enumerations of a model onto `{0..K-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every fibre has exactly `K / n` indices.
    #[default]
    Balanced,
    /// Every fibre is nonempty.
    Unbalanced,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Balanced => "balanced",
            Mode::Unbalanced => "unbalanced",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "balanced" => Ok(Mode::Balanced),
            "unbalanced" => Ok(Mode::Unbalanced),
            other => Err(format!("unknown mode `{other}` (expected balanced or unbalanced)")),
        }
    }
}

/// A surjection from the index set `{0..K-1}` onto a model's domain,
/// stored as the array of images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Enumeration(Vec<usize>);

impl Enumeration {
    pub fn new(images: Vec<usize>) -> Self {
        Self(images)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, index: usize) -> usize {
        self.0[index]
    }

    /// Images of an index tuple.
    pub fn images(&self, indices: &[usize]) -> Vec<usize> {
        indices.iter().map(|&i| self.0[i]).collect()
    }

    /// Indices mapped to `element`, in increasing order.
    pub fn fibre(&self, element: usize) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] == element).collect()
    }

    pub fn fibre_sizes(&self, size: usize) -> Vec<usize> {
        let mut sizes = vec![0; size];
        for &a in &self.0 {
            if a < size {
                sizes[a] += 1;
            }
        }
        sizes
    }

    /// `θ ∘ α` for a map `θ` on the model's elements.
    pub fn compose(&self, theta: &[usize]) -> Enumeration {
        Enumeration(self.0.iter().map(|&a| theta[a]).collect())
    }

    /// `α ∘ π⁻¹`, given `π` as an image array on indices.
    pub fn precompose_inverse(&self, perm: &[usize]) -> Enumeration {
        let mut out = vec![0; self.0.len()];
        for (i, &a) in self.0.iter().enumerate() {
            out[perm[i]] = a;
        }
        Enumeration(out)
    }

    /// Checks length, range and the fibre condition of `mode`.
    pub fn validate(&self, size: usize, k: usize, mode: Mode) -> Result<(), SpaceError> {
        let invalid = |reason: String| SpaceError::InvalidEnumeration { enumeration: self.0.clone(), reason };
        if self.0.len() != k {
            return Err(invalid(format!("length {} differs from K = {k}", self.0.len())));
        }
        if let Some(&a) = self.0.iter().find(|&&a| a >= size) {
            return Err(invalid(format!("value {a} outside a domain of size {size}")));
        }
        let sizes = self.fibre_sizes(size);
        match mode {
            Mode::Balanced if sizes.iter().any(|&s| s * size != k) => {
                Err(invalid(format!("fibres {sizes:?} are not all of size K/n")))
            }
            Mode::Unbalanced if sizes.contains(&0) => Err(invalid(format!("fibres {sizes:?} include an empty one"))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Enumeration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

fn check_sizes(size: usize, k: usize, mode: Mode) -> Result<(), SpaceError> {
    if size == 0 || k < size {
        return Err(SpaceError::TooFewIndices { k, size });
    }
    if mode == Mode::Balanced && !k.is_multiple_of(size) {
        return Err(SpaceError::Divisibility { k, size });
    }
    Ok(())
}

/// Upper bound on the number of enumerations generated for one model.
pub(crate) fn enumeration_count_bound(size: usize, k: usize, mode: Mode) -> u128 {
    match mode {
        // multinomial K! / ((K/n)!)^n
        Mode::Balanced => {
            let fibre = (k / size.max(1)) as u128;
            let mut count: u128 = 1;
            let mut placed: u128 = 0;
            for _ in 0..size {
                for j in 1..=fibre {
                    placed += 1;
                    count = count.saturating_mul(placed) / j;
                }
            }
            count
        }
        Mode::Unbalanced => (size as u128).checked_pow(k as u32).unwrap_or(u128::MAX),
    }
}

/// All enumerations of a `size`-element model satisfying `mode`, in
/// lexicographic order.
pub fn enumerate_enumerations(size: usize, k: usize, mode: Mode) -> Result<Vec<Enumeration>, SpaceError> {
    check_sizes(size, k, mode)?;
    let mut out = Vec::new();
    let mut current = vec![0; k];
    let mut counts = vec![0usize; size];
    let fibre = k / size;
    fn go(
        pos: usize,
        size: usize,
        fibre: usize,
        mode: Mode,
        current: &mut Vec<usize>,
        counts: &mut Vec<usize>,
        out: &mut Vec<Enumeration>,
    ) {
        let k = current.len();
        if pos == k {
            out.push(Enumeration(current.clone()));
            return;
        }
        let missing = counts.iter().filter(|&&c| c == 0).count();
        for a in 0..size {
            match mode {
                Mode::Balanced if counts[a] == fibre => continue,
                // the remaining positions must still reach every unused element
                Mode::Unbalanced if k - pos - 1 < missing - usize::from(counts[a] == 0) => continue,
                _ => {}
            }
            current[pos] = a;
            counts[a] += 1;
            go(pos + 1, size, fibre, mode, current, counts, out);
            counts[a] -= 1;
        }
    }
    go(0, size, fibre, mode, &mut current, &mut counts, &mut out);
    Ok(out)
}
