//! Brute-force reference computations over relational signatures.
//!
//! Everything here is written directly from the definitions, with no
//! sharing of code with `bvdef`: structures are labelled relation tables,
//! isomorphism is a search over all bijections, points are enumerations
//! that are lex-least in their automorphism orbit.

use std::collections::VecDeque;

/// A structure on `{0..size}` with one truth table per relation, indexed by
/// the lexicographic rank of the argument tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labelled {
    pub size: usize,
    pub arities: Vec<usize>,
    pub tables: Vec<Vec<bool>>,
}

fn rank(tuple: &[usize], n: usize) -> usize {
    tuple.iter().fold(0, |acc, &t| acc * n + t)
}

fn unrank(mut r: usize, n: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = r % n;
        r /= n;
    }
    out
}

impl Labelled {
    pub fn holds(&self, rel: usize, tuple: &[usize]) -> bool {
        self.tables[rel][rank(tuple, self.size)]
    }

    /// The image of the structure under the bijection `theta`.
    pub fn relabel(&self, theta: &[usize]) -> Labelled {
        let tables = self
            .arities
            .iter()
            .zip(&self.tables)
            .map(|(&a, table)| {
                let mut out = vec![false; table.len()];
                for (r, &v) in table.iter().enumerate() {
                    let moved: Vec<usize> = unrank(r, self.size, a).iter().map(|&e| theta[e]).collect();
                    out[rank(&moved, self.size)] = v;
                }
                out
            })
            .collect();
        Labelled { size: self.size, arities: self.arities.clone(), tables }
    }
}

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for smaller in permutations(n - 1) {
        for pos in 0..n {
            let mut p = smaller.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Every labelled structure of the given size.
pub fn all_labelled(arities: &[usize], size: usize) -> Vec<Labelled> {
    let lens: Vec<usize> = arities.iter().map(|&a| size.pow(a as u32)).collect();
    let bits: usize = lens.iter().sum();
    (0u64..1 << bits)
        .map(|mask| {
            let mut offset = 0;
            let tables = lens
                .iter()
                .map(|&len| {
                    let t = (0..len).map(|i| mask >> (offset + i) & 1 == 1).collect();
                    offset += len;
                    t
                })
                .collect();
            Labelled { size, arities: arities.to_vec(), tables }
        })
        .collect()
}

pub fn isomorphic(a: &Labelled, b: &Labelled) -> bool {
    a.size == b.size && permutations(a.size).iter().any(|theta| a.relabel(theta) == *b)
}

pub fn automorphisms(m: &Labelled) -> Vec<Vec<usize>> {
    permutations(m.size).into_iter().filter(|theta| m.relabel(theta) == *m).collect()
}

/// One representative per isomorphism class of the structures of size
/// `1..=max_size` satisfying `keep`.
pub fn iso_classes(arities: &[usize], max_size: usize, keep: impl Fn(&Labelled) -> bool) -> Vec<Labelled> {
    let mut classes: Vec<Labelled> = Vec::new();
    for size in 1..=max_size {
        for m in all_labelled(arities, size) {
            if keep(&m) && !classes.iter().any(|c| isomorphic(c, &m)) {
                classes.push(m);
            }
        }
    }
    classes
}

/// Surjective, and with all fibres of size `k / n` when `balanced`.
pub fn admissible(alpha: &[usize], n: usize, balanced: bool) -> bool {
    let mut counts = vec![0; n];
    for &a in alpha {
        counts[a] += 1;
    }
    if balanced {
        counts.iter().all(|&c| c * n == alpha.len())
    } else {
        counts.iter().all(|&c| c > 0)
    }
}

/// `θ∘α` minimised over the automorphisms.
pub fn canonical(alpha: &[usize], auts: &[Vec<usize>]) -> Vec<usize> {
    auts.iter().map(|theta| alpha.iter().map(|&a| theta[a]).collect::<Vec<_>>()).min().expect("identity")
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OraclePoint {
    pub model: usize,
    pub alpha: Vec<usize>,
}

/// All points: admissible maps `K → |M|` that are lex-least in their orbit.
pub fn points(models: &[Labelled], k: usize, balanced: bool) -> Vec<OraclePoint> {
    let mut out = Vec::new();
    for (model, m) in models.iter().enumerate() {
        let auts = automorphisms(m);
        for r in 0..m.size.pow(k as u32) {
            let alpha = unrank(r, m.size, k);
            if admissible(&alpha, m.size, balanced) && canonical(&alpha, &auts) == alpha {
                out.push(OraclePoint { model, alpha });
            }
        }
    }
    out
}

/// Number of points without listing them.
pub fn point_count(models: &[Labelled], k: usize, balanced: bool) -> usize {
    let mut count = 0;
    for m in models {
        let auts = automorphisms(m);
        let mut alpha = vec![0; k];
        loop {
            if admissible(&alpha, m.size, balanced) && canonical(&alpha, &auts) == alpha {
                count += 1;
            }
            // odometer increment
            let mut i = k;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                alpha[i] += 1;
                if alpha[i] < m.size {
                    break;
                }
                alpha[i] = 0;
            }
            if alpha.iter().all(|&a| a == 0) {
                break;
            }
        }
    }
    count
}

/// Number of classes of (point, tuple) pairs under the full symmetric
/// group on indices and the moves `(x, m) ~ (x, m′)` with `α(m) = α(m′)`,
/// by breadth-first search over explicit moves.
pub fn atom_count(models: &[Labelled], points: &[OraclePoint], k: usize, arity: usize) -> usize {
    let auts: Vec<Vec<Vec<usize>>> = models.iter().map(automorphisms).collect();
    let tuples = k.pow(arity as u32);
    let locate = |model: usize, alpha: &[usize]| {
        let c = canonical(alpha, &auts[model]);
        points.iter().position(|p| p.model == model && p.alpha == c).expect("point exists")
    };
    let perms = permutations(k);
    // point images under each permutation: (M, α∘π⁻¹)
    let moved_points: Vec<Vec<usize>> = perms
        .iter()
        .map(|pi| {
            let mut inv = vec![0; k];
            for (i, &j) in pi.iter().enumerate() {
                inv[j] = i;
            }
            points
                .iter()
                .map(|p| {
                    let alpha: Vec<usize> = (0..k).map(|i| p.alpha[inv[i]]).collect();
                    locate(p.model, &alpha)
                })
                .collect()
        })
        .collect();

    let mut seen = vec![false; points.len() * tuples];
    let mut classes = 0;
    for start in 0..seen.len() {
        if seen[start] {
            continue;
        }
        classes += 1;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(id) = queue.pop_front() {
            let (x, r) = (id / tuples, id % tuples);
            let tuple = unrank(r, k, arity);
            let mut next = Vec::new();
            for (pi, images) in perms.iter().zip(&moved_points) {
                let t: Vec<usize> = tuple.iter().map(|&i| pi[i]).collect();
                next.push(images[x] * tuples + rank(&t, k));
            }
            let image: Vec<usize> = tuple.iter().map(|&i| points[x].alpha[i]).collect();
            for r2 in 0..tuples {
                let other: Vec<usize> = unrank(r2, k, arity).iter().map(|&i| points[x].alpha[i]).collect();
                if other == image {
                    next.push(x * tuples + r2);
                }
            }
            for n in next {
                if !seen[n] {
                    seen[n] = true;
                    queue.push_back(n);
                }
            }
        }
    }
    classes
}
