//! Isomorphisms between finite structures by backtracking over bijections.
//! Elements of the source are mapped in increasing order and every relation,
//! function graph and constant is checked as soon as all of its elements
//! have images, so results come out in lexicographic order.

use super::structure::{tuple_count, tuple_rank, tuple_unrank, Structure};

struct Search<'a> {
    a: &'a Structure,
    b: &'a Structure,
    map: Vec<usize>,
    used: Vec<bool>,
    found: Vec<Vec<usize>>,
    first_only: bool,
}

impl Search<'_> {
    /// Checks every constraint whose last-assigned element is `k`.
    fn consistent(&self, k: usize) -> bool {
        let (a, b) = (self.a, self.b);
        let n = a.size();
        let sig = a.signature();
        let image = |t: &[usize]| -> Vec<usize> { t.iter().map(|&x| self.map[x]).collect() };

        for idx in 0..sig.constants().len() {
            if a.constant_value(idx) == k && b.constant_value(idx) != self.map[k] {
                return false;
            }
        }
        for (idx, sym) in sig.relations().iter().enumerate() {
            for rank in 0..tuple_count(k + 1, sym.arity) {
                let t = tuple_unrank(rank, k + 1, sym.arity);
                if !t.contains(&k) {
                    continue;
                }
                if a.relation_table(idx)[tuple_rank(&t, n)] != b.relation_holds(idx, &image(&t)) {
                    return false;
                }
            }
        }
        for (idx, sym) in sig.functions().iter().enumerate() {
            for rank in 0..tuple_count(k + 1, sym.arity) {
                let t = tuple_unrank(rank, k + 1, sym.arity);
                let value = a.function_value(idx, &t);
                if value > k || (!t.contains(&k) && value != k) {
                    continue;
                }
                if b.function_value(idx, &image(&t)) != self.map[value] {
                    return false;
                }
            }
        }
        true
    }

    fn extend(&mut self, k: usize) {
        let n = self.a.size();
        if k == n {
            self.found.push(self.map.clone());
            return;
        }
        for candidate in 0..n {
            if self.used[candidate] {
                continue;
            }
            self.map[k] = candidate;
            self.used[candidate] = true;
            if self.consistent(k) {
                self.extend(k + 1);
            }
            self.used[candidate] = false;
            if self.first_only && !self.found.is_empty() {
                return;
            }
        }
    }
}

fn search(a: &Structure, b: &Structure, first_only: bool) -> Vec<Vec<usize>> {
    if a.size() != b.size() || a.signature() != b.signature() {
        return Vec::new();
    }
    let n = a.size();
    let mut s = Search { a, b, map: vec![0; n], used: vec![false; n], found: Vec::new(), first_only };
    s.extend(0);
    s.found
}

/// All isomorphisms `a → b`, each as the array of images of `0..n`, in
/// lexicographic order. Empty when the sizes or signatures differ.
pub fn find_isomorphisms(a: &Structure, b: &Structure) -> Vec<Vec<usize>> {
    search(a, b, false)
}

pub fn are_isomorphic(a: &Structure, b: &Structure) -> bool {
    !search(a, b, true).is_empty()
}

/// The automorphism group of `m`; the identity comes first.
pub fn automorphisms(m: &Structure) -> Vec<Vec<usize>> {
    find_isomorphisms(m, m)
}
