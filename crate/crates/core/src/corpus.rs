//! Seeded random formulas for property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{Formula, Signature, Term};

/// Shape limits for generated formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusConfig {
    /// Free variables atoms may mention.
    pub free: Vec<String>,
    /// Maximum quantifier depth.
    pub quantifier_depth: usize,
    /// Maximum nesting of connectives and quantifiers.
    pub size: usize,
}

impl CorpusConfig {
    pub fn new(free: Vec<String>) -> Self {
        Self { free, quantifier_depth: 2, size: 4 }
    }
}

struct Generator<'a, R: Rng> {
    sig: &'a Signature,
    rng: &'a mut R,
}

impl<R: Rng> Generator<'_, R> {
    fn term(&mut self, scope: &[String], depth: usize) -> Option<Term> {
        let consts = self.sig.constants();
        let funcs = self.sig.functions();
        let mut kinds = Vec::new();
        if !scope.is_empty() {
            kinds.extend([0, 0, 0]);
        }
        if !consts.is_empty() {
            kinds.push(1);
        }
        if !funcs.is_empty() && depth > 0 && (!scope.is_empty() || !consts.is_empty()) {
            kinds.push(2);
        }
        match *kinds.choose(self.rng)? {
            0 => Some(Term::var(scope.choose(self.rng)?.clone())),
            1 => Some(Term::constant(consts.choose(self.rng)?.clone())),
            _ => {
                let f = funcs.choose(self.rng)?.clone();
                let args = (0..f.arity).map(|_| self.term(scope, depth - 1)).collect::<Option<Vec<_>>>()?;
                Some(Term::app(f.name, args))
            }
        }
    }

    fn atom(&mut self, scope: &[String]) -> Formula {
        let relations = self.sig.relations();
        if !relations.is_empty() && self.rng.gen_bool(0.6) {
            let r = relations.choose(self.rng).expect("nonempty").clone();
            if let Some(args) = (0..r.arity).map(|_| self.term(scope, 1)).collect::<Option<Vec<_>>>() {
                return Formula::rel(r.name, args);
            }
        }
        match (self.term(scope, 1), self.term(scope, 1)) {
            (Some(a), Some(b)) => Formula::eq(a, b),
            _ if self.rng.gen_bool(0.5) => Formula::True,
            _ => Formula::False,
        }
    }

    fn formula(&mut self, scope: &mut Vec<String>, qdepth: usize, size: usize) -> Formula {
        let grounded = !scope.is_empty() || !self.sig.constants().is_empty();
        if size == 0 || (grounded && self.rng.gen_bool(0.25)) {
            if !grounded && qdepth > 0 {
                return self.quantified(scope, qdepth, size.max(1));
            }
            return self.atom(scope);
        }
        let choice = self.rng.gen_range(0..if qdepth > 0 { 7 } else { 5 });
        match choice {
            0 => Formula::not(self.formula(scope, qdepth, size - 1)),
            1 => Formula::And(vec![self.formula(scope, qdepth, size - 1), self.formula(scope, qdepth, size - 1)]),
            2 => Formula::Or(vec![self.formula(scope, qdepth, size - 1), self.formula(scope, qdepth, size - 1)]),
            3 => Formula::implies(self.formula(scope, qdepth, size - 1), self.formula(scope, qdepth, size - 1)),
            4 => Formula::iff(self.formula(scope, qdepth, size - 1), self.formula(scope, qdepth, size - 1)),
            _ => self.quantified(scope, qdepth, size),
        }
    }

    fn quantified(&mut self, scope: &mut Vec<String>, qdepth: usize, size: usize) -> Formula {
        // bound names u1, u2, … by depth, so nested binders never clash
        let name = format!("u{}", scope.iter().filter(|v| v.starts_with('u')).count() + 1);
        scope.push(name.clone());
        let body = self.formula(scope, qdepth - 1, size - 1);
        scope.pop();
        if self.rng.gen_bool(0.5) {
            Formula::Exists(name, Box::new(body))
        } else {
            Formula::Forall(name, Box::new(body))
        }
    }
}

/// One random formula whose free variables are among `config.free`.
pub fn random_formula<R: Rng>(sig: &Signature, config: &CorpusConfig, rng: &mut R) -> Formula {
    let mut scope = config.free.clone();
    Generator { sig, rng }.formula(&mut scope, config.quantifier_depth, config.size)
}

/// `count` formulas from a ChaCha8 stream seeded with `seed`.
pub fn corpus(sig: &Signature, config: &CorpusConfig, count: usize, seed: u64) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_formula(sig, config, &mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, x_vars};

    fn sigs() -> Vec<Signature> {
        vec![
            Signature::empty().with_relation("r", 1).unwrap(),
            Signature::empty().with_relation("e", 2).unwrap(),
            Signature::empty()
                .with_function("f", 1)
                .unwrap()
                .with_constant("c")
                .unwrap()
                .with_relation("r", 1)
                .unwrap(),
            Signature::empty(),
        ]
    }

    #[test]
    fn shape_limits_hold() {
        for sig in sigs() {
            for free in [vec![], x_vars(2)] {
                let config = CorpusConfig::new(free.clone());
                for f in corpus(&sig, &config, 200, 3) {
                    assert!(f.check(&sig).is_ok(), "{f}");
                    assert!(f.quantifier_depth() <= 2, "{f}");
                    assert!(f.free_variables().iter().all(|v| free.contains(v)), "{f}");
                    let reparsed = parse_formula(&f.to_string(), &sig).unwrap();
                    assert!(reparsed.alpha_eq(&f), "{f}");
                }
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let sig = &sigs()[0];
        let config = CorpusConfig::new(x_vars(1));
        let a: Vec<String> = corpus(sig, &config, 20, 9).iter().map(ToString::to_string).collect();
        let b: Vec<String> = corpus(sig, &config, 20, 9).iter().map(ToString::to_string).collect();
        let c: Vec<String> = corpus(sig, &config, 20, 10).iter().map(ToString::to_string).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
