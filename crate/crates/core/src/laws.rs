//! Exact checks of the algebraic laws of the Boolean-valued interpretation
//! over a space: connectives, quantifiers, tautologies, equality, constants
//! and functions, term translation and equivariance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::action::{ActionError, ActionMap, Permutation};
use crate::models::{tuple_count, tuple_unrank};
use crate::space::{ClopenSet, Space, SpaceError};
use crate::syntax::{translate_to_relational, x_vars, Formula, Term};

/// Failures kept per report.
const MAX_FAILURES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub checks: usize,
    /// Total number of failed checks.
    pub failed: usize,
    /// The first few failures, described.
    pub failures: Vec<String>,
}

impl LawReport {
    fn new(law: &str) -> Self {
        Self { law: law.to_string(), checks: 0, failed: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

impl std::fmt::Display for LawReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}/{} checks hold", self.law, self.checks - self.failed, self.checks)?;
        for failure in &self.failures {
            write!(f, "\n  {failure}")?;
        }
        Ok(())
    }
}

fn eval(space: &Space, f: &Formula, vars: &[String], xi: &[usize]) -> Result<ClopenSet, SpaceError> {
    space.evaluate_bound(f, vars, xi)
}

/// `⟦φ∧ψ⟧ = ⟦φ⟧∩⟦ψ⟧`, `⟦φ∨ψ⟧ = ⟦φ⟧∪⟦ψ⟧`, `⟦¬φ⟧ = X∖⟦φ⟧`, and the
/// derived forms for `→` and `↔`, over consecutive pairs of `formulas`.
/// Free variables are `x1..xl`, bound to each tuple of `bindings`.
pub fn connective_laws(space: &Space, formulas: &[Formula], bindings: &[Vec<usize>]) -> Result<LawReport, SpaceError> {
    let mut report = LawReport::new("connectives");
    for xi in bindings {
        let vars = x_vars(xi.len());
        for pair in formulas.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let va = eval(space, a, &vars, xi)?;
            let vb = eval(space, b, &vars, xi)?;
            let cases = [
                ("∧", Formula::And(vec![a.clone(), b.clone()]), va.intersection(&vb)),
                ("∨", Formula::Or(vec![a.clone(), b.clone()]), va.union(&vb)),
                ("¬", Formula::not(a.clone()), va.complement()),
                ("→", Formula::implies(a.clone(), b.clone()), va.complement().union(&vb)),
                (
                    "↔",
                    Formula::iff(a.clone(), b.clone()),
                    va.intersection(&vb).union(&va.complement().intersection(&vb.complement())),
                ),
            ];
            for (name, f, expected) in cases {
                let got = eval(space, &f, &vars, xi)?;
                report.check(got == expected, || format!("{name} fails for `{a}`, `{b}` at {xi:?}"));
            }
        }
    }
    Ok(report)
}

/// `⟦∃v φ⟧ = ⋃η ⟦φ[v ↦ η]⟧` and `⟦∀v φ⟧ = ⋂η ⟦φ[v ↦ η]⟧` for every free
/// variable position `v` of the bindings.
pub fn quantifier_laws(space: &Space, formulas: &[Formula], bindings: &[Vec<usize>]) -> Result<LawReport, SpaceError> {
    let mut report = LawReport::new("quantifiers");
    for xi in bindings {
        let vars = x_vars(xi.len());
        for f in formulas {
            for q in 0..vars.len() {
                let mut union = space.empty_set();
                let mut meet = space.full_set();
                for eta in 0..space.k() {
                    let mut at = xi.clone();
                    at[q] = eta;
                    let v = eval(space, f, &vars, &at)?;
                    union.union_with(&v);
                    meet.intersect_with(&v);
                }
                let rest_vars: Vec<String> =
                    vars.iter().enumerate().filter(|&(i, _)| i != q).map(|(_, v)| v.clone()).collect();
                let rest: Vec<usize> = xi.iter().enumerate().filter(|&(i, _)| i != q).map(|(_, &v)| v).collect();
                let ex = Formula::exists(vars[q].clone(), f.clone());
                let all = Formula::forall(vars[q].clone(), f.clone());
                let got_ex = eval(space, &ex, &rest_vars, &rest)?;
                let got_all = eval(space, &all, &rest_vars, &rest)?;
                report.check(got_ex == union, || format!("∃{} fails for `{f}` at {xi:?}", vars[q]));
                report.check(got_all == meet, || format!("∀{} fails for `{f}` at {xi:?}", vars[q]));
            }
        }
    }
    Ok(report)
}

/// Fixed tautology schemes instantiated with the corpus evaluate to `X`.
pub fn tautology_laws(space: &Space, formulas: &[Formula], bindings: &[Vec<usize>]) -> Result<LawReport, SpaceError> {
    let mut report = LawReport::new("tautologies");
    let closed = [
        Formula::forall("t", Formula::var_eq("t", "t")),
        Formula::forall(
            "t",
            Formula::forall("s", Formula::implies(Formula::var_eq("t", "s"), Formula::var_eq("s", "t"))),
        ),
        Formula::exists("t", Formula::var_eq("t", "t")),
    ];
    for f in &closed {
        report.check(space.evaluate_sentence(f)?.is_full(), || format!("`{f}` is not valid"));
    }
    for xi in bindings {
        let vars = x_vars(xi.len());
        for pair in formulas.windows(2) {
            let (a, b) = (pair[0].clone(), pair[1].clone());
            let mut schemes = vec![
                Formula::Or(vec![a.clone(), Formula::not(a.clone())]),
                Formula::implies(a.clone(), a.clone()),
                Formula::not(Formula::And(vec![a.clone(), Formula::not(a.clone())])),
                Formula::implies(
                    Formula::implies(a.clone(), b.clone()),
                    Formula::implies(Formula::not(b.clone()), Formula::not(a.clone())),
                ),
                Formula::iff(
                    Formula::not(Formula::And(vec![a.clone(), b.clone()])),
                    Formula::Or(vec![Formula::not(a.clone()), Formula::not(b.clone())]),
                ),
            ];
            if let Some(v) = vars.first() {
                schemes.push(Formula::implies(Formula::forall(v.clone(), a.clone()), a.clone()));
                schemes.push(Formula::implies(a.clone(), Formula::exists(v.clone(), a.clone())));
                schemes.push(Formula::iff(
                    Formula::not(Formula::exists(v.clone(), a.clone())),
                    Formula::forall(v.clone(), Formula::not(a.clone())),
                ));
            }
            for t in schemes {
                report.check(eval(space, &t, &vars, xi)?.is_full(), || format!("`{t}` is not full at {xi:?}"));
            }
        }
    }
    Ok(report)
}

/// `⟦η=η⟧ = X`, symmetry and transitivity over all index triples.
pub fn equality_laws(space: &Space) -> Result<LawReport, SpaceError> {
    let mut report = LawReport::new("equality");
    let k = space.k();
    let x = x_vars(3);
    let eq = |i: usize, j: usize| eval(space, &Formula::var_eq(&x[0], &x[1]), &x[..2], &[i, j]);
    let table: Vec<ClopenSet> = (0..k * k).map(|c| eq(c / k, c % k)).collect::<Result<_, _>>()?;
    for a in 0..k {
        report.check(table[a * k + a].is_full(), || format!("⟦{a}={a}⟧ is not X"));
        for b in 0..k {
            report.check(table[a * k + b] == table[b * k + a], || format!("⟦{a}={b}⟧ ≠ ⟦{b}={a}⟧"));
            report.check(table[a * k + b] == space.index_equality(a, b).expect("in range"), || {
                format!("⟦{a}={b}⟧ disagrees with the enumerations")
            });
            for c in 0..k {
                let lhs = table[a * k + b].intersection(&table[b * k + c]);
                report.check(lhs.is_subset(&table[a * k + c]), || format!("transitivity fails at {a},{b},{c}"));
            }
        }
    }
    Ok(report)
}

/// For each constant `c` and function `f`: totality `⋃η C(η) = X`,
/// `⋃η F(ξ,η) = X`, uniqueness and the substitution laws, with
/// `C(η) = ⟦c = η⟧` and `F(ξ,η) = ⟦f(ξ) = η⟧`.
pub fn constant_function_laws(space: &Space) -> Result<LawReport, SpaceError> {
    let mut report = LawReport::new("constants and functions");
    let sig = space.class().signature().clone();
    let k = space.k();
    let eqs: Vec<ClopenSet> = (0..k * k).map(|c| space.index_equality(c / k, c % k)).collect::<Result<_, _>>()?;
    let eq = |a: usize, b: usize| &eqs[a * k + b];
    for c in sig.constants() {
        let f = Formula::eq(Term::constant(c.clone()), Term::var("x1"));
        let vars = x_vars(1);
        let values: Vec<ClopenSet> = (0..k).map(|m| eval(space, &f, &vars, &[m])).collect::<Result<_, _>>()?;
        let mut union = space.empty_set();
        for v in &values {
            union.union_with(v);
        }
        report.check(union.is_full(), || format!("⋃ C(η) ≠ X for `{c}`"));
        for m in 0..k {
            for m2 in 0..k {
                report.check(values[m].intersection(eq(m, m2)).is_subset(&values[m2]), || {
                    format!("substitution fails for `{c}` at {m}, {m2}")
                });
                report.check(values[m].intersection(&values[m2]).is_subset(eq(m, m2)), || {
                    format!("uniqueness fails for `{c}` at {m}, {m2}")
                });
            }
        }
    }
    for sym in sig.functions() {
        let a = sym.arity;
        let vars = x_vars(a + 1);
        let app = Term::app(sym.name.clone(), vars[..a].iter().map(|v| Term::var(v.clone())).collect());
        let f = Formula::eq(app, Term::var(vars[a].clone()));
        for r in 0..tuple_count(k, a) {
            let xi = tuple_unrank(r, k, a);
            let values: Vec<ClopenSet> = (0..k)
                .map(|m| {
                    let mut binding = xi.clone();
                    binding.push(m);
                    eval(space, &f, &vars, &binding)
                })
                .collect::<Result<_, _>>()?;
            let mut union = space.empty_set();
            for v in &values {
                union.union_with(v);
            }
            report.check(union.is_full(), || format!("⋃ F({xi:?}, η) ≠ X for `{}`", sym.name));
            for m in 0..k {
                for m2 in 0..k {
                    report.check(values[m].intersection(eq(m, m2)).is_subset(&values[m2]), || {
                        format!("substitution in the value fails for `{}` at {xi:?}, {m}, {m2}", sym.name)
                    });
                    report.check(values[m].intersection(&values[m2]).is_subset(eq(m, m2)), || {
                        format!("uniqueness fails for `{}` at {xi:?}, {m}, {m2}", sym.name)
                    });
                }
            }
            // substitution in each argument
            for pos in 0..a {
                for other in 0..k {
                    let mut xi2 = xi.clone();
                    xi2[pos] = other;
                    for (m, value) in values.iter().enumerate() {
                        let mut b1 = xi.clone();
                        b1.push(m);
                        let mut b2 = xi2.clone();
                        b2.push(m);
                        let lhs = value.intersection(eq(xi[pos], other));
                        let rhs = eval(space, &f, &vars, &b2)?;
                        report.check(lhs.is_subset(&rhs), || {
                            format!("argument substitution fails for `{}` at {b1:?} → {b2:?}", sym.name)
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

/// `⟦φ⟧ = ⟦φ*⟧` where `φ*` is the relational translation of `φ`.
pub fn translation_laws(space: &Space, formulas: &[Formula], bindings: &[Vec<usize>]) -> Result<LawReport, SpaceError> {
    let mut report = LawReport::new("term translation");
    let sig = space.class().signature();
    for xi in bindings {
        let vars = x_vars(xi.len());
        for f in formulas {
            let t = translate_to_relational(f, sig).map_err(|e| SpaceError::Eval(e.into()))?;
            let same = eval(space, f, &vars, xi)? == eval(space, &t, &vars, xi)?;
            report.check(same, || format!("`{f}` and `{t}` differ at {xi:?}"));
        }
    }
    Ok(report)
}

/// `π·⟦φ(ξ)⟧ = ⟦φ(π(ξ))⟧` for `trials` random formulas, tuples of length
/// `width` and permutations.
pub fn equivariance_checks(
    space: &Space,
    formulas: &[Formula],
    width: usize,
    trials: usize,
    seed: u64,
) -> Result<LawReport, ActionError> {
    let mut report = LawReport::new("equivariance");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = x_vars(width);
    if formulas.is_empty() {
        return Ok(report);
    }
    for _ in 0..trials {
        let f = &formulas[rng.gen_range(0..formulas.len())];
        let xi: Vec<usize> = (0..width).map(|_| rng.gen_range(0..space.k())).collect();
        let pi = Permutation::random(space.k(), &mut rng);
        let map = ActionMap::new(space, &pi)?;
        let lhs = map.set(&eval(space, f, &vars, &xi)?);
        let moved = pi.apply_tuple(&xi);
        let rhs = eval(space, f, &vars, &moved)?;
        report.check(lhs == rhs, || format!("{pi} fails for `{f}` at {xi:?}"));
    }
    Ok(report)
}
