//! Elimination of nested terms: every constant and function application is
//! moved into a graph atom `c = v` or `f(v1,..,vn) = v` over variables,
//! with the intermediate values existentially quantified.

use std::collections::BTreeSet;

use super::formula::{fresh_name, Formula, Term, WellFormedError};
use super::signature::Signature;

struct Flattener {
    used: BTreeSet<String>,
}

impl Flattener {
    fn fresh(&mut self) -> String {
        fresh_name("v", &mut self.used)
    }

    /// Reduces `t` to a variable, pushing graph atoms for everything below.
    fn flatten(&mut self, t: &Term, conds: &mut Vec<Formula>, vars: &mut Vec<String>) -> String {
        match t {
            Term::Var(v) => v.clone(),
            Term::Const(_) => {
                let w = self.fresh();
                conds.push(Formula::Eq(t.clone(), Term::Var(w.clone())));
                vars.push(w.clone());
                w
            }
            Term::App(f, args) => {
                let flat = self.flatten_args(args, conds, vars);
                let z = self.fresh();
                conds.push(Formula::Eq(Term::App(f.clone(), flat), Term::Var(z.clone())));
                vars.push(z.clone());
                z
            }
        }
    }

    fn flatten_args(&mut self, args: &[Term], conds: &mut Vec<Formula>, vars: &mut Vec<String>) -> Vec<Term> {
        args.iter().map(|a| Term::Var(self.flatten(a, conds, vars))).collect()
    }

    fn wrap(conds: Vec<Formula>, vars: Vec<String>, core: Formula) -> Formula {
        if vars.is_empty() {
            return core;
        }
        let body = Formula::And(conds.into_iter().chain(std::iter::once(core)).collect());
        vars.into_iter().rev().fold(body, |acc, v| Formula::Exists(v, Box::new(acc)))
    }

    /// `lhs = rhs` where `rhs` is a variable.
    fn graph_atom(&mut self, lhs: &Term, rhs: Term) -> Formula {
        let (mut conds, mut vars) = (Vec::new(), Vec::new());
        let core = match lhs {
            Term::Var(_) | Term::Const(_) => Formula::Eq(lhs.clone(), rhs),
            Term::App(f, args) => {
                let flat = self.flatten_args(args, &mut conds, &mut vars);
                Formula::Eq(Term::App(f.clone(), flat), rhs)
            }
        };
        Self::wrap(conds, vars, core)
    }

    fn formula(&mut self, f: &Formula) -> Formula {
        match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Rel(r, args) => {
                if args.iter().all(Term::is_var) {
                    return f.clone();
                }
                let (mut conds, mut vars) = (Vec::new(), Vec::new());
                let flat = self.flatten_args(args, &mut conds, &mut vars);
                Self::wrap(conds, vars, Formula::Rel(r.clone(), flat))
            }
            Formula::Eq(a, b) => match (a, b) {
                (Term::Var(_), Term::Var(_)) => f.clone(),
                (_, Term::Var(_)) => self.graph_atom(a, b.clone()),
                (Term::Var(_), _) => self.graph_atom(b, a.clone()),
                _ => {
                    let (mut conds, mut vars) = (Vec::new(), Vec::new());
                    let v = self.flatten(b, &mut conds, &mut vars);
                    let core = self.graph_atom(a, Term::Var(v));
                    Self::wrap(conds, vars, core)
                }
            },
            Formula::Not(g) => Formula::not(self.formula(g)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| self.formula(g)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| self.formula(g)).collect()),
            Formula::Implies(a, b) => Formula::implies(self.formula(a), self.formula(b)),
            Formula::Iff(a, b) => Formula::iff(self.formula(a), self.formula(b)),
            Formula::Exists(v, g) => Formula::Exists(v.clone(), Box::new(self.formula(g))),
            Formula::Forall(v, g) => Formula::Forall(v.clone(), Box::new(self.formula(g))),
        }
    }
}

/// Rewrites `f` so that constants and function symbols only occur in graph
/// atoms `c = v` and `f(v1,..,vn) = v` whose arguments are variables. The
/// result is classically equivalent to `f` and has the same free variables.
pub fn translate_to_relational(f: &Formula, sig: &Signature) -> Result<Formula, WellFormedError> {
    f.check(sig)?;
    let mut flattener = Flattener { used: f.all_variables() };
    Ok(flattener.formula(f))
}

/// True when every atom of `f` is relational over variables or a graph atom.
pub fn is_relational(f: &Formula) -> bool {
    let mut ok = true;
    f.visit(&mut |g| match g {
        Formula::Rel(_, args) => ok &= args.iter().all(Term::is_var),
        Formula::Eq(a, b) => {
            let flat_app = |t: &Term| match t {
                Term::App(_, args) => args.iter().all(Term::is_var),
                _ => true,
            };
            ok &= b.is_var() && flat_app(a) || a.is_var() && matches!(b, Term::Const(_));
        }
        _ => {}
    });
    ok
}
