use std::collections::BTreeSet;

use thiserror::Error;

use super::signature::{Signature, SymbolKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WellFormedError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` expects {expected} argument(s), found {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("`{0}` is a {1} and cannot be used here")]
    MisusedSymbol(String, &'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(name.into(), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(v) => out.push(v),
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    fn rename(&self, from: &str, to: &str) -> Term {
        match self {
            Term::Var(v) if v == from => Term::Var(to.to_string()),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.rename(from, to)).collect()),
        }
    }

    fn check(&self, sig: &Signature) -> Result<(), WellFormedError> {
        match self {
            Term::Var(_) => Ok(()),
            Term::Const(c) => match sig.lookup(c) {
                Some(SymbolKind::Constant(_)) => Ok(()),
                Some(SymbolKind::Relation(_)) => Err(WellFormedError::MisusedSymbol(c.clone(), "relation")),
                Some(SymbolKind::Function(i)) => Err(WellFormedError::ArityMismatch {
                    symbol: c.clone(),
                    expected: sig.functions()[i].arity,
                    found: 0,
                }),
                None => Err(WellFormedError::UnknownSymbol(c.clone())),
            },
            Term::App(f, args) => {
                match sig.lookup(f) {
                    Some(SymbolKind::Function(i)) => {
                        let expected = sig.functions()[i].arity;
                        if expected != args.len() {
                            return Err(WellFormedError::ArityMismatch {
                                symbol: f.clone(),
                                expected,
                                found: args.len(),
                            });
                        }
                    }
                    Some(SymbolKind::Relation(_)) => return Err(WellFormedError::MisusedSymbol(f.clone(), "relation")),
                    Some(SymbolKind::Constant(_)) => return Err(WellFormedError::MisusedSymbol(f.clone(), "constant")),
                    None => return Err(WellFormedError::UnknownSymbol(f.clone())),
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }
}

/// First-order formulas with equality.
///
/// `And`/`Or` are n-ary; the smart constructors [`Formula::and`] and
/// [`Formula::or`] map the empty case to `True`/`False` and unwrap singletons.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Rel(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn rel(name: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Rel(name.into(), args)
    }

    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Formula::Eq(lhs, rhs)
    }

    /// `x = y` between two variables.
    pub fn var_eq(x: &str, y: &str) -> Self {
        Formula::Eq(Term::var(x), Term::var(y))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Self {
        let mut parts: Vec<_> = parts.into_iter().collect();
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Self {
        let mut parts: Vec<_> = parts.into_iter().collect();
        match parts.len() {
            0 => Formula::False,
            1 => parts.pop().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Self {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn iff(lhs: Formula, rhs: Formula) -> Self {
        Formula::Iff(Box::new(lhs), Box::new(rhs))
    }

    /// `∃var body`. Inner quantifiers of `body` that rebind `var` are renamed
    /// apart so that no variable is bound twice on a path.
    pub fn exists(var: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(var.into(), Box::new(body)).freshen()
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Self {
        Formula::Forall(var.into(), Box::new(body)).freshen()
    }

    /// `∃v1 … ∃vk body`, outermost quantifier first.
    pub fn exists_many<S: AsRef<str>>(vars: &[S], body: Formula) -> Self {
        let inner = vars.iter().rev().fold(body, |acc, v| Formula::Exists(v.as_ref().to_string(), Box::new(acc)));
        inner.freshen()
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Rel(..) | Formula::Eq(..) | Formula::True | Formula::False)
    }

    /// Free variables in order of first occurrence, left to right.
    pub fn free_variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut seen, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, seen: &mut BTreeSet<String>, out: &mut Vec<String>) {
        let mut note_terms = |terms: &[&Term], bound: &Vec<String>| {
            let mut vars = Vec::new();
            terms.iter().for_each(|t| t.collect_vars(&mut vars));
            for v in vars {
                if !bound.iter().any(|b| b == v) && seen.insert(v.to_string()) {
                    out.push(v.to_string());
                }
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Rel(_, args) => note_terms(&args.iter().collect::<Vec<_>>(), bound),
            Formula::Eq(a, b) => note_terms(&[a, b], bound),
            Formula::Not(f) => f.collect_free(bound, seen, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, seen, out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, seen, out);
                b.collect_free(bound, seen, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, seen, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Every variable name occurring anywhere, free or bound.
    pub fn all_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Rel(_, args) => {
                let mut vars = Vec::new();
                args.iter().for_each(|t| t.collect_vars(&mut vars));
                out.extend(vars.into_iter().map(str::to_string));
            }
            Formula::Eq(a, b) => {
                let mut vars = Vec::new();
                a.collect_vars(&mut vars);
                b.collect_vars(&mut vars);
                out.extend(vars.into_iter().map(str::to_string));
            }
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.visit(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit(f)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Maximum nesting of quantifiers.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Rel(..) | Formula::Eq(..) => 0,
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::quantifier_depth).max().unwrap_or(0),
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_depth(),
        }
    }

    /// Replaces free occurrences of `from` by the variable `to`. The caller
    /// must ensure `to` is not captured.
    pub fn rename_free(&self, from: &str, to: &str) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Rel(r, args) => Formula::Rel(r.clone(), args.iter().map(|t| t.rename(from, to)).collect()),
            Formula::Eq(a, b) => Formula::Eq(a.rename(from, to), b.rename(from, to)),
            Formula::Not(f) => Formula::Not(Box::new(f.rename_free(from, to))),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.rename_free(from, to)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.rename_free(from, to)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.rename_free(from, to), b.rename_free(from, to)),
            Formula::Iff(a, b) => Formula::iff(a.rename_free(from, to), b.rename_free(from, to)),
            Formula::Exists(v, _) | Formula::Forall(v, _) if v == from => self.clone(),
            Formula::Exists(v, f) => Formula::Exists(v.clone(), Box::new(f.rename_free(from, to))),
            Formula::Forall(v, f) => Formula::Forall(v.clone(), Box::new(f.rename_free(from, to))),
        }
    }

    /// Renames every quantifier that rebinds a variable already bound on its
    /// path. Free variables and non-shadowing binders are left untouched.
    pub fn freshen(self) -> Formula {
        let mut used = self.all_variables();
        let mut bound = Vec::new();
        self.freshen_in(&mut bound, &mut used)
    }

    fn freshen_in(self, bound: &mut Vec<String>, used: &mut BTreeSet<String>) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Rel(..) | Formula::Eq(..) => self,
            Formula::Not(f) => Formula::Not(Box::new(f.freshen_in(bound, used))),
            Formula::And(fs) => Formula::And(fs.into_iter().map(|f| f.freshen_in(bound, used)).collect()),
            Formula::Or(fs) => Formula::Or(fs.into_iter().map(|f| f.freshen_in(bound, used)).collect()),
            Formula::Implies(a, b) => {
                let a = a.freshen_in(bound, used);
                Formula::implies(a, b.freshen_in(bound, used))
            }
            Formula::Iff(a, b) => {
                let a = a.freshen_in(bound, used);
                Formula::iff(a, b.freshen_in(bound, used))
            }
            Formula::Exists(v, f) => {
                let (v, body) = Self::bind(v, *f, bound, used);
                Formula::Exists(v, Box::new(body))
            }
            Formula::Forall(v, f) => {
                let (v, body) = Self::bind(v, *f, bound, used);
                Formula::Forall(v, Box::new(body))
            }
        }
    }

    fn bind(v: String, body: Formula, bound: &mut Vec<String>, used: &mut BTreeSet<String>) -> (String, Formula) {
        let (v, body) = if bound.contains(&v) {
            let fresh = fresh_name(&v, used);
            let body = body.rename_free(&v, &fresh);
            (fresh, body)
        } else {
            (v, body)
        };
        bound.push(v.clone());
        let body = body.freshen_in(bound, used);
        bound.pop();
        (v, body)
    }

    /// Equality up to consistent renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        fn term_eq(a: &Term, b: &Term, env: &[(String, String)]) -> bool {
            match (a, b) {
                (Term::Var(x), Term::Var(y)) => {
                    let lx = env.iter().rposition(|(l, _)| l == x);
                    let ry = env.iter().rposition(|(_, r)| r == y);
                    match (lx, ry) {
                        (Some(i), Some(j)) => i == j,
                        (None, None) => x == y,
                        _ => false,
                    }
                }
                (Term::Const(c), Term::Const(d)) => c == d,
                (Term::App(f, xs), Term::App(g, ys)) => {
                    f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_eq(x, y, env))
                }
                _ => false,
            }
        }
        fn go(a: &Formula, b: &Formula, env: &mut Vec<(String, String)>) -> bool {
            match (a, b) {
                (Formula::True, Formula::True) | (Formula::False, Formula::False) => true,
                (Formula::Rel(r, xs), Formula::Rel(s, ys)) => {
                    r == s && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_eq(x, y, env))
                }
                (Formula::Eq(a1, a2), Formula::Eq(b1, b2)) => term_eq(a1, b1, env) && term_eq(a2, b2, env),
                (Formula::Not(f), Formula::Not(g)) => go(f, g, env),
                (Formula::And(fs), Formula::And(gs)) | (Formula::Or(fs), Formula::Or(gs)) => {
                    fs.len() == gs.len() && fs.iter().zip(gs).all(|(f, g)| go(f, g, env))
                }
                (Formula::Implies(a1, a2), Formula::Implies(b1, b2)) | (Formula::Iff(a1, a2), Formula::Iff(b1, b2)) => {
                    go(a1, b1, env) && go(a2, b2, env)
                }
                (Formula::Exists(x, f), Formula::Exists(y, g)) | (Formula::Forall(x, f), Formula::Forall(y, g)) => {
                    env.push((x.clone(), y.clone()));
                    let ok = go(f, g, env);
                    env.pop();
                    ok
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }

    /// Checks symbol usage and arities against `sig`.
    pub fn check(&self, sig: &Signature) -> Result<(), WellFormedError> {
        match self {
            Formula::True | Formula::False => Ok(()),
            Formula::Rel(r, args) => {
                match sig.lookup(r) {
                    Some(SymbolKind::Relation(i)) => {
                        let expected = sig.relations()[i].arity;
                        if expected != args.len() {
                            return Err(WellFormedError::ArityMismatch {
                                symbol: r.clone(),
                                expected,
                                found: args.len(),
                            });
                        }
                    }
                    Some(SymbolKind::Function(_)) => return Err(WellFormedError::MisusedSymbol(r.clone(), "function")),
                    Some(SymbolKind::Constant(_)) => return Err(WellFormedError::MisusedSymbol(r.clone(), "constant")),
                    None => return Err(WellFormedError::UnknownSymbol(r.clone())),
                }
                args.iter().try_for_each(|t| t.check(sig))
            }
            Formula::Eq(a, b) => {
                a.check(sig)?;
                b.check(sig)
            }
            Formula::Not(f) => f.check(sig),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().try_for_each(|f| f.check(sig)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.check(sig)?;
                b.check(sig)
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                if sig.lookup(v).is_some() {
                    return Err(WellFormedError::MisusedSymbol(v.clone(), "symbol"));
                }
                f.check(sig)
            }
        }
    }
}

/// A variable name derived from `base` that does not occur in `used`;
/// the result is recorded in `used`.
pub fn fresh_name(base: &str, used: &mut BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '_');
    let stem = if stem.is_empty() { "v" } else { stem };
    let name = (1..).map(|i| format!("{stem}_{i}")).find(|candidate| !used.contains(candidate)).unwrap();
    used.insert(name.clone());
    name
}

/// Variable names `x1..xk`.
pub fn x_vars(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("x{i}")).collect()
}

/// Free variable names of an `n`-ary predicate formula: `y` when `n = 1`,
/// otherwise `y1..yn`.
pub fn y_vars(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["y".to_string()]
    } else {
        (1..=n).map(|i| format!("y{i}")).collect()
    }
}
