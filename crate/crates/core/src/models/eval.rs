//! Tarskian evaluation over finite structures. Formulas are compiled once
//! against a signature into a slot-addressed tree and then evaluated many
//! times.

use std::collections::HashMap;

use thiserror::Error;

use super::structure::Structure;
use crate::syntax::{Formula, Signature, SymbolKind, Term, WellFormedError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("free variable `{0}` has no value")]
    Unassigned(String),
    #[error("variable `{var}` is assigned {value}, outside a domain of size {size}")]
    OutOfDomain { var: String, value: usize, size: usize },
    #[error(transparent)]
    WellFormed(#[from] WellFormedError),
}

#[derive(Debug, Clone)]
enum CTerm {
    Slot(usize),
    Const(usize),
    App(usize, Vec<CTerm>),
}

#[derive(Debug, Clone)]
enum Node {
    True,
    False,
    Rel(usize, Vec<CTerm>),
    Eq(CTerm, CTerm),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Exists(usize, Box<Node>),
    Forall(usize, Box<Node>),
}

/// A formula compiled against a signature, with its input variables bound to
/// the first slots in the order given at compile time.
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    root: Node,
    inputs: usize,
    slots: usize,
}

struct Compiler<'a> {
    sig: &'a Signature,
    scope: Vec<(String, usize)>,
    max_slot: usize,
}

impl Compiler<'_> {
    fn term(&self, t: &Term) -> Result<CTerm, EvalError> {
        Ok(match t {
            Term::Var(v) => match self.scope.iter().rev().find(|(name, _)| name == v) {
                Some(&(_, slot)) => CTerm::Slot(slot),
                None => return Err(EvalError::Unassigned(v.clone())),
            },
            Term::Const(c) => match self.sig.lookup(c) {
                Some(SymbolKind::Constant(i)) => CTerm::Const(i),
                _ => return Err(WellFormedError::UnknownSymbol(c.clone()).into()),
            },
            Term::App(f, args) => match self.sig.lookup(f) {
                Some(SymbolKind::Function(i)) => {
                    CTerm::App(i, args.iter().map(|a| self.term(a)).collect::<Result<_, _>>()?)
                }
                _ => return Err(WellFormedError::UnknownSymbol(f.clone()).into()),
            },
        })
    }

    fn formula(&mut self, f: &Formula) -> Result<Node, EvalError> {
        Ok(match f {
            Formula::True => Node::True,
            Formula::False => Node::False,
            Formula::Rel(r, args) => match self.sig.lookup(r) {
                Some(SymbolKind::Relation(i)) => {
                    Node::Rel(i, args.iter().map(|a| self.term(a)).collect::<Result<_, _>>()?)
                }
                _ => return Err(WellFormedError::UnknownSymbol(r.clone()).into()),
            },
            Formula::Eq(a, b) => Node::Eq(self.term(a)?, self.term(b)?),
            Formula::Not(g) => Node::Not(Box::new(self.formula(g)?)),
            Formula::And(gs) => Node::And(gs.iter().map(|g| self.formula(g)).collect::<Result<_, _>>()?),
            Formula::Or(gs) => Node::Or(gs.iter().map(|g| self.formula(g)).collect::<Result<_, _>>()?),
            Formula::Implies(a, b) => Node::Implies(Box::new(self.formula(a)?), Box::new(self.formula(b)?)),
            Formula::Iff(a, b) => Node::Iff(Box::new(self.formula(a)?), Box::new(self.formula(b)?)),
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let slot = self.scope.len();
                self.max_slot = self.max_slot.max(slot + 1);
                self.scope.push((v.clone(), slot));
                let body = self.formula(g);
                self.scope.pop();
                let body = Box::new(body?);
                if matches!(f, Formula::Exists(..)) {
                    Node::Exists(slot, body)
                } else {
                    Node::Forall(slot, body)
                }
            }
        })
    }
}

fn eval_term(t: &CTerm, m: &Structure, env: &[usize]) -> usize {
    match t {
        CTerm::Slot(s) => env[*s],
        CTerm::Const(c) => m.constant_value(*c),
        CTerm::App(f, args) => {
            let n = m.size();
            let rank = args.iter().fold(0, |acc, a| acc * n + eval_term(a, m, env));
            m.function_table(*f)[rank]
        }
    }
}

fn eval_node(node: &Node, m: &Structure, env: &mut [usize]) -> bool {
    match node {
        Node::True => true,
        Node::False => false,
        Node::Rel(r, args) => {
            let n = m.size();
            let rank = args.iter().fold(0, |acc, a| acc * n + eval_term(a, m, env));
            m.relation_table(*r)[rank]
        }
        Node::Eq(a, b) => eval_term(a, m, env) == eval_term(b, m, env),
        Node::Not(g) => !eval_node(g, m, env),
        Node::And(gs) => gs.iter().all(|g| eval_node(g, m, env)),
        Node::Or(gs) => gs.iter().any(|g| eval_node(g, m, env)),
        Node::Implies(a, b) => !eval_node(a, m, env) || eval_node(b, m, env),
        Node::Iff(a, b) => eval_node(a, m, env) == eval_node(b, m, env),
        Node::Exists(slot, g) => (0..m.size()).any(|a| {
            env[*slot] = a;
            eval_node(g, m, env)
        }),
        Node::Forall(slot, g) => (0..m.size()).all(|a| {
            env[*slot] = a;
            eval_node(g, m, env)
        }),
    }
}

impl CompiledFormula {
    /// Compiles `f` with `inputs[i]` bound to argument `i`. Every free
    /// variable of `f` must appear in `inputs`; extra inputs are allowed.
    pub fn compile(f: &Formula, sig: &Signature, inputs: &[String]) -> Result<Self, EvalError> {
        f.check(sig)?;
        let scope: Vec<_> = inputs.iter().cloned().zip(0..).collect();
        let mut compiler = Compiler { sig, scope, max_slot: inputs.len() };
        let root = compiler.formula(f)?;
        Ok(Self { root, inputs: inputs.len(), slots: compiler.max_slot })
    }

    pub fn arity(&self) -> usize {
        self.inputs
    }

    /// Truth value at `args`; `args.len()` must equal the number of inputs
    /// and every value must lie in the domain of `m`.
    pub fn eval(&self, m: &Structure, args: &[usize]) -> bool {
        debug_assert_eq!(args.len(), self.inputs);
        debug_assert!(args.iter().all(|&a| a < m.size()));
        let mut env = vec![0; self.slots];
        env[..self.inputs].copy_from_slice(args);
        eval_node(&self.root, m, &mut env)
    }
}

/// `M ⊨ f[assignment]`. The assignment must cover the free variables of `f`.
pub fn evaluate_classical(m: &Structure, f: &Formula, assignment: &HashMap<String, usize>) -> Result<bool, EvalError> {
    let vars = f.free_variables();
    let mut args = Vec::with_capacity(vars.len());
    for v in &vars {
        let &value = assignment.get(v).ok_or_else(|| EvalError::Unassigned(v.clone()))?;
        if value >= m.size() {
            return Err(EvalError::OutOfDomain { var: v.clone(), value, size: m.size() });
        }
        args.push(value);
    }
    let compiled = CompiledFormula::compile(f, m.signature(), &vars)?;
    Ok(compiled.eval(m, &args))
}

/// Evaluates a sentence.
pub fn holds(m: &Structure, sentence: &Formula) -> Result<bool, EvalError> {
    evaluate_classical(m, sentence, &HashMap::new())
}
