//! ASCII printing. The output re-parses to an alpha-equivalent formula and
//! printing is idempotent across a parse round trip.

use std::fmt::{self, Write};

use super::formula::{Formula, Term};

const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_char(',')?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_char(')')
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f, 0, true)
    }
}

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::And(v) if v.len() >= 2 => AND,
        Formula::Or(v) if v.len() >= 2 => OR,
        Formula::And(v) | Formula::Or(v) => v.first().map_or(UNARY, precedence),
        Formula::Implies(..) => IMPLIES,
        Formula::Iff(..) => IFF,
        _ => UNARY,
    }
}

/// `ctx` is the minimum precedence the context accepts without parentheses;
/// `open_right` says nothing follows this subformula, so a quantifier body
/// may extend to the end.
fn write_formula(g: &Formula, out: &mut fmt::Formatter<'_>, ctx: u8, open_right: bool) -> fmt::Result {
    let prec = precedence(g);
    if prec < ctx {
        out.write_char('(')?;
        write_formula(g, out, 0, true)?;
        return out.write_char(')');
    }
    match g {
        Formula::True => out.write_str("true"),
        Formula::False => out.write_str("false"),
        Formula::Rel(r, args) => write!(out, "{}", Term::App(r.clone(), args.clone())),
        Formula::Eq(a, b) => write!(out, "{a} = {b}"),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Eq(a, b) => write!(out, "{a} != {b}"),
            _ => {
                out.write_char('~')?;
                write_formula(inner, out, UNARY, open_right)
            }
        },
        Formula::And(parts) | Formula::Or(parts) if parts.len() < 2 => match parts.first() {
            Some(only) => write_formula(only, out, ctx, open_right),
            None if matches!(g, Formula::And(_)) => out.write_str("true"),
            None => out.write_str("false"),
        },
        Formula::And(parts) => write_chain(parts, " & ", AND + 1, out, open_right),
        Formula::Or(parts) => write_chain(parts, " | ", OR + 1, out, open_right),
        Formula::Implies(a, b) => {
            write_formula(a, out, IMPLIES + 1, false)?;
            out.write_str(" -> ")?;
            write_formula(b, out, IMPLIES, open_right)
        }
        Formula::Iff(a, b) => {
            write_formula(a, out, IFF, false)?;
            out.write_str(" <-> ")?;
            write_formula(b, out, IFF + 1, open_right)
        }
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let keyword = if matches!(g, Formula::Exists(..)) { "ex" } else { "all" };
            if !open_right {
                out.write_char('(')?;
            }
            write!(out, "{keyword} {v} ")?;
            if precedence(body) < UNARY {
                out.write_char('(')?;
                write_formula(body, out, 0, true)?;
                out.write_char(')')?;
            } else {
                write_formula(body, out, UNARY, true)?;
            }
            if !open_right {
                out.write_char(')')?;
            }
            Ok(())
        }
    }
}

fn write_chain(
    parts: &[Formula],
    sep: &str,
    child_ctx: u8,
    out: &mut fmt::Formatter<'_>,
    open_right: bool,
) -> fmt::Result {
    let last = parts.len() - 1;
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            out.write_str(sep)?;
        }
        write_formula(p, out, child_ctx, i == last && open_right)?;
    }
    Ok(())
}
