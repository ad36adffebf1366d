//! Recursive-descent parser for the ASCII formula syntax.
//!
//! Precedence, loosest first: `<->` (left associative), `->` (right
//! associative), `|`, `&`, then `~` and the quantifiers `all v` / `ex v`,
//! whose bodies extend as far right as possible.

use thiserror::Error;

use super::formula::{Formula, Term};
use super::signature::{Signature, SymbolKind, RESERVED_WORDS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at offset {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    BadChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` expects {expected} argument(s), found {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("cannot quantify over `{0}`")]
    BadBinder(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    And,
    Or,
    Not,
    Implies,
    Iff,
    Eq,
    Neq,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Not => "`~`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`!=`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            c if c.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '&' => Tok::And,
            '|' => Tok::Or,
            '~' => Tok::Not,
            '=' => Tok::Eq,
            '-' if text[i..].starts_with("->") => {
                i += 1;
                Tok::Implies
            }
            '<' if text[i..].starts_with("<->") => {
                i += 2;
                Tok::Iff
            }
            '!' if text[i..].starts_with("!=") => {
                i += 1;
                Tok::Neq
            }
            c if c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or(c);
                return Err(ParseError { position: start, kind: ParseErrorKind::BadChar(ch) });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].1
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { position: self.offset(), kind }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        self.error(ParseErrorKind::Unexpected { expected: expected.to_string(), found: self.peek().describe() })
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.conjunction()?];
        while *self.peek() == Tok::Or {
            self.bump();
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.unary()?];
        while *self.peek() == Tok::And {
            self.bump();
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(word) if word == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(word) if word == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(word) if word == "all" || word == "ex" => {
                self.bump();
                let var = match self.peek().clone() {
                    Tok::Ident(v) if !RESERVED_WORDS.contains(&v.as_str()) => v,
                    _ => return Err(self.unexpected("a variable after quantifier")),
                };
                if self.sig.lookup(&var).is_some() {
                    return Err(self.error(ParseErrorKind::BadBinder(var)));
                }
                self.bump();
                let body = Box::new(self.iff()?);
                Ok(if word == "all" { Formula::Forall(var, body) } else { Formula::Exists(var, body) })
            }
            Tok::Ident(_) => self.atom(),
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let start = self.offset();
        if let Tok::Ident(name) = self.peek().clone() {
            if let Some(SymbolKind::Relation(i)) = self.sig.lookup(&name) {
                let expected = self.sig.relations()[i].arity;
                self.bump();
                let args = if *self.peek() == Tok::LParen { self.arguments()? } else { Vec::new() };
                if args.len() != expected {
                    return Err(ParseError {
                        position: start,
                        kind: ParseErrorKind::ArityMismatch { symbol: name, expected, found: args.len() },
                    });
                }
                return Ok(Formula::Rel(name, args));
            }
        }
        let lhs = self.term()?;
        let negated = match self.peek() {
            Tok::Eq => false,
            Tok::Neq => true,
            _ => return Err(self.unexpected("`=` or `!=`")),
        };
        self.bump();
        let rhs = self.term()?;
        let eq = Formula::Eq(lhs, rhs);
        Ok(if negated { Formula::not(eq) } else { eq })
    }

    fn arguments(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "`)` or `,`")?;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let start = self.offset();
        let name = match self.peek().clone() {
            Tok::Ident(n) if !RESERVED_WORDS.contains(&n.as_str()) => n,
            _ => return Err(self.unexpected("a term")),
        };
        self.bump();
        let has_args = *self.peek() == Tok::LParen;
        let arity_error = |expected, found| ParseError {
            position: start,
            kind: ParseErrorKind::ArityMismatch { symbol: name.clone(), expected, found },
        };
        match self.sig.lookup(&name) {
            Some(SymbolKind::Function(i)) => {
                let expected = self.sig.functions()[i].arity;
                let args = if has_args { self.arguments()? } else { Vec::new() };
                if args.len() != expected {
                    return Err(arity_error(expected, args.len()));
                }
                Ok(Term::App(name, args))
            }
            Some(SymbolKind::Constant(_)) if has_args => {
                let args = self.arguments()?;
                Err(arity_error(0, args.len()))
            }
            Some(SymbolKind::Constant(_)) => Ok(Term::Const(name)),
            Some(SymbolKind::Relation(_)) => Err(ParseError {
                position: start,
                kind: ParseErrorKind::Unexpected { expected: "a term".into(), found: format!("relation `{name}`") },
            }),
            None if has_args => Err(ParseError { position: start, kind: ParseErrorKind::UnknownSymbol(name) }),
            None => Ok(Term::Var(name)),
        }
    }
}

/// Parses `text` over `sig`. Shadowing binders are renamed apart.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0, sig };
    let f = parser.iff()?;
    if *parser.peek() != Tok::End {
        return Err(parser.unexpected("end of input"));
    }
    Ok(f.freshen())
}
