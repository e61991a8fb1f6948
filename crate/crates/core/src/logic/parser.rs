//! Recursive-descent parser for the ticked LTLf concrete syntax.
//!
//! Precedence, loosest first: `<->`, `->` (right-assoc), `|`, `&`,
//! `U[m,n]` (right-assoc), then the prefix operators `!`, `F[m,n]`, `G[m,n]`.

use super::formula::{Formula, Interval};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Until,
    Eventually,
    Globally,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Minus,
    Eof,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Int(s) => format!("number `{s}`"),
        Tok::Eof => "end of input".into(),
        other => format!("`{}`", symbol(other)),
    }
}

fn symbol(t: &Tok) -> &'static str {
    match t {
        Tok::True => "true",
        Tok::False => "false",
        Tok::Not => "!",
        Tok::And => "&",
        Tok::Or => "|",
        Tok::Implies => "->",
        Tok::Iff => "<->",
        Tok::Until => "U",
        Tok::Eventually => "F",
        Tok::Globally => "G",
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::LBracket => "[",
        Tok::RBracket => "]",
        Tok::Comma => ",",
        Tok::Minus => "-",
        Tok::Ident(_) | Tok::Int(_) | Tok::Eof => "",
    }
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            b'!' | b'~' => {
                i += 1;
                Tok::Not
            }
            b'&' => {
                i += if bytes.get(i + 1) == Some(&b'&') { 2 } else { 1 };
                Tok::And
            }
            b'|' => {
                i += if bytes.get(i + 1) == Some(&b'|') { 2 } else { 1 };
                Tok::Or
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'[' => {
                i += 1;
                Tok::LBracket
            }
            b']' => {
                i += 1;
                Tok::RBracket
            }
            b',' => {
                i += 1;
                Tok::Comma
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Implies
            }
            b'-' => {
                i += 1;
                Tok::Minus
            }
            b'<' if text[i..].starts_with("<->") => {
                i += 3;
                Tok::Iff
            }
            b'0'..=b'9' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'.') {
                    i += 1;
                }
                Tok::Int(text[start..i].to_string())
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                match &text[start..i] {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "U" => Tok::Until,
                    "F" => Tok::Eventually,
                    "G" => Tok::Globally,
                    "X" => {
                        return Err(syntax(start, "the next operator `X` is not part of the logic"))
                    }
                    id => Tok::Ident(id.to_string()),
                }
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        toks.push((tok, start));
    }
    toks.push((Tok::Eof, text.len()));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(
                self.offset(),
                format!("expected {}, found {}", describe(&want), describe(self.peek())),
            ))
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.implies()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implies()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.until()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.until()?);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::Until {
            self.bump();
            let iv = self.interval()?;
            let rhs = self.until()?;
            return Ok(Formula::Until(Box::new(lhs), Box::new(rhs), iv));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Eventually => {
                self.bump();
                let iv = self.interval()?;
                let f = self.unary()?;
                Ok(Formula::eventually(f, iv.lo(), iv.hi()))
            }
            Tok::Globally => {
                self.bump();
                let iv = self.interval()?;
                let f = self.unary()?;
                Ok(Formula::globally(f, iv.lo(), iv.hi()))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula> {
        let at = self.offset();
        match self.bump() {
            Tok::True => Ok(Formula::True),
            Tok::False => Ok(Formula::falsum()),
            Tok::Ident(name) => Ok(Formula::Atom(name)),
            Tok::LParen => {
                let f = self.iff()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            other => Err(syntax(at, format!("expected a formula, found {}", describe(&other)))),
        }
    }

    fn interval(&mut self) -> Result<Interval> {
        let open = self.offset();
        self.expect(Tok::LBracket)?;
        let lo = self.bound()?;
        self.expect(Tok::Comma)?;
        let hi = self.bound()?;
        self.expect(Tok::RBracket)?;
        Interval::new(lo, hi).ok_or_else(|| {
            syntax(open, format!("malformed interval [{lo},{hi}]: lower bound exceeds upper bound"))
        })
    }

    fn bound(&mut self) -> Result<u32> {
        let at = self.offset();
        match self.bump() {
            Tok::Int(s) => s
                .parse::<u32>()
                .map_err(|_| syntax(at, format!("interval bound `{s}` is not a nonnegative integer"))),
            Tok::Minus => Err(syntax(at, "interval bounds must be nonnegative")),
            Tok::Ident(s) if s == "inf" => Err(syntax(
                at,
                "unbounded intervals are not supported; use the horizon as upper bound",
            )),
            other => Err(syntax(
                at,
                format!("expected an interval bound, found {}", describe(&other)),
            )),
        }
    }
}

/// Parses a formula, expanding `false`, `->`, `<->`, `F` and `G` into the
/// core connectives.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.iff()?;
    if *p.peek() != Tok::Eof {
        return Err(syntax(
            p.offset(),
            format!("unexpected {} after formula", describe(p.peek())),
        ));
    }
    Ok(f)
}
