//! A small recursive-descent parser for polynomial expressions.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*      division only by nonzero constants
//! unary := '-' unary | power
//! power := atom ('^' integer)?
//! atom  := integer | variable | '(' expr ')'
//! ```
//!
//! There is no implicit multiplication (`2x` is an error, write `2*x`), and
//! `#` starts a comment running to the end of the line. Errors carry
//! `line:col` positions.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::Scalar;
use crate::error::{Error, Result};

use super::{MultiPoly, Vars};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err_at(line: usize, col: usize, msg: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("{line}:{col}: {msg}"))
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump(&mut chars);
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump(&mut chars);
                }
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        digits.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                let n: BigInt = digits.parse().expect("digits form an integer");
                out.push(Spanned { tok: Tok::Int(n), line: tline, col: tcol });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                out.push(Spanned { tok: Tok::Ident(name), line: tline, col: tcol });
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                let tok = match bump(&mut chars) {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                out.push(Spanned { tok, line: tline, col: tcol });
            }
            other => {
                return Err(err_at(tline, tcol, format!("unexpected character '{other}'")));
            }
        }
    }
    out.push(Spanned { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    vars: &'a Vars,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Slash => {
                    let at = self.next();
                    let rhs = self.unary()?;
                    let c = rhs.constant_term();
                    if rhs.num_terms() > 1 || (rhs.num_terms() == 1 && c.is_zero()) {
                        return Err(err_at(
                            at.line,
                            at.col,
                            "division is only allowed by a nonzero constant",
                        ));
                    }
                    if c.is_zero() {
                        return Err(err_at(at.line, at.col, "division by zero"));
                    }
                    let inv = c.inverse().map_err(|_| {
                        err_at(at.line, at.col, "division by zero")
                    })?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        if self.peek().tok == Tok::Minus {
            self.next();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.next();
        let t = self.next();
        let e = match &t.tok {
            Tok::Int(n) => u32::try_from(n.clone())
                .map_err(|_| err_at(t.line, t.col, "exponent out of range"))?,
            _ => return Err(err_at(t.line, t.col, "expected an integer exponent after '^'")),
        };
        if self.peek().tok == Tok::Caret {
            let t = self.peek().clone();
            return Err(err_at(
                t.line,
                t.col,
                "chained '^' is ambiguous; parenthesize",
            ));
        }
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let t = self.next();
        match t.tok {
            Tok::Int(n) => Ok(MultiPoly::constant(
                self.vars,
                Scalar::Rat(BigRational::from_integer(n)),
            )),
            Tok::Ident(name) => match self.vars.iter().position(|v| v == &name) {
                Some(i) => Ok(MultiPoly::var(self.vars, i)),
                None => Err(err_at(
                    t.line,
                    t.col,
                    format!(
                        "unknown variable '{name}' (ring variables: {})",
                        self.vars.join(", ")
                    ),
                )),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                let t = self.next();
                if t.tok != Tok::RParen {
                    return Err(err_at(t.line, t.col, "expected ')'"));
                }
                Ok(inner)
            }
            Tok::End => Err(err_at(t.line, t.col, "unexpected end of input")),
            other => Err(err_at(t.line, t.col, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses one polynomial expression over the given ring.
pub fn parse_polynomial(src: &str, vars: &Vars) -> Result<MultiPoly> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, vars };
    let poly = p.expr()?;
    let t = p.peek();
    if t.tok != Tok::End {
        return Err(err_at(
            t.line,
            t.col,
            format!("unexpected trailing token {:?}", t.tok),
        ));
    }
    Ok(poly)
}
