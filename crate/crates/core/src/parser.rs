//! Recursive-descent parser for polynomial and rational expressions.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' INTEGER)?
//! primary := INTEGER | IDENT | '(' expr ')'
//! ```
//!
//! Identifiers are ring variables or bound parameters; parameters are
//! substituted by their rational value at parse time. Decimal literals and
//! implicit multiplication are rejected. Write `3/4`, not `0.75`, and
//! `2*x`, not `2x`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::algebra::{AlgebraError, MultiPoly, Rational, RationalFn, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("exponent at offset {offset} must be a non-negative integer literal")]
    BadExponent { offset: usize },
    #[error("decimal literal at offset {offset}; use a fraction such as 3/4")]
    DecimalLiteral { offset: usize },
    #[error("division by an expression that is identically zero at offset {offset}")]
    DivisionByZero { offset: usize },
    #[error("non-polynomial result (denominator is not constant)")]
    NonPolynomial,
    #[error("parameter `{0}` collides with a ring variable")]
    ParamCollision(String),
    #[error("empty expression")]
    Empty,
}

/// Ring plus bound parameter values.
#[derive(Debug, Clone)]
pub struct ParseContext {
    ring: Ring,
    params: BTreeMap<String, Rational>,
}

impl ParseContext {
    pub fn new(ring: &Ring) -> Self {
        ParseContext {
            ring: ring.clone(),
            params: BTreeMap::new(),
        }
    }

    /// Binds `name` to `value`. Fails if `name` is a ring variable.
    pub fn with_param(mut self, name: &str, value: Rational) -> Result<Self, ParseError> {
        if self.ring.index_of(name).is_some() {
            return Err(ParseError::ParamCollision(name.to_string()));
        }
        self.params.insert(name.to_string(), value);
        Ok(self)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn param(&self, name: &str) -> Option<&Rational> {
        self.params.get(name)
    }
}

pub fn parse_expr(src: &str, ctx: &ParseContext) -> Result<RationalFn, ParseError> {
    let tokens = tokenize(src)?;
    if tokens.len() == 1 {
        return Err(ParseError::Empty);
    }
    let mut p = Parser {
        tokens,
        pos: 0,
        ctx,
    };
    let value = p.expr()?;
    match p.peek() {
        Tok::End => Ok(value),
        _ => Err(p.syntax("unexpected token")),
    }
}

/// Like [`parse_expr`] but the result must be a polynomial.
pub fn parse_poly(src: &str, ctx: &ParseContext) -> Result<MultiPoly, ParseError> {
    parse_expr(src, ctx)?
        .into_poly()
        .map_err(|_| ParseError::NonPolynomial)
}

#[derive(Debug, Clone, PartialEq)]
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

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'.' || bytes[i] == b'e' || bytes[i] == b'E') {
                    return Err(ParseError::DecimalLiteral { offset: start });
                }
                if i < bytes.len() && (bytes[i].is_ascii_alphabetic() || bytes[i] == b'_') {
                    return Err(ParseError::Syntax {
                        offset: i,
                        message: "implicit multiplication is not supported; use `*`".into(),
                    });
                }
                out.push((Tok::Int(src[start..i].parse().expect("digits")), start));
                continue;
            }
            b'.' => return Err(ParseError::DecimalLiteral { offset: start }),
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!(
                        "unexpected character `{}`",
                        src[start..].chars().next().unwrap()
                    ),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    ctx: &'a ParseContext,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, message: &str) -> ParseError {
        let message = match self.peek() {
            Tok::End => format!("{message}: unexpected end of input"),
            _ => message.to_string(),
        };
        ParseError::Syntax {
            offset: self.offset(),
            message,
        }
    }

    fn expr(&mut self) -> Result<RationalFn, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalFn, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    self.bump();
                    let offset = self.offset();
                    let rhs = self.unary()?;
                    acc = acc.checked_div(&rhs).map_err(|e| match e {
                        AlgebraError::DivisionByZero => ParseError::DivisionByZero { offset },
                        other => unreachable!("same-ring division failed: {other}"),
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFn, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFn, ParseError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                let n = n.to_u32().ok_or(ParseError::BadExponent { offset })?;
                Ok(base.pow(n))
            }
            Tok::Minus | Tok::LParen | Tok::Ident(_) => Err(ParseError::BadExponent { offset }),
            _ => Err(self.syntax("expected exponent")),
        }
    }

    fn primary(&mut self) -> Result<RationalFn, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Tok::Int(n) => Ok(RationalFn::constant(
                self.ctx.ring(),
                Rational::from_integer(n),
            )),
            Tok::Ident(name) => {
                if let Some(i) = self.ctx.ring.index_of(&name) {
                    Ok(MultiPoly::var_at(&self.ctx.ring, i).into())
                } else if let Some(v) = self.ctx.params.get(&name) {
                    Ok(RationalFn::constant(&self.ctx.ring, v.clone()))
                } else {
                    Err(ParseError::UnknownIdentifier { name, offset })
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.syntax("expected `)`"));
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => Err(ParseError::Syntax {
                offset,
                message: "expected operand: unexpected end of input".into(),
            }),
            _ => Err(ParseError::Syntax {
                offset,
                message: "expected operand".into(),
            }),
        }
    }
}
