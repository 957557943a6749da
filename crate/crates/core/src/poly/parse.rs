//! Recursive-descent parser for the polynomial text grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | integer '/' integer | ident | '(' expr ')'
//! ```
//!
//! `d`, `x`, `y` are ∂, λ, μ; any other `[a-z][a-z0-9_]*` is a parameter.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use super::{FormalVar, ParamPoly};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{message} at column {column}")]
pub struct PolyParseError {
    pub message: String,
    /// 1-based character column.
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Scalar),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "number `{n}`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, PolyParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |from: usize| -> usize {
        let mut j = from;
        while j < chars.len() && chars[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((Tok::Plus, col)),
            '-' => out.push((Tok::Minus, col)),
            '*' => out.push((Tok::Star, col)),
            '^' => out.push((Tok::Caret, col)),
            '(' => out.push((Tok::LParen, col)),
            ')' => out.push((Tok::RParen, col)),
            '0'..='9' => {
                let end = digits(i);
                let numer: BigInt = chars[i..end].iter().collect::<String>().parse().unwrap();
                let mut value = Scalar::from_bigint(numer.clone());
                i = end;
                if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                    let dend = digits(i + 1);
                    let denom: BigInt = chars[i + 1..dend]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .unwrap();
                    if denom == BigInt::from(0) {
                        return Err(PolyParseError {
                            message: "zero denominator".into(),
                            column: i + 2,
                        });
                    }
                    value = Scalar::from_bigint(numer) / Scalar::from_bigint(denom);
                    i = dend;
                }
                out.push((Tok::Num(value), col));
                continue;
            }
            'a'..='z' => {
                let mut j = i + 1;
                while j < chars.len()
                    && (chars[j].is_ascii_lowercase()
                        || chars[j].is_ascii_digit()
                        || chars[j] == '_')
                {
                    j += 1;
                }
                out.push((Tok::Ident(chars[i..j].iter().collect()), col));
                i = j;
                continue;
            }
            other => {
                return Err(PolyParseError {
                    message: format!("unexpected character `{other}`"),
                    column: col,
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn error(&self, message: impl Into<String>) -> PolyParseError {
        PolyParseError {
            message: message.into(),
            column: self.column(),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<ParamPoly, PolyParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc += &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ParamPoly, PolyParseError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ParamPoly, PolyParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<ParamPoly, PolyParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let e = n
                        .to_i64()
                        .and_then(|e| u32::try_from(e).ok())
                        .filter(|e| *e <= 64)
                        .ok_or_else(|| {
                            self.pos -= 1;
                            self.error("exponent must be an integer in 0..=64")
                        })?;
                    return Ok(base.pow(e));
                }
                _ => {
                    self.pos -= 1;
                    return Err(self.error("expected integer exponent after `^`"));
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ParamPoly, PolyParseError> {
        match self.bump() {
            Some(Tok::Num(n)) => Ok(ParamPoly::constant(n)),
            Some(Tok::Ident(name)) => Ok(ParamPoly::var(match name.as_str() {
                "d" => FormalVar::Del,
                "x" => FormalVar::Lam,
                "y" => FormalVar::Mu,
                _ => FormalVar::Param(name),
            })),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => {
                        self.pos -= 1;
                        Err(self.error("expected `)`"))
                    }
                }
            }
            Some(t) => {
                self.pos -= 1;
                Err(self.error(format!("unexpected {t}")))
            }
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses a polynomial string.
pub fn parse_poly(src: &str) -> Result<ParamPoly, PolyParseError> {
    let toks = lex(src)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end_col: src.chars().count() + 1,
    };
    let out = parser.expr()?;
    if let Some(t) = parser.peek() {
        let msg = format!("unexpected {t}; operators must be explicit");
        return Err(parser.error(msg));
    }
    Ok(out)
}
