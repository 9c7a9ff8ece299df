//! Expression language for quaternion-valued polynomial functions of `q`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ('^' uint)?
//! atom   := 'q' | tuple | number | unit
//!         | 'conj' '(' expr ')'
//!         | 'bar' '(' literal ',' literal ')' '(' expr ')'
//!         | '(' expr ')'
//! unit   := 'i' | 'j' | 'k' | 'e1' ... 'e7'
//! tuple  := '(' number (',' number){3} ')' | '(' number (',' number){7} ')'
//! ```
//!
//! Products keep their operand order everywhere, from parsing through
//! expansion. `bar(a, b)(x)` denotes `a x b`.

mod ast;
mod lexer;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Octonion, Quaternion};

pub use ast::{eval_expr, eval_expr_octonion, to_polynomial, Expr, Literal};
pub use lexer::{tokenize, Token, TokenKind};

/// Maximum nesting depth of a parsed expression.
pub const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub const fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("unknown character {ch:?} at offset {offset}")]
    UnknownCharacter { offset: usize, ch: char },

    #[error("unknown identifier '{name}' at {span}")]
    UnknownIdentifier { span: Span, name: String },

    #[error("invalid number at {span}")]
    InvalidNumber { span: Span },

    #[error("syntax error at {span}: expected {}, found {found}", expected.join(" or "))]
    Syntax { span: Span, expected: Vec<&'static str>, found: String },

    #[error("expression nested deeper than {limit} levels at {span}")]
    TooDeep { span: Span, limit: usize },

    #[error("{what} at {span} is only available in octonion mode")]
    OctonionOnly { span: Span, what: &'static str },

    #[error("{what} at {span} is not available in octonion mode")]
    QuaternionOnly { span: Span, what: &'static str },
}

impl ParseError {
    /// Byte range of the offending input.
    pub fn span(&self) -> Span {
        match self {
            Self::UnknownCharacter { offset, ch } => Span::new(*offset, offset + ch.len_utf8()),
            Self::UnknownIdentifier { span, .. }
            | Self::InvalidNumber { span }
            | Self::Syntax { span, .. }
            | Self::TooDeep { span, .. }
            | Self::OctonionOnly { span, .. }
            | Self::QuaternionOnly { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Enables `e4..e7` and 8-tuples, disables `bar`.
    pub octonion: bool,
}

/// Parses `src` in quaternion mode.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    parse_with(src, ParseOptions::default())
}

pub fn parse_with(src: &str, options: ParseOptions) -> Result<Expr, ParseError> {
    parse_tokens(&tokenize(src)?, src.len(), options)
}

/// Parses an already tokenized input; `src_len` positions end-of-input errors.
pub fn parse_tokens(tokens: &[Token], src_len: usize, options: ParseOptions) -> Result<Expr, ParseError> {
    let mut p = Parser { tokens, pos: 0, depth: 0, src_len, options };
    let e = p.expr()?;
    match p.tokens.get(p.pos) {
        None => Ok(e),
        Some(_) => Err(p.unexpected(&["'+'", "'-'", "'*'", "end of input"])),
    }
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    depth: usize,
    src_len: usize,
    options: ParseOptions,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn span(&self) -> Span {
        self.tokens
            .get(self.pos)
            .map_or(Span::new(self.src_len, self.src_len), |t| t.span)
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        let found = self
            .tokens
            .get(self.pos)
            .map_or_else(|| "end of input".to_string(), |t| format!("'{}'", t.lexeme));
        ParseError::Syntax { span: self.span(), expected: expected.to_vec(), found }
    }

    fn expect(&mut self, kind: &TokenKind) -> Result<(), ParseError> {
        if self.peek() == Some(kind) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&[kind.describe()]))
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::TooDeep { span: self.span(), limit: MAX_DEPTH });
        }
        Ok(())
    }

    fn nested<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T, ParseError>) -> Result<T, ParseError> {
        self.enter()?;
        let out = f(self);
        self.depth -= 1;
        out
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.nested(|p| {
            let mut lhs = p.term()?;
            loop {
                match p.peek() {
                    Some(TokenKind::Plus) => {
                        p.pos += 1;
                        lhs = Expr::Add(Box::new(lhs), Box::new(p.term()?));
                    }
                    Some(TokenKind::Minus) => {
                        p.pos += 1;
                        lhs = Expr::Sub(Box::new(lhs), Box::new(p.term()?));
                    }
                    _ => return Ok(lhs),
                }
            }
        })
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(&TokenKind::Star) {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        self.nested(|p| {
            if p.peek() == Some(&TokenKind::Minus) {
                p.pos += 1;
                return Ok(Expr::Neg(Box::new(p.factor()?)));
            }
            let base = p.atom()?;
            if p.peek() != Some(&TokenKind::Caret) {
                return Ok(base);
            }
            p.pos += 1;
            let exponent = p
                .tokens
                .get(p.pos)
                .filter(|t| matches!(t.kind, TokenKind::Number(_)))
                .and_then(|t| {
                    if t.lexeme.bytes().all(|b| b.is_ascii_digit()) {
                        t.lexeme.parse::<u32>().ok()
                    } else {
                        None
                    }
                })
                .ok_or_else(|| p.unexpected(&["unsigned integer exponent"]))?;
            p.pos += 1;
            Ok(Expr::Pow(Box::new(base), exponent))
        })
    }

    fn literal_from(&self, kind: &TokenKind) -> Result<Option<Literal>, ParseError> {
        let span = self.span();
        Ok(Some(match kind {
            TokenKind::Number(x) => Literal::Quaternion(Quaternion::from(*x)),
            TokenKind::Unit(n @ 1..=3) => Literal::Quaternion(Quaternion::BASIS[*n as usize]),
            TokenKind::Unit(n) if self.options.octonion => Literal::Octonion(Octonion::unit(*n as usize)),
            TokenKind::Unit(_) => return Err(ParseError::OctonionOnly { span, what: "unit e4..e7" }),
            TokenKind::Tuple(v) if v.len() == 4 => {
                Literal::Quaternion(Quaternion::new(v[0], v[1], v[2], v[3]))
            }
            TokenKind::Tuple(v) if v.len() == 8 && self.options.octonion => {
                let mut a = [0.0; 8];
                a.copy_from_slice(v);
                Literal::Octonion(Octonion(a))
            }
            TokenKind::Tuple(_) => return Err(ParseError::OctonionOnly { span, what: "8-tuple literal" }),
            _ => return Ok(None),
        }))
    }

    /// Reads a quaternion constant for `bar`.
    fn quaternion_literal(&mut self) -> Result<Quaternion, ParseError> {
        let Some(kind) = self.peek().cloned() else {
            return Err(self.unexpected(&["quaternion literal"]));
        };
        match self.literal_from(&kind)? {
            Some(Literal::Quaternion(c)) => {
                self.pos += 1;
                Ok(c)
            }
            _ => Err(self.unexpected(&["quaternion literal"])),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        const ATOM: &[&str] = &["'q'", "number", "tuple", "unit", "'conj'", "'bar'", "'('"];
        let Some(kind) = self.peek().cloned() else {
            return Err(self.unexpected(ATOM));
        };
        if let Some(lit) = self.literal_from(&kind)? {
            self.pos += 1;
            return Ok(Expr::Const(lit));
        }
        match kind {
            TokenKind::Var => {
                self.pos += 1;
                Ok(Expr::Var)
            }
            TokenKind::LParen => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(&TokenKind::RParen)?;
                Ok(e)
            }
            TokenKind::Conj => {
                self.pos += 1;
                self.expect(&TokenKind::LParen)?;
                let e = self.expr()?;
                self.expect(&TokenKind::RParen)?;
                Ok(Expr::Conj(Box::new(e)))
            }
            TokenKind::Bar => {
                if self.options.octonion {
                    return Err(ParseError::QuaternionOnly { span: self.span(), what: "bar" });
                }
                self.pos += 1;
                self.expect(&TokenKind::LParen)?;
                let left = self.quaternion_literal()?;
                self.expect(&TokenKind::Comma)?;
                let right = self.quaternion_literal()?;
                self.expect(&TokenKind::RParen)?;
                self.expect(&TokenKind::LParen)?;
                let arg = self.expr()?;
                self.expect(&TokenKind::RParen)?;
                Ok(Expr::BarApply { left, right, arg: Box::new(arg) })
            }
            _ => Err(self.unexpected(ATOM)),
        }
    }
}
