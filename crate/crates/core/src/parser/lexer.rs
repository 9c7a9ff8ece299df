use serde::Serialize;

use super::{ParseError, Span};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum TokenKind {
    /// The variable `q`.
    Var,
    /// `i, j, k` map to 1, 2, 3; `eN` maps to N.
    Unit(u8),
    Number(f64),
    /// A parenthesised list of at least two signed numbers.
    Tuple(Vec<f64>),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
    Conj,
    Bar,
}

impl TokenKind {
    pub fn describe(&self) -> &'static str {
        match self {
            Self::Var => "'q'",
            Self::Unit(_) => "unit",
            Self::Number(_) => "number",
            Self::Tuple(_) => "tuple",
            Self::Plus => "'+'",
            Self::Minus => "'-'",
            Self::Star => "'*'",
            Self::Caret => "'^'",
            Self::LParen => "'('",
            Self::RParen => "')'",
            Self::Comma => "','",
            Self::Conj => "'conj'",
            Self::Bar => "'bar'",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: Span,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, pos: usize) -> Option<char> {
        self.src.get(pos..).and_then(|s| s.chars().next())
    }

    fn skip_ws_from(&self, mut pos: usize) -> usize {
        while let Some(c) = self.peek_at(pos) {
            if !c.is_whitespace() {
                break;
            }
            pos += c.len_utf8();
        }
        pos
    }

    /// End of an unsigned decimal literal starting at `pos`, if one is there.
    fn number_end(&self, pos: usize) -> Option<usize> {
        let bytes = self.src.as_bytes();
        let digits = |mut p: usize| {
            let start = p;
            while p < bytes.len() && bytes[p].is_ascii_digit() {
                p += 1;
            }
            (p, p - start)
        };
        let (mut p, n_int) = digits(pos);
        let mut n_frac = 0;
        if p < bytes.len() && bytes[p] == b'.' {
            (p, n_frac) = digits(p + 1);
        }
        if n_int + n_frac == 0 {
            return None;
        }
        if p < bytes.len() && (bytes[p] == b'e' || bytes[p] == b'E') {
            let mut e = p + 1;
            if e < bytes.len() && (bytes[e] == b'+' || bytes[e] == b'-') {
                e += 1;
            }
            let (end, n_exp) = digits(e);
            if n_exp > 0 {
                p = end;
            }
        }
        Some(p)
    }

    fn parse_number(&self, start: usize, end: usize) -> Result<f64, ParseError> {
        self.src[start..end]
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| ParseError::InvalidNumber { span: Span::new(start, end) })
    }

    /// Tries to read `( num , num ... )` at `self.pos`. Returns the values and
    /// the end offset, or `None` if the text is not a tuple.
    fn try_tuple(&self) -> Result<Option<(Vec<f64>, usize)>, ParseError> {
        let mut values = Vec::new();
        let mut p = self.pos + 1;
        loop {
            p = self.skip_ws_from(p);
            let sign_start = p;
            if matches!(self.peek_at(p), Some('+' | '-')) {
                p = self.skip_ws_from(p + 1);
            }
            let Some(end) = self.number_end(p) else {
                return Ok(None);
            };
            let mut x = self.parse_number(p, end)?;
            if self.src[sign_start..p].starts_with('-') {
                x = -x;
            }
            values.push(x);
            p = self.skip_ws_from(end);
            match self.peek_at(p) {
                Some(',') => p += 1,
                Some(')') if matches!(values.len(), 4 | 8) => return Ok(Some((values, p + 1))),
                _ => return Ok(None),
            }
        }
    }

    fn next_token(&mut self) -> Result<Option<Token>, ParseError> {
        self.pos = self.skip_ws_from(self.pos);
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        let (kind, end) = match c {
            '+' => (TokenKind::Plus, start + 1),
            '-' | '−' => (TokenKind::Minus, start + c.len_utf8()),
            '*' => (TokenKind::Star, start + 1),
            '^' => (TokenKind::Caret, start + 1),
            ')' => (TokenKind::RParen, start + 1),
            ',' => (TokenKind::Comma, start + 1),
            '(' => match self.try_tuple()? {
                Some((values, end)) => (TokenKind::Tuple(values), end),
                None => (TokenKind::LParen, start + 1),
            },
            c if c.is_ascii_digit() || c == '.' => {
                let end = self
                    .number_end(start)
                    .ok_or(ParseError::UnknownCharacter { offset: start, ch: c })?;
                (TokenKind::Number(self.parse_number(start, end)?), end)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let end = self.src[start..]
                    .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                    .map_or(self.src.len(), |n| start + n);
                let word = &self.src[start..end];
                let kind = match word {
                    "q" => TokenKind::Var,
                    "i" => TokenKind::Unit(1),
                    "j" => TokenKind::Unit(2),
                    "k" => TokenKind::Unit(3),
                    "conj" => TokenKind::Conj,
                    "bar" => TokenKind::Bar,
                    _ => match word.strip_prefix('e').and_then(|n| n.parse::<u8>().ok()) {
                        Some(n @ 1..=7) if word.len() == 2 => TokenKind::Unit(n),
                        _ => {
                            return Err(ParseError::UnknownIdentifier {
                                span: Span::new(start, end),
                                name: word.to_string(),
                            })
                        }
                    },
                };
                (kind, end)
            }
            ch => return Err(ParseError::UnknownCharacter { offset: start, ch }),
        };
        self.pos = end;
        Ok(Some(Token { kind, lexeme: self.src[start..end].to_string(), span: Span::new(start, end) }))
    }
}

/// Splits `src` into tokens. Whitespace separates tokens and is dropped.
pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut lexer = Lexer { src, pos: 0 };
    let mut tokens = Vec::new();
    while let Some(t) = lexer.next_token()? {
        tokens.push(t);
    }
    Ok(tokens)
}
