//! Function expressions: `tan o sin`, `x + x^2`, `1/2 * arcsin o arctan`.
//!
//! Grammar (whitespace is ignored between tokens):
//!
//! ```text
//! expr     := term (("+" | "-") term)* ;
//! term     := [rational "*"] factor ;
//! factor   := primary ("o" primary)* ;          right-associative
//! primary  := name | "x" ["^" integer] | rational "*" primary | "(" expr ")" ;
//! rational := integer ["/" positive-integer] ;
//! ```
//!
//! `∘` is accepted as an alias for `o`. A rational may carry a leading `-`
//! where a term or primary begins. `c * x^k` with a bare `x` folds into a
//! single [`FunctionExpr::Monomial`]; `c * (x^k)` stays a [`FunctionExpr::Scale`].

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::rational::Rational;

const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FunctionExpr {
    Primitive(String),
    Monomial {
        coefficient: Rational,
        exponent: u32,
    },
    Sum(Box<FunctionExpr>, Box<FunctionExpr>),
    Difference(Box<FunctionExpr>, Box<FunctionExpr>),
    Scale(Rational, Box<FunctionExpr>),
    Compose(Box<FunctionExpr>, Box<FunctionExpr>),
}

impl FunctionExpr {
    pub fn primitive(name: &str) -> Self {
        FunctionExpr::Primitive(name.to_string())
    }

    pub fn monomial(coefficient: Rational, exponent: u32) -> Self {
        FunctionExpr::Monomial {
            coefficient,
            exponent,
        }
    }

    /// The variable `x`.
    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn sum(l: Self, r: Self) -> Self {
        FunctionExpr::Sum(Box::new(l), Box::new(r))
    }

    pub fn difference(l: Self, r: Self) -> Self {
        FunctionExpr::Difference(Box::new(l), Box::new(r))
    }

    pub fn scale(c: Rational, e: Self) -> Self {
        FunctionExpr::Scale(c, Box::new(e))
    }

    pub fn compose(outer: Self, inner: Self) -> Self {
        FunctionExpr::Compose(Box::new(outer), Box::new(inner))
    }

    pub fn depth(&self) -> usize {
        match self {
            FunctionExpr::Primitive(_) | FunctionExpr::Monomial { .. } => 1,
            FunctionExpr::Scale(_, e) => 1 + e.depth(),
            FunctionExpr::Sum(l, r)
            | FunctionExpr::Difference(l, r)
            | FunctionExpr::Compose(l, r) => 1 + l.depth().max(r.depth()),
        }
    }
}

/// Malformed input: byte offset of the offending token and the token kinds
/// that would have been accepted there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("parse error at offset {offset}: expected one of {}", expected.join(", "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
}

impl ParseError {
    fn new<'a>(offset: usize, expected: impl IntoIterator<Item = &'a str>) -> Self {
        ParseError {
            offset,
            expected: expected.into_iter().map(str::to_string).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    X,
    Compose,
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Invalid,
    End,
}

impl Tok {
    fn kind(&self) -> &'static str {
        match self {
            Tok::Name(_) => "name",
            Tok::X => "x",
            Tok::Compose => "o",
            Tok::Int(_) => "integer",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Invalid => "invalid character",
            Tok::End => "end of input",
        }
    }
}

fn lex(text: &str) -> Vec<(usize, Tok)> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(at, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            let tok = match word.as_str() {
                "x" => Tok::X,
                "o" => Tok::Compose,
                _ => Tok::Name(word),
            };
            out.push((at, tok));
            continue;
        }
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_ascii_digit() {
                    digits.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push((at, Tok::Int(digits.parse().expect("ascii digits"))));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '∘' => Tok::Compose,
            _ => Tok::Invalid,
        };
        out.push((at, tok));
        chars.next();
    }
    out.push((text.len(), Tok::End));
    out
}

/// Unclosed `(` is reported at the innermost one; a stray `)` at itself.
fn check_balance(tokens: &[(usize, Tok)]) -> Result<(), ParseError> {
    let mut open = Vec::new();
    for (at, tok) in tokens {
        match tok {
            Tok::LParen => open.push(*at),
            Tok::RParen if open.pop().is_none() => {
                return Err(ParseError::new(*at, ["end of input"]));
            }
            _ => {}
        }
    }
    match open.last() {
        Some(&at) => Err(ParseError::new(at, [")"])),
        None => Ok(()),
    }
}

struct Parser {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    expected: BTreeSet<&'static str>,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].1
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.tokens.len() - 1);
        &self.tokens[i].1
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].0
    }

    fn advance(&mut self) -> Tok {
        let tok = self.tokens[self.pos].1.clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        self.expected.clear();
        tok
    }

    /// Consumes the next token if it has the same kind as `want`.
    fn eat(&mut self, want: &Tok) -> bool {
        if std::mem::discriminant(self.peek()) == std::mem::discriminant(want) {
            self.advance();
            true
        } else {
            self.expected.insert(want.kind());
            false
        }
    }

    fn error(&self) -> ParseError {
        ParseError::new(self.offset(), self.expected.iter().copied())
    }

    fn fail_expecting(&mut self, kinds: &[&'static str]) -> ParseError {
        self.expected.extend(kinds.iter().copied());
        self.error()
    }

    fn at_rational(&self) -> bool {
        matches!(self.peek(), Tok::Int(_))
            || (matches!(self.peek(), Tok::Minus) && matches!(self.peek_at(1), Tok::Int(_)))
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let negative = self.eat(&Tok::Minus);
        let num = match self.advance() {
            Tok::Int(n) => n,
            _ => unreachable!("guarded by at_rational"),
        };
        let num = if negative { -num } else { num };
        if self.eat(&Tok::Slash) {
            let at = self.offset();
            match self.peek().clone() {
                Tok::Int(d) if !d.is_zero() => {
                    self.advance();
                    Ok(Rational::new(num, d))
                }
                _ => Err(ParseError::new(at, ["positive integer"])),
            }
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    fn expr(&mut self) -> Result<FunctionExpr, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new(self.offset(), ["shallower nesting"]));
        }
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = FunctionExpr::sum(acc, self.term()?);
            } else if self.eat(&Tok::Minus) {
                acc = FunctionExpr::difference(acc, self.term()?);
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<FunctionExpr, ParseError> {
        if self.at_rational() {
            let c = self.rational()?;
            if !self.eat(&Tok::Star) {
                return Err(self.error());
            }
            let (factor, bare) = self.factor()?;
            return Ok(scale_or_fold(c, factor, bare));
        }
        self.factor().map(|(e, _)| e)
    }

    /// Returns the factor and whether it is a bare `x` / `x^k` token.
    fn factor(&mut self) -> Result<(FunctionExpr, bool), ParseError> {
        let (head, bare) = self.primary()?;
        if self.eat(&Tok::Compose) {
            self.depth += 1;
            if self.depth > MAX_DEPTH {
                return Err(ParseError::new(self.offset(), ["shallower nesting"]));
            }
            let (rest, _) = self.factor()?;
            self.depth -= 1;
            Ok((FunctionExpr::compose(head, rest), false))
        } else {
            Ok((head, bare))
        }
    }

    fn primary(&mut self) -> Result<(FunctionExpr, bool), ParseError> {
        if self.at_rational() {
            let c = self.rational()?;
            if !self.eat(&Tok::Star) {
                return Err(self.error());
            }
            self.depth += 1;
            if self.depth > MAX_DEPTH {
                return Err(ParseError::new(self.offset(), ["shallower nesting"]));
            }
            let (inner, bare) = self.primary()?;
            self.depth -= 1;
            return Ok((scale_or_fold(c, inner, bare), false));
        }
        match self.peek().clone() {
            Tok::Name(name) => {
                self.advance();
                Ok((FunctionExpr::Primitive(name), false))
            }
            Tok::X => {
                self.advance();
                let exponent = if self.eat(&Tok::Caret) {
                    let at = self.offset();
                    match self.peek().clone() {
                        Tok::Int(n) => match n.to_u32() {
                            Some(e) if e >= 1 => {
                                self.advance();
                                e
                            }
                            _ => return Err(ParseError::new(at, ["positive integer"])),
                        },
                        _ => return Err(ParseError::new(at, ["positive integer"])),
                    }
                } else {
                    1
                };
                Ok((FunctionExpr::monomial(Rational::one(), exponent), true))
            }
            Tok::LParen => {
                self.advance();
                let inner = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.error());
                }
                Ok((inner, false))
            }
            _ => Err(self.fail_expecting(&["name", "x", "integer", "-", "("])),
        }
    }
}

fn scale_or_fold(c: Rational, e: FunctionExpr, bare: bool) -> FunctionExpr {
    match e {
        FunctionExpr::Monomial {
            coefficient,
            exponent,
        } if bare && coefficient.is_one() => FunctionExpr::monomial(c, exponent),
        other => FunctionExpr::scale(c, other),
    }
}

pub fn parse(text: &str) -> Result<FunctionExpr, ParseError> {
    let tokens = lex(text);
    check_balance(&tokens)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        expected: BTreeSet::new(),
        depth: 0,
    };
    let e = p.expr()?;
    if !p.eat(&Tok::End) {
        return Err(p.error());
    }
    Ok(e)
}

/// Parses text that may not be valid UTF-8. Each byte of an invalid sequence
/// becomes one invalid token, so error offsets stay byte offsets into `bytes`.
pub fn parse_bytes(bytes: &[u8]) -> Result<FunctionExpr, ParseError> {
    let mut text = String::with_capacity(bytes.len());
    for chunk in bytes.utf8_chunks() {
        text.push_str(chunk.valid());
        text.extend(std::iter::repeat_n('\u{1}', chunk.invalid().len()));
    }
    parse(&text)
}

fn render_rational(c: &Rational) -> String {
    if c.denom() == &BigInt::from(1) {
        c.numer().to_string()
    } else {
        c.to_string()
    }
}

fn render_monomial(coefficient: &Rational, exponent: u32) -> String {
    let base = if exponent == 1 {
        "x".to_string()
    } else {
        format!("x^{exponent}")
    };
    if coefficient.is_one() {
        base
    } else {
        format!("{} * {base}", render_rational(coefficient))
    }
}

fn is_unit_monomial(e: &FunctionExpr) -> bool {
    matches!(e, FunctionExpr::Monomial { coefficient, .. } if coefficient.is_one())
}

fn parens(s: String) -> String {
    format!("({s})")
}

/// Canonical text; `parse(&render(e)) == Ok(e)` for every expression.
pub fn render(e: &FunctionExpr) -> String {
    match e {
        FunctionExpr::Primitive(name) => name.clone(),
        FunctionExpr::Monomial {
            coefficient,
            exponent,
        } => render_monomial(coefficient, *exponent),
        FunctionExpr::Sum(l, r) | FunctionExpr::Difference(l, r) => {
            let op = if matches!(e, FunctionExpr::Sum(..)) {
                "+"
            } else {
                "-"
            };
            let right = match **r {
                FunctionExpr::Sum(..) | FunctionExpr::Difference(..) => parens(render(r)),
                _ => render(r),
            };
            format!("{} {op} {right}", render(l))
        }
        FunctionExpr::Scale(c, child) => {
            let inner = match **child {
                FunctionExpr::Primitive(_) | FunctionExpr::Compose(..) => render(child),
                _ => parens(render(child)),
            };
            format!("{} * {inner}", render_rational(c))
        }
        FunctionExpr::Compose(outer, inner) => {
            let outer_text = match **outer {
                FunctionExpr::Primitive(_) => render(outer),
                _ if is_unit_monomial(outer) => render(outer),
                _ => parens(render(outer)),
            };
            let inner_text = match **inner {
                FunctionExpr::Primitive(_) | FunctionExpr::Compose(..) => render(inner),
                _ if is_unit_monomial(inner) => render(inner),
                _ => parens(render(inner)),
            };
            format!("{outer_text} o {inner_text}")
        }
    }
}

impl fmt::Display for FunctionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}
