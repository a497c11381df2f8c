//! Recursive-descent parser for sums of products, shared by the polynomial
//! and differential-form front ends.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor (('*'|'/') factor)*
//! factor  := primary ('^' (integer | primary))*
//! primary := integer | name | '(' expr ')'
//! ```
//!
//! `a ^ k` with an integer `k` is a power; `a ^ b` with any other right-hand
//! side is the wedge product, which is how `dx1^dx3` is written.

use super::{Polynomial, Rational};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Values the parser can build.
pub trait ExprValue: Sized {
    fn constant(c: Rational) -> Self;
    fn add(&self, o: &Self) -> std::result::Result<Self, String>;
    fn sub(&self, o: &Self) -> std::result::Result<Self, String>;
    fn mul(&self, o: &Self) -> std::result::Result<Self, String>;
    fn wedge(&self, o: &Self) -> std::result::Result<Self, String>;
    fn pow(&self, k: u32) -> std::result::Result<Self, String>;
    fn as_constant(&self) -> Option<Rational>;
    fn scale(&self, c: &Rational) -> Self;
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push(Token { tok: t, line: l0, col: c0 });
            i += 1;
            col += 1;
            continue;
        }
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token { tok: Tok::Int(s.parse().expect("digits")), line: l0, col: c0 });
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Name(chars[start..i].iter().collect()), line: l0, col: c0 });
        } else {
            return Err(Error::Parse { line: l0, col: c0, msg: format!("unexpected character `{c}`") });
        }
        col += i - start;
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser<'a, T> {
    toks: Vec<Token>,
    pos: usize,
    resolve: &'a dyn Fn(&str) -> Option<T>,
}

impl<T: ExprValue> Parser<'_, T> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<U>(&self, at: &Token, msg: impl Into<String>) -> Result<U> {
        Err(Error::Parse { line: at.line, col: at.col, msg: msg.into() })
    }

    fn lift<U>(&self, at: &Token, r: std::result::Result<U, String>) -> Result<U> {
        r.or_else(|m| self.err(at, m))
    }

    fn expr(&mut self) -> Result<T> {
        let mut neg = false;
        match self.peek().tok {
            Tok::Plus => {
                self.bump();
            }
            Tok::Minus => {
                self.bump();
                neg = true;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.scale(&-Rational::from_integer(1.into()));
        }
        loop {
            let at = self.peek().clone();
            match at.tok {
                Tok::Plus => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.lift(&at, acc.add(&t))?;
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.lift(&at, acc.sub(&t))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<T> {
        let mut acc = self.factor()?;
        loop {
            let at = self.peek().clone();
            match at.tok {
                Tok::Star => {
                    self.bump();
                    let f = self.factor()?;
                    acc = self.lift(&at, acc.mul(&f))?;
                }
                Tok::Slash => {
                    self.bump();
                    let f = self.factor()?;
                    match f.as_constant() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        Some(_) => return self.err(&at, "division by zero"),
                        None => return self.err(&at, "divisor must be a nonzero constant"),
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<T> {
        let mut acc = self.primary()?;
        while self.peek().tok == Tok::Caret {
            let at = self.bump();
            if let Tok::Int(k) = &self.peek().tok {
                let k = k.clone();
                let kt = self.bump();
                let Some(k) = k.to_u32() else { return self.err(&kt, "exponent too large") };
                acc = self.lift(&at, acc.pow(k))?;
            } else {
                let rhs = self.primary()?;
                acc = self.lift(&at, acc.wedge(&rhs))?;
            }
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<T> {
        let t = self.bump();
        match &t.tok {
            Tok::Int(n) => Ok(T::constant(Rational::from_integer(n.clone()))),
            Tok::Name(s) => match (self.resolve)(s) {
                Some(v) => Ok(v),
                None => self.err(&t, format!("unknown symbol `{s}`")),
            },
            Tok::LParen => {
                let v = self.expr()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return self.err(&close, "expected `)`");
                }
                Ok(v)
            }
            Tok::End => self.err(&t, "unexpected end of input"),
            other => self.err(&t, format!("unexpected token {other:?}")),
        }
    }
}

/// Parses `text`, resolving names through `resolve`.
pub fn parse_expr<T: ExprValue>(text: &str, resolve: &dyn Fn(&str) -> Option<T>) -> Result<T> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, resolve };
    let v = p.expr()?;
    let end = p.peek().clone();
    if end.tok != Tok::End {
        return p.err(&end, "trailing input");
    }
    Ok(v)
}

impl ExprValue for Polynomial {
    fn constant(c: Rational) -> Self {
        // Ring size is fixed up by `parse_polynomial`; constants start in 0 variables.
        Polynomial::constant(0, c)
    }
    fn add(&self, o: &Self) -> std::result::Result<Self, String> {
        let (a, b) = align(self, o);
        a.checked_add(&b).map_err(|e| e.to_string())
    }
    fn sub(&self, o: &Self) -> std::result::Result<Self, String> {
        let (a, b) = align(self, o);
        a.checked_sub(&b).map_err(|e| e.to_string())
    }
    fn mul(&self, o: &Self) -> std::result::Result<Self, String> {
        let (a, b) = align(self, o);
        a.checked_mul(&b).map_err(|e| e.to_string())
    }
    fn wedge(&self, _o: &Self) -> std::result::Result<Self, String> {
        Err("`^` needs an integer exponent in a polynomial".into())
    }
    fn pow(&self, k: u32) -> std::result::Result<Self, String> {
        Ok(Polynomial::pow(self, k))
    }
    fn as_constant(&self) -> Option<Rational> {
        if self.terms().keys().all(|e| e.iter().all(|&k| k == 0)) {
            Some(self.terms().values().next().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }
    fn scale(&self, c: &Rational) -> Self {
        Polynomial::scale(self, c)
    }
}

// Constants are built in the 0-variable ring and widened on contact.
fn align(a: &Polynomial, b: &Polynomial) -> (Polynomial, Polynomial) {
    let widen = |p: &Polynomial, n: usize| {
        if p.nvars() == 0 && n > 0 {
            Polynomial::constant(n, p.constant_term())
        } else {
            p.clone()
        }
    };
    let n = a.nvars().max(b.nvars());
    (widen(a, n), widen(b, n))
}

/// Parses a polynomial in the variables `names` (e.g. `x1^2 - x2^2 - x3^4`).
pub fn parse_polynomial(text: &str, names: &[String]) -> Result<Polynomial> {
    let n = names.len();
    let resolve = |s: &str| names.iter().position(|v| v == s).map(|i| Polynomial::var(n, i));
    let p: Polynomial = parse_expr(text, &resolve)?;
    Ok(if p.nvars() == 0 { Polynomial::constant(n, p.constant_term()) } else { p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{q, qf};

    fn names() -> Vec<String> {
        Polynomial::default_names(3)
    }

    #[test]
    fn parses_rational_coefficients() {
        let p = parse_polynomial("3/4*x1^2 - x2 + 2", &names()).unwrap();
        assert_eq!(p.coeff(&[2, 0, 0]), qf(3, 4));
        assert_eq!(p.coeff(&[0, 1, 0]), q(-1));
        assert_eq!(p.constant_term(), q(2));
    }

    #[test]
    fn parentheses_and_powers() {
        let p = parse_polynomial("(x1 + x2)^2 - x1^2 - x2^2", &names()).unwrap();
        assert_eq!(p, Polynomial::var(3, 0).checked_mul(&Polynomial::var(3, 1)).unwrap().scale(&q(2)));
    }

    #[test]
    fn errors_carry_locations() {
        match parse_polynomial("x1 +\n  y7", &names()) {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_polynomial("x1 / x2", &names()).is_err());
        assert!(parse_polynomial("x1 )", &names()).is_err());
        assert!(parse_polynomial("x1 ^ x2", &names()).is_err());
    }

    #[test]
    fn constant_input_gets_full_ring() {
        let p = parse_polynomial("7", &names()).unwrap();
        assert_eq!(p.nvars(), 3);
    }
}
