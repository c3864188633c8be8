//! Polynomial input format.
//!
//! ```text
//! expr   := '-'? term (('+' | '-') term)*
//! term   := factor ('*'? factor)*
//! factor := base ('^' uint)?
//! base   := uint ('/' uint)? | var | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. Variables are single letters drawn from a
//! configurable table; the default accepts `x` and `y` only.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::polyalg::{MultiPoly, Rational, Var};

/// Largest accepted exponent literal.
pub const MAX_EXPONENT: u32 = 10_000;

const XY: &[(char, Var)] = &[('x', Var::X), ('y', Var::Y)];

/// Parses a polynomial in `x` and `y`.
pub fn parse(text: &str) -> Result<MultiPoly> {
    parse_with(text, XY)
}

/// Parses with a custom variable table.
pub fn parse_with(text: &str, vars: &[(char, Var)]) -> Result<MultiPoly> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, vars };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.error("empty expression"));
    }
    let out = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(out),
        Some(')') => Err(p.error("unmatched ')'")),
        Some(c) => Err(p.error(&format!("unexpected '{c}'"))),
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    vars: &'a [(char, Var)],
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse { column: self.pos + 1, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        self.skip_ws();
        let negate = self.peek() == Some('-');
        if negate {
            self.pos += 1;
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(&self, c: char) -> bool {
        c.is_ascii_digit() || c == '(' || c.is_alphabetic()
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc * self.factor()?;
                }
                Some(c) if self.starts_factor(c) => acc = acc * self.factor()?,
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        let base = self.base()?;
        self.skip_ws();
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Err(self.error("exponent must be a nonnegative integer literal"));
        }
        let start = self.pos;
        let digits = self.digits();
        let e = digits.parse::<u32>().ok().filter(|e| *e <= MAX_EXPONENT).ok_or(Error::Parse {
            column: start + 1,
            message: format!("exponent exceeds {MAX_EXPONENT}"),
        })?;
        Ok(base.pow(e))
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn base(&mut self) -> Result<MultiPoly> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digit string");
                self.skip_ws();
                if self.peek() != Some('/') {
                    return Ok(MultiPoly::constant(Rational::from_integer(num)));
                }
                self.pos += 1;
                self.skip_ws();
                if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    return Err(self.error("expected integer denominator"));
                }
                let at = self.pos;
                let den: BigInt = self.digits().parse().expect("digit string");
                if den.is_zero() {
                    return Err(Error::Parse { column: at + 1, message: "zero denominator".to_string() });
                }
                Ok(MultiPoly::constant(Rational::new(num, den)))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_alphabetic() => match self.vars.iter().find(|(name, _)| *name == c) {
                Some((_, v)) => {
                    self.pos += 1;
                    Ok(MultiPoly::var(*v))
                }
                None => Err(self.error(&format!("unknown variable '{c}'"))),
            },
            Some(c) => Err(self.error(&format!("unexpected '{c}'"))),
        }
    }
}
