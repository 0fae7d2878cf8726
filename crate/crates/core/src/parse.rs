//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' natural)?
//! atom   := natural ('/' natural)? | variable | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. Variables are drawn from a caller-supplied list, so
//! the same grammar serves `t`-polynomials and `(t, T)` series entries.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::scalars::{FieldSpec, Scalar};

/// Sparse multivariate polynomial: exponent vector to nonzero coefficient.
pub type Terms = BTreeMap<Vec<u32>, Scalar>;

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    field: FieldSpec,
    vars: &'a [&'a str],
}

fn add_terms(a: &Terms, b: &Terms) -> Terms {
    let mut out = a.clone();
    for (k, v) in b {
        let e = out.remove(k);
        let s = match e {
            Some(x) => &x + v,
            None => v.clone(),
        };
        if !s.is_zero() {
            out.insert(k.clone(), s);
        }
    }
    out
}

fn neg_terms(a: &Terms) -> Terms {
    a.iter().map(|(k, v)| (k.clone(), -v)).collect()
}

fn mul_terms(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            let k: Vec<u32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
            out = add_terms(&out, &BTreeMap::from([(k, va * vb)]));
        }
    }
    out
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn column(&self) -> usize {
        self.chars.get(self.pos).map(|c| c.0 + 1).unwrap_or_else(|| {
            self.chars.last().map(|c| c.0 + 2).unwrap_or(1)
        })
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.column(), msg)
    }

    fn constant(&self, s: Scalar) -> Terms {
        let mut t = Terms::new();
        if !s.is_zero() {
            t.insert(vec![0; self.vars.len()], s);
        }
        t
    }

    fn natural(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
        Ok(s.parse().expect("digits"))
    }

    fn expr(&mut self) -> Result<Terms> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = add_terms(&acc, &self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = add_terms(&acc, &neg_terms(&self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Terms> {
        let mut acc = self.unary()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = mul_terms(&acc, &self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Terms> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(neg_terms(&self.unary()?))
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Terms> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.natural()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            let mut acc = self.constant(self.field.one());
            for _ in 0..e {
                acc = mul_terms(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Terms> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.natural()?;
                let mut value = self.field.from_bigint(&n);
                if self.peek() == Some('/') {
                    let col = self.column();
                    self.pos += 1;
                    let d = self.natural()?;
                    if !self.field.is_char_zero() {
                        return Err(Error::parse(col, "fractions are only allowed over Q"));
                    }
                    let inv = self
                        .field
                        .from_bigint(&d)
                        .inv()
                        .ok_or_else(|| Error::parse(col, "zero denominator"))?;
                    value = &value * &inv;
                }
                Ok(self.constant(value))
            }
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].1.is_alphanumeric() || self.chars[self.pos].1 == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                let idx = self.vars.iter().position(|v| *v == name).ok_or_else(|| {
                    Error::parse(self.chars[start].0 + 1, format!("unknown variable {name:?}"))
                })?;
                let mut exps = vec![0; self.vars.len()];
                exps[idx] = 1;
                Ok(BTreeMap::from([(exps, self.field.one())]))
            }
            Some(c) => Err(self.err(format!("unexpected character {c:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parse `text` as a polynomial in `vars` over `field`.
pub fn parse_terms(text: &str, field: FieldSpec, vars: &[&str]) -> Result<Terms> {
    let mut p = Parser {
        chars: text.char_indices().collect(),
        pos: 0,
        field,
        vars,
    };
    let t = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_precedence_and_powers() {
        let q = FieldSpec::rationals();
        let t = parse_terms("2*(t+1)^2 - t*t", q, &["t"]).unwrap();
        // 2t^2 + 4t + 2 - t^2
        assert_eq!(t[&vec![2]], q.one());
        assert_eq!(t[&vec![1]], q.from_i64(4));
        assert_eq!(t[&vec![0]], q.from_i64(2));
        let half = parse_terms(" - 1/2 * t ^ 3 ", q, &["t"]).unwrap();
        assert_eq!(half[&vec![3]], q.ratio(-1, 2).unwrap());
    }

    #[test]
    fn two_variables() {
        let q = FieldSpec::rationals();
        let t = parse_terms("1 + t*T", q, &["t", "T"]).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[&vec![1, 1]], q.one());
    }

    #[test]
    fn errors_carry_columns() {
        let q = FieldSpec::rationals();
        match parse_terms("t + x", q, &["t"]) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        match parse_terms("(t + 1", q, &["t"]) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 7),
            other => panic!("{other:?}"),
        }
        assert!(parse_terms("1/2", FieldSpec::prime(5).unwrap(), &["t"]).is_err());
        assert!(parse_terms("t t", q, &["t"]).is_err());
    }
}
