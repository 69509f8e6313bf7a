//! Polynomial text grammar.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (['*'] factor)*        juxtaposition multiplies
//! factor := atom ('^' integer)?
//! atom   := integer ['/' integer] | identifier | '(' expr ')'
//! ```
//!
//! An identifier that is not a ring variable is split greedily into
//! variable names, so `xy` reads as `x*y` in `k[x, y]`.

use std::sync::Arc;

use num_bigint::BigInt;

use super::polynomial::{PolyRing, Polynomial};
use crate::error::{Error, Result};

pub fn parse_poly(ring: &Arc<PolyRing>, src: &str) -> Result<Polynomial> {
    let mut p = Parser { ring, src: src.as_bytes(), pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

/// Splits a comma-separated list of polynomials (commas inside parentheses
/// are not separators) and parses each.
pub fn parse_poly_list(ring: &Arc<PolyRing>, src: &str) -> Result<Vec<Polynomial>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = src.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b',' if depth == 0 => {
                out.push((start, &src[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &src[start..]));
    if out.len() == 1 && out[0].1.trim().is_empty() {
        return Ok(Vec::new());
    }
    out.into_iter()
        .map(|(off, s)| {
            parse_poly(ring, s).map_err(|e| match e {
                Error::Parse { line, column, message } => Error::Parse { line, column: column + off, message },
                e => e,
            })
        })
        .collect()
}

struct Parser<'a> {
    ring: &'a Arc<PolyRing>,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { line: 1, column: self.pos + 1, message: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.ring);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() || c == b'_' => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let (prefix, base) = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let n = self.integer()?;
            let e: u32 = n.try_into().map_err(|_| self.error("exponent too large"))?;
            let mut out = Polynomial::one(self.ring);
            for _ in 0..e {
                out = &out * &base;
            }
            return Ok(&prefix * &out);
        }
        Ok(&prefix * &base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    /// Returns `(prefix, base)`: an exponent binds to `base` only, so that
    /// `xy^2` is `x*y^2`.
    fn atom(&mut self) -> Result<(Polynomial, Polynomial)> {
        let one = Polynomial::one(self.ring);
        let field = self.ring.field();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok((one, e))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let save = self.pos;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    if self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                        let den = self.integer()?;
                        let c = field.from_ratio(&num, &den).map_err(|_| self.error("zero denominator"))?;
                        return Ok((one, Polynomial::constant(self.ring, c)));
                    }
                    self.pos = save;
                    return Err(self.error("`/` must join two integer literals"));
                }
                Ok((one, Polynomial::constant(self.ring, field.from_bigint(&num))))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                self.identifier(ident, start)
            }
            _ => Err(self.error("expected a number, variable or `(`")),
        }
    }

    fn identifier(&self, ident: &str, start: usize) -> Result<(Polynomial, Polynomial)> {
        let one = Polynomial::one(self.ring);
        if let Some(i) = self.ring.var_index(ident) {
            return Ok((one, Polynomial::var(self.ring, i)));
        }
        // greedy split into known variables
        let mut out = one.clone();
        let mut last = one;
        let mut rest = ident;
        while !rest.is_empty() {
            let best = self.ring.names().iter().enumerate().filter(|(_, n)| rest.starts_with(n.as_str())).max_by_key(|(_, n)| n.len());
            match best {
                Some((i, n)) => {
                    out = &out * &last;
                    last = Polynomial::var(self.ring, i);
                    rest = &rest[n.len()..];
                }
                None => return Err(Error::Parse { line: 1, column: start + 1, message: format!("unknown variable in `{ident}`") }),
            }
        }
        Ok((out, last))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::FieldSpec;

    #[test]
    fn juxtaposition_and_parentheses() {
        let r = PolyRing::new(&["x", "y", "z"], FieldSpec::Rationals).unwrap();
        let a = parse_poly(&r, "2xy^2 - (x+z)^2").unwrap();
        let b = parse_poly(&r, "2*x*y^2 - x^2 - 2*x*z - z^2").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors_carry_columns() {
        let r = PolyRing::new(&["x", "y"], FieldSpec::Rationals).unwrap();
        match parse_poly(&r, "x + w") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("unexpected {other:?}"),
        }
        match parse_poly_list(&r, "x, y +") {
            Err(Error::Parse { column, .. }) => assert!(column > 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn list_parsing() {
        let r = PolyRing::new(&["x", "y"], FieldSpec::Rationals).unwrap();
        assert_eq!(parse_poly_list(&r, "x^2, x*y, (x+y)*(x-y)").unwrap().len(), 3);
        assert!(parse_poly_list(&r, "  ").unwrap().is_empty());
    }
}
