//! Recursive-descent parser for polynomial text.
//!
//! ```text
//! poly   := ['+'|'-'] term { ('+'|'-') term }
//! term   := factor { '*' factor | '/' int }
//! factor := atom [ '^' int ]
//! atom   := int | var | 'w' | '(' poly ')'
//! ```
//!
//! Factors multiply in order, so `(w+1)*x*y` and `x^3` are both accepted.

use num_bigint::BigInt;

use crate::freealg::{AlgebraError, NcPoly, VarNames};
use crate::scalars::Field;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: &'a Field,
    names: &'a VarNames,
}

pub(crate) fn parse_poly(text: &str, field: &Field, names: &VarNames) -> Result<NcPoly, AlgebraError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, field, names };
    p.skip_ws();
    if p.at_end() {
        return Err(p.syntax("empty input"));
    }
    let out = p.poly()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.syntax(&format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(out)
}

impl<'a> Parser<'a> {
    fn arity(&self) -> usize {
        self.names.arity()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn syntax(&self, msg: &str) -> AlgebraError {
        AlgebraError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn poly(&mut self) -> Result<NcPoly, AlgebraError> {
        let negate = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<NcPoly, AlgebraError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.factor()?;
            } else if self.eat(b'/') {
                self.skip_ws();
                let at = self.pos;
                let d = self.integer()?;
                let inv = self.field.inv_s(&self.field.int_s(&d)).ok_or(AlgebraError::FieldLiteral {
                    pos: at,
                    msg: format!("division by {d}, which is zero in {}", self.field),
                })?;
                acc = acc.scale_s(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<NcPoly, AlgebraError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let at = self.pos;
            let e = self.integer()?;
            let e = usize::try_from(e)
                .ok()
                .filter(|&e| e <= 64)
                .ok_or(AlgebraError::Syntax { pos: at, msg: "exponent out of range".into() })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, AlgebraError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse as an integer"))
    }

    fn atom(&mut self) -> Result<NcPoly, AlgebraError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.poly()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(NcPoly::constant(&self.field.from_bigint(&n), self.arity()))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                if name == "w" {
                    return match self.field.generator() {
                        Some(g) => Ok(NcPoly::constant(&g, self.arity())),
                        None => Err(AlgebraError::FieldLiteral {
                            pos: start,
                            msg: format!("`w` is not defined over {}", self.field),
                        }),
                    };
                }
                match self.names.lookup(name) {
                    Some(i) => Ok(NcPoly::var(self.field, self.arity(), i)),
                    None => Err(AlgebraError::UnknownVariable { name: name.to_string(), pos: start }),
                }
            }
            Some(c) => Err(self.syntax(&format!("unexpected `{}`", c as char))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::Word;

    #[test]
    fn commutator_and_aliases() {
        let q = Field::rationals();
        let c = NcPoly::parse("x*y - y*x", &q, 2).unwrap();
        let manual = &NcPoly::word(&q, 2, Word::from_letters([1, 2])) - &NcPoly::word(&q, 2, Word::from_letters([2, 1]));
        assert_eq!(c, manual);

        let a = NcPoly::parse("2*x1*x2*x1 + 1/3", &q, 2).unwrap();
        let b = NcPoly::parse("2*x*y*x + 1/3", &q, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.coefficient(&Word::from_letters([1, 2, 1])), q.from_i64(2));
        assert_eq!(a.constant_term().to_string(), "1/3");
    }

    #[test]
    fn powers_and_parens() {
        let q = Field::rationals();
        assert_eq!(NcPoly::parse("x^3", &q, 2).unwrap(), NcPoly::parse("x*x*x", &q, 2).unwrap());
        assert_eq!(
            NcPoly::parse("(x+y)^2", &q, 2).unwrap(),
            NcPoly::parse("x*x + x*y + y*x + y*y", &q, 2).unwrap()
        );
        assert_eq!(NcPoly::parse("t^2 + t", &q, 1).unwrap().to_string(), "x + x*x");
        assert_eq!(NcPoly::parse("t", &q, 4).unwrap(), NcPoly::var(&q, 4, 4));
    }

    #[test]
    fn errors_carry_positions() {
        let q = Field::rationals();
        assert_eq!(
            NcPoly::parse("x + u", &q, 2),
            Err(AlgebraError::UnknownVariable { name: "u".into(), pos: 4 })
        );
        assert!(matches!(NcPoly::parse("x + ", &q, 2), Err(AlgebraError::Syntax { pos: 4, .. })));
        assert!(matches!(NcPoly::parse("z", &q, 2), Err(AlgebraError::UnknownVariable { .. })));
        assert!(matches!(NcPoly::parse("x3", &q, 2), Err(AlgebraError::UnknownVariable { .. })));
        assert!(matches!(NcPoly::parse("w*x", &q, 2), Err(AlgebraError::FieldLiteral { pos: 0, .. })));
        let f5 = Field::prime(5).unwrap();
        assert!(matches!(NcPoly::parse("x/5", &f5, 2), Err(AlgebraError::FieldLiteral { pos: 2, .. })));
        assert!(matches!(NcPoly::parse("(x", &q, 2), Err(AlgebraError::Syntax { .. })));
        assert!(matches!(NcPoly::parse("", &q, 2), Err(AlgebraError::Syntax { pos: 0, .. })));
        assert!(matches!(NcPoly::parse("x y", &q, 2), Err(AlgebraError::Syntax { pos: 2, .. })));
    }

    #[test]
    fn finite_literals_reduce() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(NcPoly::parse("7*x", &f5, 2).unwrap().to_string(), "2*x");
        assert_eq!(NcPoly::parse("1/2", &f5, 2).unwrap().to_string(), "3");
        let f9 = Field::gf(9).unwrap();
        assert_eq!(NcPoly::parse("w^2", &f9, 2).unwrap().to_string(), "2");
    }
}
