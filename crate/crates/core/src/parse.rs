//! Text syntax for elements.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor+                       juxtaposition is multiplication
//! factor := atom ['^' int] ['*']          trailing '*' on an atom is the adjoint
//! atom   := S[w] | S*[w] | S1 | S2 | P[w] | U | f | F | phi(expr) | (expr) | p[/q]
//! ```
//!
//! Words are digit strings over `{1,2}` or `e` for the empty word. A `*`
//! following a number is a multiplication sign, so `3/2*S[112] U^3 S*[21]`
//! and `U U*` both parse as expected.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::element::Element;
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::words::Word;
use crate::Rational;

pub fn parse_element(text: &str) -> Result<Element> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses a single canonical monomial such as `S[112] U^3 S*[21]`.
pub fn parse_monomial(text: &str) -> Result<Monomial> {
    let e = parse_element(text)?;
    e.as_monomial()
        .cloned()
        .ok_or_else(|| Error::Parse { position: 0, message: "expected a single monomial".into() })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse { position: self.pos, message: msg.into() }
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn starts_with(&self, s: &str) -> bool {
        self.src[self.pos..].starts_with(s.as_bytes())
    }

    fn expr(&mut self) -> Result<Element> {
        self.ws();
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            self.ws();
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Element> {
        self.ws();
        let mut acc = self.factor()?;
        loop {
            self.ws();
            match self.peek() {
                Some(b'+') | Some(b'-') | Some(b')') | None => return Ok(acc),
                _ => acc = acc.mul(&self.factor()?),
            }
        }
    }

    fn factor(&mut self) -> Result<Element> {
        self.ws();
        let start = self.pos;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let scalar = self.rational()?;
            self.ws();
            // a '*' after a number is an explicit multiplication sign
            self.eat(b'*');
            return Ok(Element::one().scale(&scalar));
        }
        let mut e = self.atom()?;
        if self.eat(b'^') {
            let n = self.int()?;
            e = if n.is_negative() {
                e.power(&n).map_err(|_| Error::Parse {
                    position: start,
                    message: "negative powers need a unitary base".into(),
                })?
            } else if let Some(m) = e.as_monomial().filter(|m| m.alpha.is_empty() && m.beta.is_empty()) {
                Element::u_power(&m.k * &n)
            } else {
                let n = n.to_u64().ok_or_else(|| self.error("exponent too large"))?;
                e.pow(n)
            };
        }
        if self.eat(b'*') {
            e = e.adjoint();
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Element> {
        if self.starts_with("phi(") {
            self.pos += 4;
            let inner = self.expr()?;
            self.ws();
            self.expect(b')')?;
            return Ok(inner.phi());
        }
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.ws();
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'S') => {
                self.pos += 1;
                if let Some(l @ (b'1' | b'2')) = self.peek() {
                    self.pos += 1;
                    return Ok(Element::s(Word::letter(l - b'0')));
                }
                let adjoint = self.eat(b'*');
                let w = self.bracket_word()?;
                Ok(if adjoint { Element::s_adj(w) } else { Element::s(w) })
            }
            Some(b'P') => {
                self.pos += 1;
                let w = self.bracket_word()?;
                Ok(Element::projection(w))
            }
            Some(b'U') => {
                self.pos += 1;
                Ok(Element::u_power(1))
            }
            Some(b'f') => {
                self.pos += 1;
                Ok(Element::flip())
            }
            Some(b'F') => {
                self.pos += 1;
                Ok(Element::big_f())
            }
            Some(c) => Err(self.error(format!("unexpected '{}'", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn bracket_word(&mut self) -> Result<Word> {
        self.expect(b'[')?;
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c == b']' {
                break;
            }
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        let w = text.parse::<Word>().map_err(|e| match e {
            Error::Parse { position, message } => Error::Parse { position: start + position, message },
            other => other,
        })?;
        self.expect(b']')?;
        Ok(w)
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn int(&mut self) -> Result<BigInt> {
        let braced = self.eat(b'{');
        let negative = self.eat(b'-');
        if !negative {
            self.eat(b'+');
        }
        let n = self.digits()?;
        if braced {
            self.expect(b'}')?;
        }
        Ok(if negative { -n } else { n })
    }

    fn rational(&mut self) -> Result<Rational> {
        let num = self.digits()?;
        if self.eat(b'/') {
            let at = self.pos;
            let den = self.digits()?;
            if den.is_zero() {
                return Err(Error::Parse { position: at, message: "zero denominator".into() });
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_monomials() {
        let m = parse_monomial("S[112] U^3 S*[21]").unwrap();
        assert_eq!(m, Monomial::new("112".parse().unwrap(), 3, "21".parse().unwrap()));
        assert_eq!(parse_monomial("U^-4").unwrap(), Monomial::u_power(-4));
        assert_eq!(parse_monomial("U^{-4}").unwrap(), Monomial::u_power(-4));
        assert_eq!(parse_monomial("S[2]").unwrap(), Monomial::s("2".parse().unwrap()));
        assert_eq!(parse_monomial("1").unwrap(), Monomial::identity());
        assert_eq!(parse_monomial("S[e]").unwrap(), Monomial::identity());
    }

    #[test]
    fn products_and_sums() {
        assert!(parse_element("U U*").unwrap().equals(&Element::one()));
        assert!(parse_element("S2 U").unwrap().equals(&parse_element("U^2 S2").unwrap()));
        assert!(parse_element("S1").unwrap().equals(&parse_element("U S2").unwrap()));
        assert!(parse_element("(S[1] + S[2])*").unwrap().equals(&parse_element("S*[1] + S*[2]").unwrap()));
        let e = parse_element("3/2*U - 1/2 U").unwrap();
        assert!(e.equals(&Element::u_power(1)));
        assert!(parse_element("f f").unwrap().equals(&Element::one()));
        assert!(parse_element("(U S2)^2").unwrap().equals(&parse_element("S1 S1").unwrap()));
        assert!(parse_element("phi(P[1]) U^4").unwrap().equals(&parse_element("P[11] U^4 + P[21] U^4").unwrap()));
        assert!(parse_element("f^-1").unwrap().equals(&Element::flip()));
    }

    #[test]
    fn big_f_literal() {
        let f = parse_element("F").unwrap();
        let expected = parse_element("S[11] S*[11] + S[12] S*[21] + S[21] S*[12] + S[22] S*[22]").unwrap();
        assert_eq!(f.to_string(), expected.to_string());
    }

    #[test]
    fn reports_positions() {
        assert!(matches!(parse_element("U + S[13]"), Err(Error::Parse { position: 7, .. })));
        assert!(matches!(parse_element("U +"), Err(Error::Parse { position: 3, .. })));
        assert!(matches!(parse_element("U )"), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse_element("1/0"), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse_element("S[1]^-1"), Err(Error::Parse { position: 0, .. })));
    }
}
