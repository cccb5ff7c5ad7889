//! Text grammar for Laurent polynomials:
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := INT | '[' xpoly ']' | 'z' INDEX ['^' ['-'] INT]
//! xpoly  := ['-'] xterm (('+' | '-') xterm)*
//! xterm  := INT ['*'] 'x' ['^' INT] | INT | 'x' ['^' INT]
//! ```
//!
//! Whitespace is ignored between tokens.

use std::sync::Arc;

use super::{check_exponent, Exponent, LaurentPolynomial};
use crate::error::{Error, Result};
use crate::ring::{RingDescriptor, RingElement};

pub fn parse_laurent(text: &str, ring: &Arc<RingDescriptor>, dim: usize) -> Result<LaurentPolynomial> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
        ring,
        dim,
    };
    let f = p.expr()?;
    p.skip_ws();
    if p.pos < p.s.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    ring: &'a Arc<RingDescriptor>,
    dim: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sign(&mut self) -> i64 {
        if self.eat(b'-') {
            -1
        } else {
            1
        }
    }

    fn integer(&mut self) -> Result<i128> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        text.parse::<i128>().map_err(|_| Error::Syntax {
            pos: start,
            msg: "integer too large".into(),
        })
    }

    fn reduce(&self, v: i128) -> i64 {
        v.rem_euclid(self.ring.characteristic_modulus() as i128) as i64
    }

    fn expr(&mut self) -> Result<LaurentPolynomial> {
        let mut acc = LaurentPolynomial::zero(self.ring, self.dim);
        let mut sign = self.sign();
        loop {
            let t = self.term()?;
            acc = if sign > 0 { acc.add(&t)? } else { acc.sub(&t)? };
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

    fn term(&mut self) -> Result<LaurentPolynomial> {
        let mut coeff = self.ring.one();
        let mut exps: Exponent = vec![0; self.dim];
        loop {
            self.factor(&mut coeff, &mut exps)?;
            if !self.eat(b'*') {
                break;
            }
        }
        check_exponent(&exps)?;
        LaurentPolynomial::monomial(self.ring, coeff, exps)
    }

    fn factor(&mut self, coeff: &mut RingElement, exps: &mut Exponent) -> Result<()> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                *coeff = self.ring.mul(coeff, &self.ring.from_int(self.reduce(v)));
                Ok(())
            }
            Some(b'[') => {
                self.pos += 1;
                let c = self.xpoly()?;
                if !self.eat(b']') {
                    return Err(self.error("expected ']'"));
                }
                *coeff = self.ring.mul(coeff, &c);
                Ok(())
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
                let index = name
                    .strip_prefix('z')
                    .and_then(|i| i.parse::<usize>().ok())
                    .filter(|&i| (1..=self.dim).contains(&i))
                    .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
                let mut e: i128 = 1;
                if self.eat(b'^') {
                    let s = self.sign() as i128;
                    e = s * self.integer()?;
                }
                let total = exps[index - 1] as i128 + e;
                if total.abs() >= super::EXPONENT_LIMIT as i128 {
                    return Err(Error::ExponentOverflow);
                }
                exps[index - 1] = total as i64;
                Ok(())
            }
            Some(_) => Err(self.error("expected a coefficient or variable")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn xpoly(&mut self) -> Result<RingElement> {
        let mut acc = self.ring.zero();
        let mut sign = self.sign();
        loop {
            let t = self.xterm()?;
            acc = if sign > 0 {
                self.ring.add(&acc, &t)
            } else {
                self.ring.sub(&acc, &t)
            };
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

    fn xterm(&mut self) -> Result<RingElement> {
        let mut c = self.ring.one();
        let mut has_int = false;
        if matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
            let v = self.integer()?;
            c = self.ring.from_int(self.reduce(v));
            has_int = true;
        }
        let star = has_int && self.eat(b'*');
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                if matches!(self.s.get(self.pos), Some(ch) if ch.is_ascii_alphanumeric()) {
                    return Err(self.error("unknown symbol in coefficient"));
                }
                let mut e: u64 = 1;
                if self.eat(b'^') {
                    let v = self.integer()?;
                    e = u64::try_from(v).map_err(|_| self.error("exponent too large"))?;
                }
                let xe = self.ring.pow(&self.ring.gen_x(), e);
                Ok(self.ring.mul(&c, &xe))
            }
            Some(ch) if ch.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
                Err(Error::UnknownVariable(name.to_string()))
            }
            _ if has_int && !star => Ok(c),
            _ => Err(self.error("expected a coefficient term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zq(p: u64, n: u32) -> Arc<RingDescriptor> {
        Arc::new(RingDescriptor::base(p, n).unwrap())
    }

    fn deligne() -> Arc<RingDescriptor> {
        Arc::new(RingDescriptor::local_algebra(2, 2, 1, &[0, 0, 1]).unwrap())
    }

    #[test]
    fn single_variable() {
        let r = zq(2, 3);
        let f = parse_laurent("z1", &r, 1).unwrap();
        assert_eq!(f, LaurentPolynomial::variable(&r, 1, 1));
    }

    #[test]
    fn negative_exponent_plus_constant() {
        let r = zq(3, 2);
        let f = parse_laurent("z1^-1 + 1", &r, 1).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.coeff_extract(&[-1]), r.one());
        assert_eq!(f.coeff_extract(&[0]), r.one());
    }

    #[test]
    fn bracketed_coefficient() {
        let lam = deligne();
        let f = parse_laurent("[1+x]*z1*z2^2", &lam, 2).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.coeff_extract(&[1, 2]).coords, vec![1, 1]);
    }

    #[test]
    fn coefficient_forms() {
        let lam = Arc::new(RingDescriptor::local_algebra(3, 2, 2, &[1, 0, 1]).unwrap());
        let a = parse_laurent("[2 + 3x]", &lam, 1).unwrap();
        let b = parse_laurent("[2+3*x]", &lam, 1).unwrap();
        let c = parse_laurent("[x^2 + 3x + 3]", &lam, 1).unwrap();
        assert_eq!(a, b);
        // x^2 = -1
        assert_eq!(a, c);
        let d = parse_laurent("-[1-x]*z1", &lam, 1).unwrap();
        assert_eq!(d.coeff_extract(&[1]).coords, vec![8, 1]);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let r = zq(2, 2);
        assert_eq!(
            parse_laurent("z1 + ", &r, 1),
            Err(Error::Syntax {
                pos: 5,
                msg: "unexpected end of input".into()
            })
        );
        assert!(matches!(
            parse_laurent("z1 ** z1", &r, 1),
            Err(Error::Syntax { pos: 4, .. })
        ));
        assert!(matches!(
            parse_laurent("[1+x", &r, 1),
            Err(Error::Syntax { pos: 4, .. })
        ));
        assert!(matches!(
            parse_laurent("z1 z1", &r, 1),
            Err(Error::Syntax { pos: 3, .. })
        ));
    }

    #[test]
    fn unknown_variables() {
        let r = zq(2, 2);
        assert_eq!(parse_laurent("z3", &r, 2), Err(Error::UnknownVariable("z3".into())));
        assert_eq!(parse_laurent("y", &r, 1), Err(Error::UnknownVariable("y".into())));
        assert_eq!(parse_laurent("z0", &r, 1), Err(Error::UnknownVariable("z0".into())));
        assert_eq!(parse_laurent("[1+t]", &r, 1), Err(Error::UnknownVariable("t".into())));
    }

    #[test]
    fn repeated_variables_accumulate() {
        let r = zq(5, 1);
        let f = parse_laurent("2*z1*z1^-3*3", &r, 1).unwrap();
        assert_eq!(f.coeff_extract(&[-2]), r.from_int(6));
    }

    #[test]
    fn exponent_limit() {
        let r = zq(5, 1);
        assert_eq!(parse_laurent("z1^2147483648", &r, 1), Err(Error::ExponentOverflow));
        assert!(parse_laurent("z1^2147483647", &r, 1).is_ok());
    }

    fn arb_poly(dim: usize) -> impl Strategy<Value = Vec<(Vec<i64>, i64, i64)>> {
        prop::collection::vec(
            (prop::collection::vec(-4i64..5, dim), 0i64..2, 0i64..2),
            0..6,
        )
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(terms in arb_poly(2)) {
            let lam = deligne();
            let f = LaurentPolynomial::from_terms(
                &lam,
                2,
                terms.into_iter().map(|(e, a, b)| (e, lam.element(&[a, b]).unwrap())),
            ).unwrap();
            let printed = f.to_string();
            prop_assert_eq!(parse_laurent(&printed, &lam, 2).unwrap(), f);
        }

        #[test]
        fn print_parse_round_trip_integers(terms in arb_poly(3)) {
            let r = zq(3, 3);
            let f = LaurentPolynomial::from_terms(
                &r,
                3,
                terms.into_iter().map(|(e, a, b)| (e, r.from_int(a * 13 + b))),
            ).unwrap();
            prop_assert_eq!(parse_laurent(&f.to_string(), &r, 3).unwrap(), f);
        }
    }
}
