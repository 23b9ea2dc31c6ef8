//! Ring and divisor expressions.
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := int | [int ['*']] factor ('*' factor)*
//! factor := ('x'|'D') '{' int (',' int)* '}' ('^' int)?
//! ```
//!
//! Whitespace is ignored. `x` of a set with at most two elements is zero.

use std::fmt;

use genus0_core::keel::divisor_to_x;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use genus0_core::ring::{Ring, RingElement};
use genus0_core::{GroundSet, Subset};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gen {
    X,
    D,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub gen: Gen,
    pub set: Subset,
    pub exp: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: BigInt,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expression {
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    ground: GroundSet,
}

impl Parser<'_> {
    fn skip(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.text.get(self.pos).copied()
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(format!("expected '{}'", c as char))
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        self.skip();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail("expected an integer");
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits"))
    }

    fn small(&mut self) -> Result<u32, ParseError> {
        let at = self.pos;
        let v = self.int()?;
        u32::try_from(v).map_err(|_| ParseError { pos: at, msg: "number too large".into() })
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        let at = self.pos;
        let gen = match self.peek() {
            Some(b'x') => Gen::X,
            Some(b'D') => Gen::D,
            _ => return self.fail("expected 'x' or 'D'"),
        };
        self.pos += 1;
        self.expect(b'{')?;
        let mut set = Subset::EMPTY;
        loop {
            let here = self.pos;
            let i = self.small()? as usize;
            if i == 0 || i > self.ground.n() {
                return Err(ParseError { pos: here, msg: format!("element {i} is outside 1..={}", self.ground.n()) });
            }
            if set.contains(i) {
                return Err(ParseError { pos: here, msg: format!("element {i} repeated") });
            }
            set = set.with(i);
            if !self.eat(b',') {
                break;
            }
        }
        self.expect(b'}')?;
        let exp = if self.eat(b'^') {
            let here = self.pos;
            let e = self.small()?;
            if e == 0 {
                return Err(ParseError { pos: here, msg: "exponent must be positive".into() });
            }
            e
        } else {
            1
        };
        if gen == Gen::D {
            if set == self.ground.full() {
                return Err(ParseError { pos: at, msg: format!("D{set} is not a boundary divisor") });
            }
            if set.len() < 2 {
                return Err(ParseError { pos: at, msg: format!("D{set} needs at least two elements") });
            }
        }
        Ok(Factor { gen, set, exp })
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut coeff = BigInt::one();
        let mut factors = Vec::new();
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            coeff = self.int()?;
            if self.eat(b'*') {
                factors.push(self.factor()?);
            } else if matches!(self.peek(), Some(b'x' | b'D')) {
                factors.push(self.factor()?);
            } else {
                return Ok(Term { coeff, factors });
            }
        } else {
            factors.push(self.factor()?);
        }
        while self.eat(b'*') {
            factors.push(self.factor()?);
        }
        Ok(Term { coeff, factors })
    }

    fn expr(&mut self) -> Result<Expression, ParseError> {
        let mut terms = Vec::new();
        let mut negative = self.eat(b'-');
        loop {
            let mut t = self.term()?;
            if negative {
                t.coeff = -t.coeff;
            }
            terms.push(t);
            if self.eat(b'+') {
                negative = false;
            } else if self.eat(b'-') {
                negative = true;
            } else {
                break;
            }
        }
        if self.peek().is_some() {
            return self.fail("unexpected input");
        }
        Ok(Expression { terms })
    }
}

pub fn parse_expression(text: &str, ground: GroundSet) -> Result<Expression, ParseError> {
    Parser { text: text.as_bytes(), pos: 0, ground }.expr()
}

impl Expression {
    pub fn has_divisors(&self) -> bool {
        self.terms.iter().flat_map(|t| &t.factors).any(|f| f.gen == Gen::D)
    }

    /// The sum of `x` generators with coefficients, when every term is a
    /// single `x` factor to the first power or a constant zero.
    pub fn as_linear_x(&self) -> Option<RingElement> {
        let mut out = RingElement::zero();
        for t in &self.terms {
            match t.factors.as_slice() {
                [Factor { gen: Gen::X, set, exp: 1 }] => {
                    out.add_scaled(&RingElement::generator(*set), &t.coeff);
                }
                [] if t.coeff.is_zero() => {}
                _ => return None,
            }
        }
        Some(out)
    }

    /// Normal form in `ring`, which must be the full ring on the same ground
    /// set.
    pub fn evaluate(&self, ring: &mut Ring) -> genus0_core::Result<RingElement> {
        let ground = ring.ground();
        let mut total = RingElement::zero();
        for t in &self.terms {
            let mut prod = RingElement::one();
            for f in &t.factors {
                let base = match f.gen {
                    Gen::X => RingElement::generator(f.set),
                    Gen::D => divisor_to_x(ground, f.set)?,
                };
                let p = ring.pow(&base, f.exp)?;
                prod = ring.mul(&prod, &p)?;
            }
            total.add_scaled(&prod, &t.coeff);
        }
        ring.normalize(&total)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.terms.iter().enumerate() {
            match (k, t.coeff.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let c = t.coeff.abs();
            if t.factors.is_empty() {
                write!(f, "{c}")?;
                continue;
            }
            if !c.is_one() {
                write!(f, "{c}*")?;
            }
            for (j, x) in t.factors.iter().enumerate() {
                if j > 0 {
                    f.write_str("*")?;
                }
                let g = if x.gen == Gen::X { 'x' } else { 'D' };
                write!(f, "{g}{}", x.set)?;
                if x.exp > 1 {
                    write!(f, "^{}", x.exp)?;
                }
            }
        }
        Ok(())
    }
}
