//! Classes of varieties under the virtual Poincaré specialization.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::laurent::{forward_owned_binops, LaurentPoly};

/// Image of a Grothendieck-ring class in `Z[u, u^-1]`.
///
/// A smooth proper `Y` maps to `sum (-1)^i dim H^i(Y) u^i`; the Lefschetz
/// class `L` maps to `u^2`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MotClass(LaurentPoly);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimensionError {
    #[error("dimension undefined for the zero class")]
    Zero,
    #[error("not an effective-variety class: {0}")]
    NotEffective(String),
}

impl MotClass {
    pub fn zero() -> Self {
        Self(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self(LaurentPoly::one())
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self(LaurentPoly::constant(n))
    }

    /// `u`.
    pub fn u() -> Self {
        Self(LaurentPoly::x())
    }

    /// `L = u^2`.
    pub fn lefschetz() -> Self {
        Self(LaurentPoly::monomial(1, 2))
    }

    /// `L^k = u^{2k}`.
    pub fn lefschetz_pow(k: i64) -> Self {
        Self(LaurentPoly::monomial(1, 2 * k))
    }

    /// `L - 1`, the class of `G_m`.
    pub fn gm() -> Self {
        Self(LaurentPoly::from_terms([(2, 1), (0, -1)]))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self(p)
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.0
    }

    pub fn into_poly(self) -> LaurentPoly {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn pow(&self, n: u32) -> Self {
        Self(self.0.pow(n))
    }

    /// Multiplies by `u^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self(self.0.shift(k))
    }

    /// Topological Euler characteristic: the value at `u = 1`.
    pub fn euler_char(&self) -> BigInt {
        self.0.eval_one()
    }

    /// `deg / 2` for an effective-variety class.
    pub fn virtual_dim(&self) -> Result<i64, DimensionError> {
        let deg = self.0.degree().ok_or(DimensionError::Zero)?;
        let lead = self.0.leading_coeff().ok_or(DimensionError::Zero)?;
        if deg < 0 || deg % 2 != 0 || !lead.is_positive() {
            return Err(DimensionError::NotEffective(self.to_string()));
        }
        Ok(deg / 2)
    }

    pub fn is_effective_of_dim(&self, n: i64) -> bool {
        self.virtual_dim() == Ok(n)
    }

    /// Canonical rendering in `u`; `L` is never emitted.
    pub fn render(&self) -> String {
        self.0.render("u")
    }
}

impl fmt::Display for MotClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for MotClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.render())
    }
}

impl From<i64> for MotClass {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}

impl From<LaurentPoly> for MotClass {
    fn from(p: LaurentPoly) -> Self {
        Self(p)
    }
}

impl Add<&MotClass> for &MotClass {
    type Output = MotClass;
    fn add(self, rhs: &MotClass) -> MotClass {
        MotClass(&self.0 + &rhs.0)
    }
}

impl Sub<&MotClass> for &MotClass {
    type Output = MotClass;
    fn sub(self, rhs: &MotClass) -> MotClass {
        MotClass(&self.0 - &rhs.0)
    }
}

impl Mul<&MotClass> for &MotClass {
    type Output = MotClass;
    fn mul(self, rhs: &MotClass) -> MotClass {
        MotClass(&self.0 * &rhs.0)
    }
}

forward_owned_binops!(MotClass; Add add, Sub sub, Mul mul);

impl AddAssign<&MotClass> for MotClass {
    fn add_assign(&mut self, rhs: &MotClass) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&MotClass> for MotClass {
    fn sub_assign(&mut self, rhs: &MotClass) {
        self.0 -= &rhs.0;
    }
}

impl Neg for &MotClass {
    type Output = MotClass;
    fn neg(self) -> MotClass {
        MotClass(-&self.0)
    }
}

impl Neg for MotClass {
    type Output = MotClass;
    fn neg(self) -> MotClass {
        -&self
    }
}

impl Serialize for MotClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for MotClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_class(&text).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Class-expression grammar
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*')? unary)*
//   unary  := ('+' | '-') unary | power
//   power  := atom ('^' exponent)?
//   atom   := integer | 'u' | 'L' | binding | '(' expr ')'
//   exponent := '-'? integer | '(' '-'? integer ')'
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character '{0}'")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("non-integer coefficient")]
    NonInteger,
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),
    #[error("negative power of a non-monomial")]
    NegativePower,
    #[error("exponent out of range")]
    ExponentRange,
}

/// Syntax error at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {pos}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

/// Parses a class expression in `u` and `L` (`L` expands to `u^2`).
pub fn parse_class(text: &str) -> Result<MotClass, ParseError> {
    parse_class_with(text, &BTreeMap::new())
}

/// Like [`parse_class`], with extra integer-valued symbols (e.g. `n`).
pub fn parse_class_with(
    text: &str,
    bindings: &BTreeMap<String, BigInt>,
) -> Result<MotClass, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        bindings,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err_here());
    }
    Ok(MotClass(out))
}

impl FromStr for MotClass {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_class(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    bindings: &'a BTreeMap<String, BigInt>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, pos: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { pos, kind }
    }

    fn err_here(&self) -> ParseError {
        match self.src.get(self.pos) {
            None => self.err(self.pos, ParseErrorKind::UnexpectedEnd),
            Some(b'/') | Some(b'.') => self.err(self.pos, ParseErrorKind::NonInteger),
            Some(&c) => self.err(self.pos, ParseErrorKind::UnexpectedChar(c as char)),
        }
    }

    fn expr(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc += self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc -= self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc *= &self.unary()?;
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() => {
                    acc *= &self.unary()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<LaurentPoly, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<LaurentPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.pos;
        let exp = self.exponent()?;
        base.powi(exp).ok_or_else(|| {
            if exp < 0 {
                self.err(at, ParseErrorKind::NegativePower)
            } else {
                self.err(at, ParseErrorKind::ExponentRange)
            }
        })
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let paren = self.peek() == Some(b'(');
        if paren {
            self.pos += 1;
        }
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        self.skip_ws();
        let at = self.pos;
        let n = self.integer()?.ok_or_else(|| self.err(at, ParseErrorKind::Expected("integer exponent")))?;
        let n = n
            .to_i64()
            .filter(|v| v.unsigned_abs() <= 1 << 20)
            .ok_or_else(|| self.err(at, ParseErrorKind::ExponentRange))?;
        if paren {
            if self.peek() != Some(b')') {
                return Err(self.err(self.pos, ParseErrorKind::Expected("')'")));
            }
            self.pos += 1;
        }
        Ok(if neg { -n } else { n })
    }

    fn integer(&mut self) -> Result<Option<BigInt>, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Ok(None);
        }
        if matches!(self.src.get(self.pos), Some(b'.') | Some(b'/')) {
            return Err(self.err(self.pos, ParseErrorKind::NonInteger));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(Some(digits.parse().expect("decimal digits")))
    }

    fn atom(&mut self) -> Result<LaurentPoly, ParseError> {
        let Some(c) = self.peek() else {
            return Err(self.err(self.pos, ParseErrorKind::UnexpectedEnd));
        };
        if c.is_ascii_digit() {
            let n = self.integer()?.expect("digit present");
            return Ok(LaurentPoly::constant(n));
        }
        if c == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            if self.peek() != Some(b')') {
                return Err(self.err(self.pos, ParseErrorKind::Expected("')'")));
            }
            self.pos += 1;
            return Ok(inner);
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = self.pos;
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii ident");
            return match name {
                "u" => Ok(LaurentPoly::x()),
                "L" => Ok(LaurentPoly::monomial(1, 2)),
                other => match self.bindings.get(other) {
                    Some(v) => Ok(LaurentPoly::constant(v.clone())),
                    None => Err(self.err(start, ParseErrorKind::UnknownSymbol(other.to_string()))),
                },
            };
        }
        Err(self.err_here())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(terms: &[(i64, i64)]) -> MotClass {
        MotClass::from_poly(LaurentPoly::from_terms(terms.iter().copied()))
    }

    #[test]
    fn parses_lefschetz_expressions() {
        assert_eq!(parse_class("L-1").unwrap(), class(&[(2, 1), (0, -1)]));
        assert_eq!(parse_class("(L+1)").unwrap(), class(&[(2, 1), (0, 1)]));
        assert_eq!(parse_class("1-2*u+u^2").unwrap(), class(&[(0, 1), (1, -2), (2, 1)]));
        assert_eq!(parse_class("L^-1").unwrap(), class(&[(-2, 1)]));
        assert_eq!(parse_class("u^(-3)").unwrap(), class(&[(-3, 1)]));
        assert_eq!(parse_class("22u^2 + (L-1)^2").unwrap(), class(&[(4, 1), (2, 20), (0, 1)]));
        assert_eq!(parse_class("-u^2").unwrap(), class(&[(2, -1)]));
    }

    #[test]
    fn bindings() {
        let mut b = BTreeMap::new();
        b.insert("n".to_string(), BigInt::from(5));
        assert_eq!(parse_class_with("n*(L-1)", &b).unwrap(), class(&[(2, 5), (0, -5)]));
        let e = parse_class("n*(L-1)").unwrap_err();
        assert_eq!(e.pos, 0);
        assert!(matches!(e.kind, ParseErrorKind::UnknownSymbol(_)));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_class("1/2*u").unwrap_err();
        assert_eq!(e, ParseError { pos: 1, kind: ParseErrorKind::NonInteger });
        let e = parse_class("1.5").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NonInteger);
        let e = parse_class("(u+1").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse_class("u + ").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedEnd);
        let e = parse_class("(u+1)^-1").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NegativePower);
        assert!(parse_class("u $").is_err());
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(parse_class("L+1").unwrap().euler_char(), BigInt::from(2));
        assert_eq!(MotClass::gm().euler_char(), BigInt::from(0));
        // K3: Betti numbers (1, 0, 22, 0, 1) with signs (-1)^i.
        let betti = [1i64, 0, 22, 0, 1];
        let k3 = MotClass::from_poly(LaurentPoly::from_terms(
            betti.iter().enumerate().map(|(i, b)| (i as i64, if i % 2 == 0 { *b } else { -*b })),
        ));
        assert_eq!(k3, parse_class("1 + 22*u^2 + u^4").unwrap());
        assert_eq!(k3.euler_char(), BigInt::from(24));
    }

    #[test]
    fn virtual_dimension() {
        assert_eq!(MotClass::lefschetz().virtual_dim(), Ok(1));
        assert_eq!(parse_class("u^4 + 22*u^2 + 1").unwrap().virtual_dim(), Ok(2));
        assert!(matches!(parse_class("-u^2").unwrap().virtual_dim(), Err(DimensionError::NotEffective(_))));
        assert_eq!(MotClass::zero().virtual_dim(), Err(DimensionError::Zero));
        assert!(parse_class("u^3").unwrap().virtual_dim().is_err());
    }

    #[test]
    fn render_never_emits_l() {
        let c = parse_class("L^2 - 2*L + 1").unwrap();
        assert_eq!(c.render(), "u^4 - 2*u^2 + 1");
    }
}
