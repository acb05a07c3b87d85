//! Integer polynomial expressions in `x`, `y`, `z`.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := base ("^" nat)?
//! base   := "x" | "y" | "z" | int | "(" expr ")" | "-" base
//! ```
//!
//! Note that `-` binds tighter than `^`: `-x^2` is `(-x)^2`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    fn pick<T>(self, x: T, y: T, z: T) -> T {
        match self {
            Var::X => x,
            Var::Y => y,
            Var::Z => z,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyExpr {
    Int(i128),
    Var(Var),
    Neg(Box<PolyExpr>),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Pow(Box<PolyExpr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown variable `{0}` (expected x, y or z)")]
    UnknownVariable(String),
    #[error("negative exponent")]
    NegativeExponent,
    #[error("exponent must be a non-negative integer")]
    BadExponent,
    #[error("integer literal out of range")]
    IntegerOverflow,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the input.
    pub position: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("integer overflow while evaluating polynomial")]
pub struct Overflow;

pub fn parse_poly(text: &str) -> Result<PolyExpr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let expr = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(expr),
        Some(c) => Err(p.error(ParseErrorKind::UnexpectedChar(c as char))),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { kind, position: self.pos }
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

    fn expr(&mut self) -> Result<PolyExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = PolyExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = PolyExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<PolyExpr, ParseError> {
        let mut lhs = self.factor()?;
        while self.eat(b'*') {
            lhs = PolyExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<PolyExpr, ParseError> {
        let base = self.base()?;
        if self.eat(b'^') {
            let exp = self.exponent()?;
            Ok(PolyExpr::Pow(Box::new(base), exp))
        } else {
            Ok(base)
        }
    }

    /// A natural number; `(-k)` and `-k` are recognized only to report them.
    fn exponent(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let parenthesized = self.eat(b'(');
        if self.eat(b'-') {
            return Err(ParseError { kind: ParseErrorKind::NegativeExponent, position: start });
        }
        self.skip_ws();
        let value = match self.integer()? {
            Some(v) => u32::try_from(v)
                .map_err(|_| ParseError { kind: ParseErrorKind::BadExponent, position: start })?,
            None => return Err(self.error(ParseErrorKind::BadExponent)),
        };
        if parenthesized && !self.eat(b')') {
            return Err(self.error(ParseErrorKind::BadExponent));
        }
        Ok(value)
    }

    fn integer(&mut self) -> Result<Option<i128>, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        digits
            .parse::<i128>()
            .map(Some)
            .map_err(|_| ParseError { kind: ParseErrorKind::IntegerOverflow, position: start })
    }

    fn base(&mut self) -> Result<PolyExpr, ParseError> {
        self.skip_ws();
        let Some(c) = self.peek() else {
            return Err(self.error(ParseErrorKind::UnexpectedEnd));
        };
        match c {
            b'(' => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(match self.peek() {
                        Some(c) => self.error(ParseErrorKind::UnexpectedChar(c as char)),
                        None => self.error(ParseErrorKind::UnexpectedEnd),
                    });
                }
                Ok(inner)
            }
            b'-' => {
                self.pos += 1;
                Ok(PolyExpr::Neg(Box::new(self.base()?)))
            }
            b'0'..=b'9' => Ok(PolyExpr::Int(self.integer()?.unwrap())),
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match name {
                    "x" => Ok(PolyExpr::Var(Var::X)),
                    "y" => Ok(PolyExpr::Var(Var::Y)),
                    "z" => Ok(PolyExpr::Var(Var::Z)),
                    _ => Err(ParseError {
                        kind: ParseErrorKind::UnknownVariable(name.to_string()),
                        position: start,
                    }),
                }
            }
            c => Err(self.error(ParseErrorKind::UnexpectedChar(c as char))),
        }
    }
}

fn checked_pow(mut base: i128, mut exp: u32) -> Result<i128, Overflow> {
    let mut acc: i128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc.checked_mul(base).ok_or(Overflow)?;
        }
        exp >>= 1;
        if exp > 0 {
            base = base.checked_mul(base).ok_or(Overflow)?;
        }
    }
    Ok(acc)
}

impl PolyExpr {
    /// Exact value at integer arguments.
    pub fn eval(&self, x: i128, y: i128, z: i128) -> Result<i128, Overflow> {
        use PolyExpr::*;
        Ok(match self {
            Int(v) => *v,
            Var(v) => v.pick(x, y, z),
            Neg(e) => e.eval(x, y, z)?.checked_neg().ok_or(Overflow)?,
            Add(a, b) => a.eval(x, y, z)?.checked_add(b.eval(x, y, z)?).ok_or(Overflow)?,
            Sub(a, b) => a.eval(x, y, z)?.checked_sub(b.eval(x, y, z)?).ok_or(Overflow)?,
            Mul(a, b) => a.eval(x, y, z)?.checked_mul(b.eval(x, y, z)?).ok_or(Overflow)?,
            Pow(b, k) => checked_pow(b.eval(x, y, z)?, *k)?,
        })
    }

    pub fn expand(&self) -> Result<Polynomial, Overflow> {
        use PolyExpr::*;
        match self {
            Int(v) => Ok(Polynomial::constant(*v)),
            Var(v) => Ok(Polynomial::variable(*v)),
            Neg(e) => e.expand()?.scale(-1),
            Add(a, b) => a.expand()?.add(&b.expand()?),
            Sub(a, b) => a.expand()?.add(&b.expand()?.scale(-1)?),
            Mul(a, b) => a.expand()?.mul(&b.expand()?),
            Pow(b, k) => {
                let base = b.expand()?;
                let mut acc = Polynomial::constant(1);
                for _ in 0..*k {
                    acc = acc.mul(&base)?;
                }
                Ok(acc)
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            PolyExpr::Add(..) | PolyExpr::Sub(..) => 1,
            PolyExpr::Mul(..) => 2,
            PolyExpr::Pow(..) => 3,
            PolyExpr::Int(v) if *v < 0 => 0,
            PolyExpr::Int(_) | PolyExpr::Var(_) | PolyExpr::Neg(_) => 4,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.fmt_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            PolyExpr::Int(v) => write!(f, "{v}"),
            PolyExpr::Var(Var::X) => write!(f, "x"),
            PolyExpr::Var(Var::Y) => write!(f, "y"),
            PolyExpr::Var(Var::Z) => write!(f, "z"),
            PolyExpr::Neg(e) => {
                write!(f, "-")?;
                e.fmt_at(f, 4)
            }
            PolyExpr::Add(a, b) => {
                a.fmt_at(f, 1)?;
                write!(f, " + ")?;
                b.fmt_at(f, 2)
            }
            PolyExpr::Sub(a, b) => {
                a.fmt_at(f, 1)?;
                write!(f, " - ")?;
                b.fmt_at(f, 2)
            }
            PolyExpr::Mul(a, b) => {
                a.fmt_at(f, 2)?;
                write!(f, "*")?;
                b.fmt_at(f, 3)
            }
            PolyExpr::Pow(b, k) => {
                b.fmt_at(f, 4)?;
                write!(f, "^{k}")
            }
        }
    }
}

impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

/// Expanded form: exponent triple `[x, y, z]` to nonzero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<[u32; 3], i128>,
}

impl Polynomial {
    pub fn constant(c: i128) -> Self {
        let mut p = Polynomial::default();
        if c != 0 {
            p.terms.insert([0, 0, 0], c);
        }
        p
    }

    pub fn variable(v: Var) -> Self {
        let mut exps = [0; 3];
        exps[v as usize] = 1;
        Polynomial { terms: BTreeMap::from([(exps, 1)]) }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &i128)> {
        self.terms.iter()
    }

    fn scale(&self, k: i128) -> Result<Self, Overflow> {
        let mut out = Polynomial::default();
        for (&e, &c) in &self.terms {
            out.terms.insert(e, c.checked_mul(k).ok_or(Overflow)?);
        }
        Ok(out)
    }

    fn add(&self, other: &Self) -> Result<Self, Overflow> {
        let mut out = self.clone();
        for (&e, &c) in &other.terms {
            let slot = out.terms.entry(e).or_insert(0);
            *slot = slot.checked_add(c).ok_or(Overflow)?;
            if *slot == 0 {
                out.terms.remove(&e);
            }
        }
        Ok(out)
    }

    fn mul(&self, other: &Self) -> Result<Self, Overflow> {
        let mut out = Polynomial::default();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                let c = ca.checked_mul(cb).ok_or(Overflow)?;
                let slot = out.terms.entry(e).or_insert(0);
                *slot = slot.checked_add(c).ok_or(Overflow)?;
            }
        }
        out.terms.retain(|_, c| *c != 0);
        Ok(out)
    }
}

/// Monomials by descending total degree, then descending exponents of
/// `x`, `y`, `z`. The output parses back to the same expansion.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut order: Vec<(&[u32; 3], &i128)> = self.terms.iter().collect();
        order.sort_by(|(a, _), (b, _)| {
            let (da, db) = (a.iter().sum::<u32>(), b.iter().sum::<u32>());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (i, (exps, &coeff)) in order.into_iter().enumerate() {
            let magnitude = coeff.unsigned_abs();
            match (i, coeff < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if magnitude != 1 || exps == &[0, 0, 0] {
                factors.push(magnitude.to_string());
            }
            for (name, &e) in ["x", "y", "z"].iter().zip(exps.iter()) {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(e: &PolyExpr, n: i128) -> Vec<i128> {
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    out.push(e.eval(x, y, z).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn reference_polynomials_parse() {
        for text in [
            "(x-y)*(y-z)*z",
            "(x+y)^3*(y+z)*(y-z)^3*z^5",
            "(x+y)^2*(y-z)^3*z^5",
        ] {
            let e = parse_poly(text).unwrap();
            let again = parse_poly(&e.to_string()).unwrap();
            assert_eq!(table(&e, 5), table(&again, 5), "{text}");
        }
    }

    #[test]
    fn evaluation_is_exact() {
        let e = parse_poly("(x-y)*(y-z)*z").unwrap();
        assert_eq!(e.eval(2, 0, 2), Ok(-8));
        let e = parse_poly("(x+y)^3*(y+z)*(y-z)^3*z^5").unwrap();
        assert_eq!(e.eval(4, 1, 2), Ok(-12000));
    }

    #[test]
    fn unary_minus_binds_tighter_than_power() {
        let e = parse_poly("-x^2").unwrap();
        assert_eq!(e.eval(3, 0, 0), Ok(9));
        let e = parse_poly("-(x^2)").unwrap();
        assert_eq!(e.eval(3, 0, 0), Ok(-9));
        assert_eq!(parse_poly(&e.to_string()).unwrap().eval(3, 0, 0), Ok(-9));
    }

    #[test]
    fn errors() {
        let err = parse_poly("x^(-1)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::NegativeExponent);
        assert_eq!(parse_poly("x^-1").unwrap_err().kind, ParseErrorKind::NegativeExponent);
        let err = parse_poly("x + w").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownVariable("w".into()));
        assert_eq!(err.position, 4);
        assert_eq!(parse_poly("(x + y").unwrap_err().kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(parse_poly("x y").unwrap_err().kind, ParseErrorKind::UnexpectedChar('y'));
        assert_eq!(parse_poly("x^y").unwrap_err().kind, ParseErrorKind::BadExponent);
        assert_eq!(parse_poly("").unwrap_err().kind, ParseErrorKind::UnexpectedEnd);
    }

    #[test]
    fn overflow_is_reported() {
        let e = parse_poly("x^200").unwrap();
        assert_eq!(e.eval(3, 0, 0), Err(Overflow));
        assert_eq!(e.eval(1, 0, 0), Ok(1));
    }

    #[test]
    fn canonical_expansion() {
        let a = parse_poly("(x-y)*(y-z)*z").unwrap().expand().unwrap();
        let b = parse_poly("x*y*z - x*z^2 - y^2*z + y*z^2").unwrap().expand().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "x*y*z - x*z^2 - y^2*z + y*z^2");
        let back = parse_poly(&a.to_string()).unwrap().expand().unwrap();
        assert_eq!(back, a);
        assert_eq!(parse_poly("x - x").unwrap().expand().unwrap().to_string(), "0");
        assert_eq!(parse_poly("-3 + 2*x").unwrap().expand().unwrap().to_string(), "2*x - 3");
    }
}
