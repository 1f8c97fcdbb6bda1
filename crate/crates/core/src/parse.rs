//! Text syntax for polynomials and formal elements.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := power (('*' power) | ('/' INT))*
//! power   := atom ['^' ['-'] INT]
//! atom    := INT | IDENT | IDENT '(' args ')' | '(' expr ')'
//! args    := ['-'] INT (',' ['-'] INT)* [',' IDENT]
//! ```
//!
//! Identifiers are the ring variables, `q`, `qh` (= q^{1/2}), `qb` (= q^{-1}),
//! the family calls `gamma`, `eta`, `c`, `lam`, `T`, and whatever symbols the
//! caller's resolver accepts.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::families;
use crate::mpoly::Var;
use crate::scalar::Rational;
use crate::{MPoly, QScalar};

/// A value the parser can build: anything closed under ring operations
/// with central polynomial scalars.
pub trait ExprValue: Clone {
    fn from_poly(p: MPoly) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// The scalar value, if this is a pure polynomial.
    fn as_poly(&self) -> Option<MPoly>;
}

impl ExprValue for MPoly {
    fn from_poly(p: MPoly) -> Self {
        p
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn as_poly(&self) -> Option<MPoly> {
        Some(self.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
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
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Int(s.parse().unwrap()), line: l0, col: c0 });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: l0, col: c0 });
            continue;
        }
        if "+-*/^(),".contains(c) {
            out.push(Token { tok: Tok::Sym(c), line: l0, col: c0 });
            i += 1;
            col += 1;
            continue;
        }
        return Err(AlgebraError::Parse { line, col, msg: format!("unexpected character `{}`", c) });
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser<'a, V> {
    toks: Vec<Token>,
    pos: usize,
    resolve: &'a dyn Fn(&str) -> Option<V>,
}

impl<'a, V: ExprValue> Parser<'a, V> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(AlgebraError::Parse { line: t.line, col: t.col, msg: msg.into() })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{}`", c))
        }
    }

    fn expr(&mut self) -> Result<V> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<V> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                let d = self.int()?;
                if d.is_zero() {
                    return self.err("division by zero");
                }
                let inv = Rational::new(BigInt::from(1), d);
                acc = acc.mul(&V::from_poly(MPoly::constant(QScalar::constant(inv))));
            } else {
                return Ok(acc);
            }
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.err("expected integer"),
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        let n = self.int()?;
        let v: i64 = i64::try_from(n).or_else(|_| self.err("integer too large"))?;
        Ok(if neg { -v } else { v })
    }

    fn power(&mut self) -> Result<V> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.signed_int()?;
        if e >= 0 {
            let mut acc = V::from_poly(MPoly::one());
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        let inv = base.as_poly().and_then(|p| p.inverse());
        match inv {
            Some(p) => Ok(V::from_poly(p.pow((-e) as u32))),
            None => self.err("negative exponent of a non-invertible value"),
        }
    }

    fn atom(&mut self) -> Result<V> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(V::from_poly(MPoly::constant(QScalar::constant(Rational::from_integer(n)))))
            }
            Tok::Sym('(') => {
                self.bump();
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::Sym('(') && is_family(&name) {
                    self.bump();
                    let p = self.family_call(&name)?;
                    return Ok(V::from_poly(p));
                }
                self.ident(&name)
            }
            Tok::End => self.err("unexpected end of input"),
            t => self.err(format!("unexpected token {:?}", t)),
        }
    }

    fn ident(&mut self, name: &str) -> Result<V> {
        let scalar = match name {
            "q" => Some(QScalar::q()),
            "qh" => Some(QScalar::qh()),
            "qb" => Some(QScalar::qb()),
            _ => None,
        };
        if let Some(s) = scalar {
            return Ok(V::from_poly(MPoly::constant(s)));
        }
        if let Some(v) = Var::from_name(name) {
            return Ok(V::from_poly(MPoly::var(v)));
        }
        if let Some(v) = (self.resolve)(name) {
            return Ok(v);
        }
        // step back so the error points at the identifier
        self.pos -= 1;
        self.err(format!("unknown symbol `{}`", name))
    }

    fn family_call(&mut self, name: &str) -> Result<MPoly> {
        let mut ints = vec![self.signed_int()?];
        let mut var = Var::R;
        while self.eat(',') {
            if let Tok::Ident(v) = self.peek().clone() {
                match Var::from_name(&v) {
                    Some(x) if x != Var::T && !x.invertible() => var = x,
                    _ => return self.err(format!("`{}` is not a trace variable", v)),
                }
                self.bump();
                break;
            }
            ints.push(self.signed_int()?);
        }
        self.expect(')')?;
        let want = if matches!(name, "gamma" | "T") { 1 } else { 2 };
        if ints.len() != want {
            return self.err(format!("`{}` takes {} integer argument(s)", name, want));
        }
        let k = ints[0];
        let n = ints.get(1).copied().unwrap_or(0);
        if want == 2 && n < 0 {
            return self.err("second argument must be nonnegative");
        }
        let t = families::FamilyTable::global();
        Ok(match name {
            "gamma" => t.gamma(k, var),
            "eta" => t.eta(k, n as u32, var),
            "c" => t.c(k, n as u32, var)?,
            "lam" => t.lambda(k, n as u32, var)?,
            "T" => t.dickson(k, var),
            _ => unreachable!(),
        })
    }
}

fn is_family(name: &str) -> bool {
    matches!(name, "gamma" | "eta" | "c" | "lam" | "T")
}

/// Parses with a caller-supplied resolver for extra symbols.
pub fn parse_with<V: ExprValue>(src: &str, resolve: &dyn Fn(&str) -> Option<V>) -> Result<V> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, resolve };
    let v = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("trailing input");
    }
    Ok(v)
}

/// Parses a polynomial expression.
pub fn parse_poly(src: &str) -> Result<MPoly> {
    parse_with(src, &|_| None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn basic_arithmetic() {
        let p = parse_poly("(r - q)*(r + q)").unwrap();
        let r = MPoly::var(Var::R);
        let q = MPoly::constant(QScalar::q());
        assert_eq!(p, &r.pow(2) - &q.pow(2));
    }

    #[test]
    fn half_powers_and_inverse_vars() {
        assert_eq!(parse_poly("qh^2").unwrap(), parse_poly("q").unwrap());
        assert_eq!(parse_poly("q*qb").unwrap(), MPoly::one());
        assert_eq!(parse_poly("K^-2*K^2").unwrap(), MPoly::one());
        assert!(parse_poly("r^-1").is_err());
    }

    #[test]
    fn unary_minus_and_rationals() {
        let p = parse_poly("-3/4*t + 1").unwrap();
        let want = &MPoly::var(Var::T).scale(&QScalar::constant(ratio(-3, 4))) + &MPoly::one();
        assert_eq!(p, want);
    }

    #[test]
    fn family_calls() {
        assert_eq!(parse_poly("gamma(3)").unwrap(), parse_poly("r^2 - 1").unwrap());
        assert_eq!(parse_poly("gamma(-2, r2)").unwrap(), parse_poly("-r2").unwrap());
        assert_eq!(parse_poly("c(2,0)").unwrap(), parse_poly("q^2*r + q").unwrap());
        assert_eq!(parse_poly("T(2, r1)").unwrap(), parse_poly("r1^2 - 2").unwrap());
    }

    #[test]
    fn error_positions() {
        match parse_poly("r +\n  * t") {
            Err(AlgebraError::Parse { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{:?}", other),
        }
        assert!(matches!(parse_poly("foo"), Err(AlgebraError::Parse { col: 1, .. })));
        assert!(parse_poly("gamma(1,2)").is_err());
        assert!(parse_poly("(r").is_err());
    }

    #[test]
    fn print_parse_roundtrip_simple() {
        for s in ["0", "1", "-r2*r3 + qh^3*K^-1", "(q^2 - 1)*t^2*r + qb", "(1/2)*mu"] {
            let p = parse_poly(s).unwrap();
            assert_eq!(parse_poly(&p.to_string()).unwrap(), p, "{}", s);
        }
    }
}
