//! Dense univariate polynomials over a field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{Field, Ring};

#[derive(Clone, PartialEq)]
pub struct UniPoly<F> {
    /// Coefficients from degree 0 upwards, no trailing zeros.
    coeffs: Vec<F>,
}

impl<F: Field> UniPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// `x`.
    pub fn x() -> Self {
        Self::new(vec![F::zero(), F::one()])
    }

    /// `c x^d`.
    pub fn monomial(d: usize, c: F) -> Self {
        let mut v = vec![F::zero(); d + 1];
        v[d] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scale(&(F::one() / l.clone())),
            None => self.clone(),
        }
    }

    /// Quotient and remainder.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = rem[i + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for j in 0..=dd {
                let v = rem[i + j].clone() - c.clone() * d.coeffs[j].clone();
                rem[i + j] = v;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s a + t b = g` and `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.lead().cloned() {
            Some(l) => {
                let inv = F::one() / l;
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
            None => (r0, s0, t0),
        }
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Substitutes a polynomial for the variable.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }
}

impl<F: Field> Zero for UniPoly<F> {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<F: Field> One for UniPoly<F> {
    fn one() -> Self {
        Self::constant(F::one())
    }
}

impl<'a, F: Field> Add<&'a UniPoly<F>> for &'a UniPoly<F> {
    type Output = UniPoly<F>;
    fn add(self, o: &'a UniPoly<F>) -> UniPoly<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<'a, F: Field> Sub<&'a UniPoly<F>> for &'a UniPoly<F> {
    type Output = UniPoly<F>;
    fn sub(self, o: &'a UniPoly<F>) -> UniPoly<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<'a, F: Field> Mul<&'a UniPoly<F>> for &'a UniPoly<F> {
    type Output = UniPoly<F>;
    fn mul(self, o: &'a UniPoly<F>) -> UniPoly<F> {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                let x = v[i + j].clone() + a.clone() * b.clone();
                v[i + j] = x;
            }
        }
        UniPoly::new(v)
    }
}

impl<F: Field> Neg for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn neg(self) -> UniPoly<F> {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<F: Field> Neg for UniPoly<F> {
    type Output = UniPoly<F>;
    fn neg(self) -> UniPoly<F> {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for UniPoly<F> {
            type Output = UniPoly<F>;
            fn $m(self, o: UniPoly<F>) -> UniPoly<F> {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<F: Field> Ring for UniPoly<F> {
    fn from_i64(n: i64) -> Self {
        Self::constant(F::from_i64(n))
    }
}

impl<F: Field> fmt::Display for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({})", c),
                1 => format!("({})*x", c),
                _ => format!("({})*x^{}", c, i),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<F: Field> fmt::Debug for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    fn p(v: &[i64]) -> UniPoly<Rational> {
        UniPoly::new(v.iter().map(|x| rat(*x)).collect())
    }

    #[test]
    fn divrem_and_gcd() {
        // (x^2 - 1) = (x - 1)(x + 1)
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[-1, 0, 0, 1])), p(&[-1, 1]));
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = p(&[1, 0, 1]);
        let b = p(&[-1, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(g, UniPoly::one());
        assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    #[test]
    fn generic_over_f64() {
        let a: UniPoly<f64> = UniPoly::new(vec![1.0, 2.0, 1.0]);
        assert_eq!(a.eval(&2.0), 9.0);
        let (q, r) = a.divrem(&UniPoly::new(vec![1.0, 1.0]));
        assert_eq!(q.coeffs(), &[1.0, 1.0]);
        assert!(r.is_zero());
    }

    #[test]
    fn compose() {
        // (x^2)(x + 1) = x^2 + 2x + 1
        assert_eq!(p(&[0, 0, 1]).compose(&p(&[1, 1])), p(&[1, 2, 1]));
    }
}
