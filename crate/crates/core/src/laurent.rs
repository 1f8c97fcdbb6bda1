//! Univariate Laurent polynomials in `q^{1/2}`.
//!
//! Exponents are stored as integer counts of half-powers, so `q` is the
//! exponent `2` and `q^{-1/2}` is `-1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{ExactDiv, Field, Rational, Ring};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Laurent<C> {
    terms: BTreeMap<i64, C>,
}

impl<C: Ring> Laurent<C> {
    pub fn from_terms<I: IntoIterator<Item = (i64, C)>>(iter: I) -> Self {
        let mut out = Self { terms: BTreeMap::new() };
        for (e, c) in iter {
            out.add_term(e, c);
        }
        out
    }

    pub fn constant(c: C) -> Self {
        Self::from_terms([(0, c)])
    }

    /// `c * q^{half/2}`.
    pub fn monomial(half: i64, c: C) -> Self {
        Self::from_terms([(half, c)])
    }

    /// `q^{half/2}`.
    pub fn half_power(half: i64) -> Self {
        Self::monomial(half, C::one())
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Self {
        Self::half_power(2 * k)
    }

    fn add_term(&mut self, e: i64, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                let s = x.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Lowest and highest half-exponent.
    pub fn exponent_range(&self) -> Option<(i64, i64)> {
        let lo = *self.terms.keys().next()?;
        let hi = *self.terms.keys().next_back()?;
        Some((lo, hi))
    }

    /// Coefficient of `q^{half/2}`.
    pub fn coeff(&self, half: i64) -> C {
        self.terms.get(&half).cloned().unwrap_or_else(C::zero)
    }

    /// Single-term elements, i.e. `c * q^{e/2}`.
    pub fn as_monomial(&self) -> Option<(i64, &C)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, x)| (*e, x.clone() * c.clone())))
    }

    pub fn shift(&self, half: i64) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e + half, c.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Maps `q^{1/2} -> q^{-1/2}`.
    pub fn bar(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }
}

impl<C: Field> Laurent<C> {
    /// Evaluates at a value of `q^{1/2}`.
    pub fn eval(&self, qh: &C) -> C {
        let inv = C::one() / qh.clone();
        let mut acc = C::zero();
        for (e, c) in &self.terms {
            let base = if *e >= 0 { qh.clone() } else { inv.clone() };
            let mut p = C::one();
            for _ in 0..e.unsigned_abs() {
                p = p * base.clone();
            }
            acc = acc + c.clone() * p;
        }
        acc
    }

    /// Long division of Laurent polynomials; `None` if the remainder is nonzero.
    fn laurent_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (dlo, dhi) = d.exponent_range()?;
        let (plo, _) = self.exponent_range()?;
        let dlead = d.coeff(dhi);
        let qlo = plo - dlo;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while !rem.is_zero() {
            let (_, rhi) = rem.exponent_range()?;
            let e = rhi - dhi;
            if e < qlo {
                return None;
            }
            let c = rem.coeff(rhi) / dlead.clone();
            let t = Self::monomial(e, c);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }
}

impl<C: Field> ExactDiv for Laurent<C> {
    fn exact_div(&self, d: &Self) -> Option<Self> {
        self.laurent_div(d)
    }

    fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }
}

impl<C: Ring> Zero for Laurent<C> {
    fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Ring> One for Laurent<C> {
    fn one() -> Self {
        Self::constant(C::one())
    }
}

impl<C: Ring> Ring for Laurent<C> {
    fn from_i64(n: i64) -> Self {
        Self::constant(C::from_i64(n))
    }
}

impl<'a, C: Ring> Add<&'a Laurent<C>> for &'a Laurent<C> {
    type Output = Laurent<C>;
    fn add(self, rhs: &'a Laurent<C>) -> Laurent<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a, C: Ring> Sub<&'a Laurent<C>> for &'a Laurent<C> {
    type Output = Laurent<C>;
    fn sub(self, rhs: &'a Laurent<C>) -> Laurent<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<'a, C: Ring> Mul<&'a Laurent<C>> for &'a Laurent<C> {
    type Output = Laurent<C>;
    fn mul(self, rhs: &'a Laurent<C>) -> Laurent<C> {
        let mut out = Laurent::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Ring> Neg for &Laurent<C> {
    type Output = Laurent<C>;
    fn neg(self) -> Laurent<C> {
        Laurent { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl<C: Ring> Neg for Laurent<C> {
    type Output = Laurent<C>;
    fn neg(self) -> Laurent<C> {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Ring> $tr for Laurent<C> {
            type Output = Laurent<C>;
            fn $m(self, rhs: Laurent<C>) -> Laurent<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Ring> fmt::Debug for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Renders a power of `q^{1/2}` in the expression syntax (`q^2`, `qb^3`, `qh^5`).
pub(crate) fn fmt_q_power(half: i64) -> Option<String> {
    match half {
        0 => None,
        2 => Some("q".into()),
        -2 => Some("qb".into()),
        1 => Some("qh".into()),
        e if e % 2 == 0 && e > 0 => Some(format!("q^{}", e / 2)),
        e if e % 2 == 0 => Some(format!("qb^{}", -e / 2)),
        e => Some(format!("qh^{}", e)),
    }
}

/// Splits a printed coefficient into a sign and a body that can be
/// juxtaposed with `*`. Non-integers are parenthesized.
pub(crate) fn coeff_parts(s: &str) -> (bool, String) {
    let plain = |x: &str| !x.is_empty() && x.chars().all(|c| c.is_ascii_digit());
    match s.strip_prefix('-') {
        Some(rest) if plain(rest) => (true, rest.to_string()),
        _ if plain(s) => (false, s.to_string()),
        Some(rest) if !rest.contains(['+', '-', ' ']) => (true, format!("({})", rest)),
        _ => (false, format!("({})", s)),
    }
}

impl<C: Ring> fmt::Display for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let qp = fmt_q_power(*e);
            let (neg, body) = if c.is_one() {
                (false, None)
            } else if (-c.clone()).is_one() {
                (true, None)
            } else {
                let (n, b) = coeff_parts(&c.to_string());
                (n, Some(b))
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            match (body, qp) {
                (Some(b), Some(p)) => write!(f, "{}*{}", b, p)?,
                (Some(b), None) => write!(f, "{}", b)?,
                (None, Some(p)) => write!(f, "{}", p)?,
                (None, None) => write!(f, "1")?,
            }
        }
        Ok(())
    }
}

/// Exact Laurent polynomial in `q^{1/2}` with rational coefficients.
pub type QScalar = Laurent<Rational>;

impl QScalar {
    pub fn q() -> Self {
        Self::q_pow(1)
    }

    pub fn qb() -> Self {
        Self::q_pow(-1)
    }

    pub fn qh() -> Self {
        Self::half_power(1)
    }

    pub fn int(n: i64) -> Self {
        Self::from_i64(n)
    }

    /// `alpha_k = q^k + q^{-k}`.
    pub fn alpha(k: i64) -> Self {
        &Self::q_pow(k) + &Self::q_pow(-k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn half_powers_cancel() {
        let x = &QScalar::qh() * &QScalar::half_power(-1);
        assert_eq!(x, QScalar::one());
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let a = QScalar::q();
        let d = &a - &a;
        assert!(d.is_zero());
        assert_eq!(d.nterms(), 0);
    }

    #[test]
    fn division_exact_and_inexact() {
        // (q^2 - q^-2) / (q - q^-1) = q + q^-1
        let num = &QScalar::q_pow(2) - &QScalar::q_pow(-2);
        let den = &QScalar::q() - &QScalar::qb();
        assert_eq!(num.exact_div(&den), Some(QScalar::alpha(1)));
        assert_eq!(QScalar::one().exact_div(&den), None);
        assert_eq!(num.exact_div(&QScalar::zero()), None);
    }

    #[test]
    fn eval_at_rational_point() {
        // qh = 2: q = 4, alpha = 4 + 1/4
        let a = QScalar::alpha(1);
        assert_eq!(a.eval(&rat(2)), crate::scalar::ratio(17, 4));
    }

    #[test]
    fn display() {
        let x = &(&QScalar::q_pow(2) - &QScalar::int(3)) + &QScalar::half_power(-3);
        assert_eq!(x.to_string(), "q^2 - 3 + qh^-3");
    }
}
