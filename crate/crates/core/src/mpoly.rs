//! Multivariate Laurent-in-some-variables polynomials.
//!
//! The variable alphabet is fixed: `t, r, r1, r2, r3, r4, mu, K`. Only `mu`
//! and `K` may carry negative exponents. Terms are kept in graded
//! lexicographic order with `t < r < r1 < ... < mu < K`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::laurent::coeff_parts;
use crate::scalar::{ExactDiv, Field, Ring};

pub const NVARS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    T,
    R,
    R1,
    R2,
    R3,
    R4,
    Mu,
    K,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::T, Var::R, Var::R1, Var::R2, Var::R3, Var::R4, Var::Mu, Var::K];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::R => "r",
            Var::R1 => "r1",
            Var::R2 => "r2",
            Var::R3 => "r3",
            Var::R4 => "r4",
            Var::Mu => "mu",
            Var::K => "K",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.iter().copied().find(|v| v.name() == s)
    }

    pub fn invertible(self) -> bool {
        matches!(self, Var::Mu | Var::K)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [i32; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(v: Var, e: i32) -> Self {
        let mut m = Self::one();
        m.0[v.index()] = e;
        m
    }

    pub fn exp(&self, v: Var) -> i32 {
        self.0[v.index()]
    }

    pub fn with_exp(mut self, v: Var, e: i32) -> Self {
        self.0[v.index()] = e;
        self
    }

    pub fn total_degree(&self) -> i32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut m = *self;
        for i in 0..NVARS {
            m.0[i] += o.0[i];
        }
        m
    }

    /// `self / o` as an exponent difference; no validity check.
    pub fn div(&self, o: &Self) -> Self {
        let mut m = *self;
        for i in 0..NVARS {
            m.0[i] -= o.0[i];
        }
        m
    }

    /// True when no non-invertible variable has a negative exponent.
    pub fn is_valid(&self) -> bool {
        Var::ALL.iter().all(|v| v.invertible() || self.exp(*v) >= 0)
    }

    /// `o` divides `self` in the polynomial sense.
    pub fn divisible_by(&self, o: &Self) -> bool {
        self.div(o).is_valid()
    }

    /// Swaps the exponents of two variables.
    pub fn swap(&self, a: Var, b: Var) -> Self {
        let mut m = *self;
        m.0.swap(a.index(), b.index());
        m
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.total_degree()
            .cmp(&o.total_degree())
            .then_with(|| self.0.iter().rev().cmp(o.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for v in Var::ALL.iter().rev() {
            let e = self.exp(*v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}^{}", v, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Sparse polynomial with coefficients in `R`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<R> {
    terms: BTreeMap<Monomial, R>,
}

impl<R: Ring> Poly<R> {
    pub fn from_terms<I: IntoIterator<Item = (Monomial, R)>>(iter: I) -> Self {
        let mut p = Self { terms: BTreeMap::new() };
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn constant(c: R) -> Self {
        Self::from_terms([(Monomial::one(), c)])
    }

    pub fn var(v: Var) -> Self {
        Self::from_terms([(Monomial::var(v, 1), R::one())])
    }

    pub fn var_pow(v: Var, e: i32) -> Self {
        assert!(e >= 0 || v.invertible(), "negative power of {}", v);
        Self::from_terms([(Monomial::var(v, e), R::one())])
    }

    pub fn term(m: Monomial, c: R) -> Self {
        Self::from_terms([(m, c)])
    }

    pub fn int(n: i64) -> Self {
        Self::constant(R::from_i64(n))
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: R) {
        debug_assert!(m.is_valid(), "invalid monomial {}", m);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                let s = x.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &R)> {
        self.terms.iter().next_back()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> R {
        self.coeff(&Monomial::one())
    }

    /// Returns the coefficient if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<R> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, x)| (*m, x.clone() * c.clone())))
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &R) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, x)| (m.mul(mono), x.clone() * c.clone())))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn max_exp(&self, v: Var) -> Option<i32> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    pub fn min_exp(&self, v: Var) -> Option<i32> {
        self.terms.keys().map(|m| m.exp(v)).min()
    }

    /// Degree in the given set of variables.
    pub fn degree_in(&self, vars: &[Var]) -> i32 {
        self.terms
            .keys()
            .map(|m| vars.iter().map(|v| m.exp(*v)).sum())
            .max()
            .unwrap_or(i32::MIN)
    }

    pub fn involves(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) != 0)
    }

    /// Variables actually present.
    pub fn vars(&self) -> Vec<Var> {
        Var::ALL.iter().copied().filter(|v| self.involves(*v)).collect()
    }

    /// Splits by the exponent of `v`: `self = sum_e coeff_e * v^e`.
    pub fn collect(&self, v: Var) -> BTreeMap<i32, Self> {
        let mut out: BTreeMap<i32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            out.entry(e).or_insert_with(Self::zero).add_term(m.with_exp(v, 0), c.clone());
        }
        out
    }

    /// Splits by the exponents of a set of variables.
    pub fn collect_many(&self, vars: &[Var]) -> BTreeMap<Monomial, Self> {
        let mut out: BTreeMap<Monomial, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut key = Monomial::one();
            let mut rest = *m;
            for v in vars {
                key = key.with_exp(*v, m.exp(*v));
                rest = rest.with_exp(*v, 0);
            }
            out.entry(key).or_insert_with(Self::zero).add_term(rest, c.clone());
        }
        out
    }

    pub fn map_coeffs<S: Ring, F: Fn(&R) -> S>(&self, f: F) -> Poly<S> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Renames variables by exchanging `a` and `b`.
    pub fn swap_vars(&self, a: Var, b: Var) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.swap(a, b), c.clone())))
    }

    /// Renames `from` to `to`; `to` must be absent.
    pub fn rename(&self, from: Var, to: Var) -> Self {
        debug_assert!(from == to || !self.involves(to));
        self.swap_vars(from, to)
    }

    /// Homomorphic substitution of a polynomial for `v`.
    pub fn substitute(&self, v: Var, value: &Self) -> Result<Self>
    where
        R: ExactDiv,
    {
        let inv = if self.min_exp(v).unwrap_or(0) < 0 {
            Some(value.inverse().ok_or_else(|| AlgebraError::NonInvertibleSubstitution {
                var: v.name().into(),
                value: format!("{:?}", value),
            })?)
        } else {
            None
        };
        let mut out = Self::zero();
        for (e, c) in self.collect(v) {
            let p = if e >= 0 {
                value.pow(e as u32)
            } else {
                inv.as_ref().expect("inverse computed").pow((-e) as u32)
            };
            out = &out + &(&c * &p);
        }
        Ok(out)
    }

    /// Inverse, when the polynomial is a unit (one term, unit coefficient,
    /// only invertible variables).
    pub fn inverse(&self) -> Option<Self>
    where
        R: ExactDiv,
    {
        let (m, c) = self.as_single_term()?;
        if !c.is_unit() {
            return None;
        }
        let minv = Monomial::one().div(m);
        if !minv.is_valid() {
            return None;
        }
        Some(Self::term(minv, R::one().exact_div(c)?))
    }

    pub fn as_single_term(&self) -> Option<(&Monomial, &R)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Exact division. The quotient's exponents are confined to the box
    /// `[min(p) - min(d), max(p) - max(d)]` per variable, which bounds the
    /// loop even though the invertible variables make the order non-well-founded.
    pub fn exact_div(&self, d: &Self) -> Result<Self>
    where
        R: ExactDiv,
    {
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let fail = || AlgebraError::NonExactDivision {
            dividend: format!("{:?}", self),
            divisor: format!("{:?}", d),
        };
        let mut lo = [0i32; NVARS];
        let mut hi = [0i32; NVARS];
        for v in Var::ALL {
            let i = v.index();
            lo[i] = self.min_exp(v).unwrap() - d.min_exp(v).unwrap();
            hi[i] = self.max_exp(v).unwrap() - d.max_exp(v).unwrap();
            if lo[i] > hi[i] {
                return Err(fail());
            }
        }
        let (dm, dc) = d.leading_term().map(|(m, c)| (*m, c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(&dm);
            if !qm.is_valid() || (0..NVARS).any(|i| qm.0[i] < lo[i] || qm.0[i] > hi[i]) {
                return Err(fail());
            }
            let qc = c.exact_div(&dc).ok_or_else(fail)?;
            rem = &rem - &d.mul_monomial(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    /// True if `d` divides `self` exactly.
    pub fn divisible(&self, d: &Self) -> bool
    where
        R: ExactDiv,
    {
        self.exact_div(d).is_ok()
    }
}

impl<F: Field> Poly<F> {
    /// Evaluates every variable; `vals` is indexed by `Var::index`.
    pub fn eval(&self, vals: &[F; NVARS]) -> F {
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut x = c.clone();
            for v in Var::ALL {
                let e = m.exp(v);
                if e == 0 {
                    continue;
                }
                let base = if e > 0 { vals[v.index()].clone() } else { F::one() / vals[v.index()].clone() };
                for _ in 0..e.unsigned_abs() {
                    x = x * base.clone();
                }
            }
            acc = acc + x;
        }
        acc
    }

    /// Evaluates a subset of variables, leaving a polynomial in the rest.
    pub fn eval_partial(&self, vals: &[(Var, F)]) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut x = c.clone();
            let mut rest = *m;
            for (v, val) in vals {
                let e = m.exp(*v);
                rest = rest.with_exp(*v, 0);
                let base = if e > 0 { val.clone() } else { F::one() / val.clone() };
                for _ in 0..e.unsigned_abs() {
                    x = x * base.clone();
                }
            }
            out.add_term(rest, x);
        }
        out
    }
}

impl<R: Ring + ExactDiv> ExactDiv for Poly<R> {
    fn exact_div(&self, d: &Self) -> Option<Self> {
        Poly::exact_div(self, d).ok()
    }

    fn is_unit(&self) -> bool {
        self.inverse().is_some()
    }
}

impl<R: Ring> Default for Poly<R> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<R: Ring> Zero for Poly<R> {
    fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<R: Ring> One for Poly<R> {
    fn one() -> Self {
        Self::constant(R::one())
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn from_i64(n: i64) -> Self {
        Self::int(n)
    }
}

impl<'a, R: Ring> Add<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn add(self, rhs: &'a Poly<R>) -> Poly<R> {
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a, R: Ring> Sub<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn sub(self, rhs: &'a Poly<R>) -> Poly<R> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<'a, R: Ring> Mul<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn mul(self, rhs: &'a Poly<R>) -> Poly<R> {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<R: Ring> Neg for &Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
}

impl<R: Ring> Neg for Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<R: Ring> $tr for Poly<R> {
            type Output = Poly<R>;
            fn $m(self, rhs: Poly<R>) -> Poly<R> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<R: Ring> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
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
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            match (body, m.is_one()) {
                (Some(b), true) => f.write_str(&b)?,
                (Some(b), false) => write!(f, "{}*{}", b, m)?,
                (None, true) => f.write_str("1")?,
                (None, false) => write!(f, "{}", m)?,
            }
        }
        Ok(())
    }
}

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A fraction of two polynomials, kept unreduced.
#[derive(Clone)]
pub struct Frac<R> {
    pub num: Poly<R>,
    pub den: Poly<R>,
}

impl<R: Ring + ExactDiv> Frac<R> {
    pub fn new(num: Poly<R>, den: Poly<R>) -> Result<Self> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(p: Poly<R>) -> Self {
        Self { num: p, den: Poly::one() }
    }

    /// Cross-multiplication equality.
    pub fn equals(&self, o: &Self) -> bool {
        (&self.num * &o.den - &o.num * &self.den).is_zero()
    }

    /// The polynomial value, if the denominator divides the numerator.
    pub fn to_poly(&self) -> Option<Poly<R>> {
        self.num.exact_div(&self.den).ok()
    }

    /// Cancels the denominator when it divides exactly.
    pub fn simplify(self) -> Self {
        match self.to_poly() {
            Some(p) => Self::from_poly(p),
            None => self,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self { num: &self.num + &o.num, den: self.den.clone() };
        }
        Self { num: &self.num * &o.den + &o.num * &self.den, den: &self.den * &o.den }
    }

    pub fn neg(&self) -> Self {
        Self { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self { num: &self.num * &o.num, den: &self.den * &o.den }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.num.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self { num: &self.num * &o.den, den: &self.den * &o.num })
    }

    pub fn pow(&self, n: u32) -> Self {
        Self { num: self.num.pow(n), den: self.den.pow(n) }
    }

    pub fn scale_poly(&self, p: &Poly<R>) -> Self {
        Self { num: &self.num * p, den: self.den.clone() }
    }
}

impl<R: Ring + ExactDiv> Poly<R> {
    /// Substitutes a fraction for `v`.
    pub fn substitute_frac(&self, v: Var, value: &Frac<R>) -> Result<Frac<R>> {
        let mut out = Frac::from_poly(Self::zero());
        for (e, c) in self.collect(v) {
            let p = if e >= 0 {
                value.pow(e as u32)
            } else {
                if value.num.is_zero() {
                    return Err(AlgebraError::NonInvertibleSubstitution {
                        var: v.name().into(),
                        value: "0".into(),
                    });
                }
                Frac { num: value.den.clone(), den: value.num.clone() }.pow((-e) as u32)
            };
            out = out.add(&p.scale_poly(&c));
        }
        Ok(out)
    }
}

impl<R: Ring> fmt::Display for Frac<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl<R: Ring> fmt::Debug for Frac<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{MPoly, QScalar};

    fn r() -> MPoly {
        MPoly::var(Var::R)
    }

    fn alpha() -> MPoly {
        MPoly::constant(QScalar::alpha(1))
    }

    #[test]
    fn order_is_graded_then_k_first() {
        let a = Monomial::var(Var::K, 1);
        let b = Monomial::var(Var::T, 1);
        let c = Monomial::var(Var::T, 2);
        assert!(a > b);
        assert!(c > a);
    }

    #[test]
    fn difference_of_squares() {
        let p = &r().pow(2) - &alpha().pow(2);
        let d = &r() - &alpha();
        assert_eq!(p.exact_div(&d).unwrap(), &r() + &alpha());
    }

    #[test]
    fn inexact_and_zero_division() {
        let d = &r() - &alpha();
        assert!(matches!(r().pow(2).exact_div(&d), Err(AlgebraError::NonExactDivision { .. })));
        assert_eq!(r().exact_div(&MPoly::zero()), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn division_with_inverse_powers() {
        let k = MPoly::var(Var::K);
        let kinv = MPoly::var_pow(Var::K, -1);
        // (K^2 - K^-2) / (K - K^-1) = K + K^-1
        let p = &k.pow(2) - &kinv.pow(2);
        let d = &k - &kinv;
        assert_eq!(p.exact_div(&d).unwrap(), &k + &kinv);
    }

    #[test]
    fn substitute_r_by_mu_form() {
        let mu = MPoly::var(Var::Mu);
        let mui = MPoly::var_pow(Var::Mu, -1);
        let val = &mu + &mui;
        let p = &r() + &MPoly::one();
        assert_eq!(p.substitute(Var::R, &val).unwrap(), &(&mu + &mui) + &MPoly::one());
    }

    #[test]
    fn substitute_k_by_q_power() {
        let ak = &MPoly::var(Var::K) + &MPoly::var_pow(Var::K, -1);
        let got = ak.substitute(Var::K, &MPoly::constant(QScalar::q_pow(3))).unwrap();
        assert_eq!(got, MPoly::constant(QScalar::alpha(3)));
    }

    #[test]
    fn non_invertible_substitution() {
        let p = MPoly::var_pow(Var::K, -1);
        let err = p.substitute(Var::K, &(&MPoly::var(Var::K) + &MPoly::one()));
        assert!(matches!(err, Err(AlgebraError::NonInvertibleSubstitution { .. })));
    }

    #[test]
    fn fraction_equality() {
        let t = MPoly::var(Var::T);
        let d = &r() - &alpha();
        let a = Frac::new(t.clone(), d.clone()).unwrap();
        assert!(a.equals(&a.clone()));
        let b = Frac::new(&r().pow(2) - &alpha().pow(2), d.clone()).unwrap();
        assert!(b.equals(&Frac::from_poly(&r() + &alpha())));
        let c = Frac::new(MPoly::one(), d).unwrap();
        let e = Frac::new(MPoly::one(), &r() + &alpha()).unwrap();
        assert!(!c.equals(&e));
    }
}
