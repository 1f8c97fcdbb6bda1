//! Exact arithmetic in `Q(zeta_N) = Q[x] / Phi_N(x)`.
//!
//! An element either lives in a specific field or is a bare rational
//! constant (no field attached), so that `zero()`, `one()` and `from_i64`
//! work without context. Mixing two different fields panics.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Zero};

use super::ball::Ball;
use crate::scalar::{rat, Field, Rational, Ring};
use crate::unipoly::UniPoly;

type QX = UniPoly<Rational>;

/// `Phi_n` as `x^n - 1` divided by `Phi_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(n: u32) -> QX {
    static CACHE: OnceLock<Mutex<HashMap<u32, QX>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    assert!(n > 0, "cyclotomic polynomial of order 0");
    let mut p = &QX::monomial(n as usize, rat(1)) - &QX::one();
    for d in (1..n).filter(|d| n % d == 0) {
        let (q, r) = p.divrem(&cyclotomic_polynomial(d));
        assert!(r.is_zero(), "Phi_{} does not divide the quotient", d);
        p = q;
    }
    cache.lock().unwrap().insert(n, p.clone());
    p
}

#[derive(Debug)]
pub struct CycField {
    order: u32,
    modulus: QX,
}

impl CycField {
    pub fn get(order: u32) -> Arc<CycField> {
        static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CycField>>>> = OnceLock::new();
        let map = FIELDS.get_or_init(Default::default);
        let mut m = map.lock().unwrap();
        m.entry(order)
            .or_insert_with(|| Arc::new(CycField { order, modulus: cyclotomic_polynomial(order) }))
            .clone()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    /// `zeta^j` for any integer `j`.
    pub fn zeta(self: &Arc<Self>, j: i64) -> Cyc {
        let e = j.mod_floor(&(self.order as i64)) as usize;
        Cyc::reduced(Some(self.clone()), QX::monomial(e, rat(1)))
    }

    /// `zeta^j + zeta^-j`.
    pub fn phi(self: &Arc<Self>, j: i64) -> Cyc {
        self.zeta(j) + self.zeta(-j)
    }

    /// `sqrt(-1) = zeta^(N/4)`; needs `4 | N`.
    pub fn i(self: &Arc<Self>) -> Option<Cyc> {
        (self.order % 4 == 0).then(|| self.zeta(self.order as i64 / 4))
    }
}

#[derive(Clone)]
pub struct Cyc {
    field: Option<Arc<CycField>>,
    poly: QX,
}

impl Cyc {
    fn reduced(field: Option<Arc<CycField>>, poly: QX) -> Self {
        let poly = match &field {
            Some(f) if poly.degree() >= f.modulus.degree() => poly.rem(&f.modulus),
            _ => poly,
        };
        Cyc { field, poly }
    }

    pub fn rational(c: Rational) -> Self {
        Cyc { field: None, poly: QX::constant(c) }
    }

    pub fn field(&self) -> Option<&Arc<CycField>> {
        self.field.as_ref()
    }

    /// Coefficients on `1, zeta, zeta^2, ...`.
    pub fn coeffs(&self) -> &[Rational] {
        self.poly.coeffs()
    }

    fn join(&self, o: &Self) -> Option<Arc<CycField>> {
        match (&self.field, &o.field) {
            (Some(a), Some(b)) => {
                assert_eq!(a.order, b.order, "mixing cyclotomic fields");
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.poly.is_zero() {
            return None;
        }
        match &self.field {
            None => Some(Cyc::rational(rat(1) / self.poly.coeff(0))),
            Some(f) if self.poly.coeffs().iter().filter(|c| !c.is_zero()).count() == 1 => {
                // c zeta^j has inverse c^-1 zeta^(N-j)
                let j = self.poly.degree().expect("nonzero");
                let c = rat(1) / self.poly.coeff(j);
                let e = (f.order as usize - j) % f.order as usize;
                Some(Cyc::reduced(Some(f.clone()), QX::monomial(e, c)))
            }
            Some(f) => {
                let (g, s, _) = self.poly.ext_gcd(&f.modulus);
                // Phi_N is irreducible, so any nonzero residue is coprime to it
                debug_assert!(g.degree() == Some(0));
                Some(Cyc::reduced(Some(f.clone()), s))
            }
        }
    }

    pub fn powi(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Cyc::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * b.clone();
            }
            b = b.clone() * b;
            k >>= 1;
        }
        Some(acc)
    }

    /// Complex value as `(re, im)` balls at `prec` bits.
    pub fn to_balls(&self, prec: u32) -> (Ball, Ball) {
        let order = self.field.as_ref().map_or(1, |f| f.order);
        let mut re = Ball::zero();
        let mut im = Ball::zero();
        for (j, c) in self.poly.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = Ball::from_rational(c, prec);
            let (cs, sn) = Ball::cos_sin_2pi(j as i64, order as i64, prec);
            re = re + c.clone() * cs;
            im = im + c * sn;
        }
        (re, im)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let order = self.field.as_ref().map_or(1, |f| f.order) as f64;
        self.poly.coeffs().iter().enumerate().fold((0.0, 0.0), |(re, im), (j, c)| {
            let c = crate::scalar::rat_to_f64(c);
            let a = std::f64::consts::TAU * j as f64 / order;
            (re + c * a.cos(), im + c * a.sin())
        })
    }
}

impl PartialEq for Cyc {
    fn eq(&self, o: &Self) -> bool {
        (self.clone() - o.clone()).poly.is_zero()
    }
}

impl Zero for Cyc {
    fn zero() -> Self {
        Cyc { field: None, poly: QX::zero() }
    }
    fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

impl One for Cyc {
    fn one() -> Self {
        Cyc::rational(rat(1))
    }
}

impl Add for Cyc {
    type Output = Cyc;
    fn add(self, o: Cyc) -> Cyc {
        Cyc { field: self.join(&o), poly: &self.poly + &o.poly }
    }
}

impl Sub for Cyc {
    type Output = Cyc;
    fn sub(self, o: Cyc) -> Cyc {
        Cyc { field: self.join(&o), poly: &self.poly - &o.poly }
    }
}

impl Mul for Cyc {
    type Output = Cyc;
    fn mul(self, o: Cyc) -> Cyc {
        Cyc::reduced(self.join(&o), &self.poly * &o.poly)
    }
}

impl Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc { field: self.field, poly: -self.poly }
    }
}

impl Div for Cyc {
    type Output = Cyc;
    fn div(self, o: Cyc) -> Cyc {
        self * o.inv().expect("division by zero in a cyclotomic field")
    }
}

impl Ring for Cyc {
    fn from_i64(n: i64) -> Self {
        Cyc::rational(rat(n))
    }
}

impl Field for Cyc {}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let terms: Vec<String> = self
            .poly
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| match j {
                0 => format!("{}", c),
                1 => format!("({})*z", c),
                _ => format!("({})*z^{}", c, j),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match &self.field {
            Some(fd) => write!(f, "Cyc[{}]({})", fd.order, self),
            None => write!(f, "Cyc({})", self),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(p: &QX) -> Vec<i64> {
        p.coeffs().iter().map(|c| c.to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(coeffs(&cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(coeffs(&cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(coeffs(&cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(coeffs(&cyclotomic_polynomial(15)), vec![1, -1, 0, 1, -1, 1, 0, -1, 1]);
        assert_eq!(cyclotomic_polynomial(60).degree(), Some(16));
        assert_eq!(cyclotomic_polynomial(132).degree(), Some(40));
    }

    #[test]
    fn zeta_has_exact_order() {
        let f = CycField::get(15);
        assert_eq!(f.zeta(15), Cyc::one());
        assert!(f.zeta(5) != Cyc::one());
        assert!(f.zeta(3) != Cyc::one());
        assert_eq!(f.zeta(7) * f.zeta(-7), Cyc::one());
    }

    #[test]
    fn i_squares_to_minus_one() {
        let i = CycField::get(60).i().unwrap();
        assert_eq!(i.clone() * i, -Cyc::one());
        assert!(CycField::get(15).i().is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let f = CycField::get(15);
        let a = f.zeta(1) + Cyc::from_i64(3) * f.zeta(4) - Cyc::from_i64(2);
        assert_eq!(a.clone() * a.inv().unwrap(), Cyc::one());
        let m = Cyc::from_i64(-3) * f.zeta(4);
        assert_eq!(m.clone() * m.inv().unwrap(), Cyc::one());
        assert!(Cyc::zero().inv().is_none());
    }

    #[test]
    fn float_value_of_phi() {
        let f = CycField::get(15);
        let (re, im) = f.phi(1).to_f64();
        assert!((re - 2.0 * (std::f64::consts::TAU / 15.0).cos()).abs() < 1e-14);
        assert!(im.abs() < 1e-14);
    }
}
