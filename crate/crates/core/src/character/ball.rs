//! Real balls in binary fixed point: the value lies in
//! `[(mid - rad) / 2^prec, (mid + rad) / 2^prec]`.
//!
//! Every operation widens `rad` enough to cover its own rounding, so a
//! final ball always encloses the exact result. Division by a ball that
//! contains zero yields an unbounded ball.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::{Field, Rational, Ring};

#[derive(Clone, PartialEq)]
pub struct Ball {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
    unbounded: bool,
}

/// Extra bits carried through constants and series.
const GUARD: u32 = 32;

fn round_shift(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (s - 1);
    (x + half).div_floor(&(BigInt::one() << s))
}

fn ceil_shift(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    let d = BigInt::one() << s;
    x.div_ceil(&d)
}

fn to_f64_scaled(x: &BigInt, prec: u32) -> f64 {
    let bits = x.bits() as u32;
    if bits > 60 {
        let s = bits - 60;
        let top = (x >> s).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi(s as i32 - prec as i32)
    } else {
        x.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(prec as i32))
    }
}

impl Ball {
    pub fn exact_int(n: i64) -> Self {
        Ball { mid: BigInt::from(n), rad: BigInt::zero(), prec: 0, unbounded: false }
    }

    fn unbounded(prec: u32) -> Self {
        Ball { mid: BigInt::zero(), rad: BigInt::zero(), prec, unbounded: true }
    }

    pub fn from_rational(c: &Rational, prec: u32) -> Self {
        let (q, r) = (c.numer() << prec).div_mod_floor(c.denom());
        let rad = if r.is_zero() { BigInt::zero() } else { BigInt::one() };
        Ball { mid: q, rad, prec, unbounded: false }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_bounded(&self) -> bool {
        !self.unbounded
    }

    fn lift(&self, p: u32) -> Ball {
        debug_assert!(p >= self.prec);
        let s = p - self.prec;
        Ball { mid: &self.mid << s, rad: &self.rad << s, prec: p, unbounded: self.unbounded }
    }

    fn aligned(&self, o: &Ball) -> (Ball, Ball) {
        let p = self.prec.max(o.prec);
        (self.lift(p), o.lift(p))
    }

    /// Drops to `p` bits, widening the radius by the rounding.
    pub fn round_to(&self, p: u32) -> Ball {
        if p >= self.prec {
            return self.lift(p);
        }
        let s = self.prec - p;
        Ball {
            mid: round_shift(&self.mid, s),
            rad: ceil_shift(&self.rad, s) + 1,
            prec: p,
            unbounded: self.unbounded,
        }
    }

    pub fn mid_f64(&self) -> f64 {
        to_f64_scaled(&self.mid, self.prec)
    }

    pub fn rad_f64(&self) -> f64 {
        if self.unbounded {
            f64::INFINITY
        } else {
            to_f64_scaled(&self.rad, self.prec)
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.unbounded || self.mid.abs() <= self.rad
    }

    /// A lower bound for `|x|` (zero when the ball straddles zero).
    pub fn abs_lower(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            to_f64_scaled(&(self.mid.abs() - &self.rad), self.prec)
        }
    }

    /// An upper bound for `|x|`.
    pub fn abs_upper(&self) -> f64 {
        if self.unbounded {
            f64::INFINITY
        } else {
            to_f64_scaled(&(self.mid.abs() + &self.rad), self.prec)
        }
    }

    /// True if the ball contains `x`, allowing an extra slack `tol`.
    pub fn contains_f64(&self, x: f64, tol: f64) -> bool {
        self.unbounded || (self.mid_f64() - x).abs() <= self.rad_f64() + tol
    }

    pub fn overlaps(&self, o: &Ball) -> bool {
        (self.clone() - o.clone()).contains_zero()
    }

    pub fn mul_int(&self, n: i64) -> Ball {
        Ball {
            mid: &self.mid * n,
            rad: &self.rad * n.unsigned_abs(),
            prec: self.prec,
            unbounded: self.unbounded,
        }
    }

    pub fn div_int(&self, n: i64) -> Ball {
        assert!(n != 0, "ball divided by zero integer");
        let (q, r) = self.mid.div_mod_floor(&BigInt::from(n));
        let extra = if r.is_zero() { 0 } else { 1 };
        Ball {
            mid: q,
            rad: self.rad.div_ceil(&BigInt::from(n.unsigned_abs())) + extra,
            prec: self.prec,
            unbounded: self.unbounded,
        }
    }

    /// `arctan(1/x)` by its alternating series, at `w` bits.
    fn atan_inv(x: i64, w: u32) -> Ball {
        let x2 = BigInt::from(x * x);
        // floor(floor(a) / b) = floor(a / b), so `power` is exact up to one floor
        let mut power = (BigInt::one() << w) / x;
        let mut sum = BigInt::zero();
        let mut k: i64 = 0;
        while !power.is_zero() {
            let term = &power / (2 * k + 1);
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            power /= &x2;
            k += 1;
        }
        // each term is off by under two units, the tail by under one
        Ball { mid: sum, rad: BigInt::from(2 * k + 1), prec: w, unbounded: false }
    }

    /// `pi` from `16 atan(1/5) - 4 atan(1/239)`.
    pub fn pi(prec: u32) -> Ball {
        let w = prec + GUARD;
        (Ball::atan_inv(5, w).mul_int(16) - Ball::atan_inv(239, w).mul_int(4)).round_to(prec)
    }

    /// `(cos, sin)` of `2 pi j / m`.
    pub fn cos_sin_2pi(j: i64, m: i64, prec: u32) -> (Ball, Ball) {
        assert!(m > 0);
        let j = j.mod_floor(&m);
        if (4 * j) % m == 0 {
            let (c, s) = [(1, 0), (0, 1), (-1, 0), (0, -1)][(4 * j / m) as usize];
            return (Ball::exact_int(c).lift(prec), Ball::exact_int(s).lift(prec));
        }
        let w = prec + GUARD;
        let theta = Ball::pi(w).mul_int(2 * j).div_int(m);
        let one = Ball::exact_int(1).lift(w);
        let (mut c, mut s) = (Ball::exact_int(0).lift(w), Ball::exact_int(0).lift(w));
        let mut term = one;
        let theta_bound = 7;
        let mut k: i64 = 0;
        loop {
            match k % 4 {
                0 => c = c + term.clone(),
                1 => s = s + term.clone(),
                2 => c = c - term.clone(),
                _ => s = s - term.clone(),
            }
            term = (term * theta.clone()).div_int(k + 1);
            k += 1;
            // once k > 2 theta the remaining terms shrink geometrically by 1/2
            if k > 2 * theta_bound && term.mid.abs() + &term.rad <= BigInt::one() {
                break;
            }
        }
        let tail = (term.mid.abs() + &term.rad) * 2 + 1;
        c.rad += &tail;
        s.rad += &tail;
        (c.round_to(prec), s.round_to(prec))
    }
}

impl Zero for Ball {
    fn zero() -> Self {
        Ball::exact_int(0)
    }
    fn is_zero(&self) -> bool {
        !self.unbounded && self.mid.is_zero() && self.rad.is_zero()
    }
}

impl One for Ball {
    fn one() -> Self {
        Ball::exact_int(1)
    }
}

impl Add for Ball {
    type Output = Ball;
    fn add(self, o: Ball) -> Ball {
        let (a, b) = self.aligned(&o);
        Ball { mid: a.mid + b.mid, rad: a.rad + b.rad, prec: a.prec, unbounded: a.unbounded || b.unbounded }
    }
}

impl Sub for Ball {
    type Output = Ball;
    fn sub(self, o: Ball) -> Ball {
        self + (-o)
    }
}

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball { mid: -self.mid, ..self }
    }
}

impl Mul for Ball {
    type Output = Ball;
    fn mul(self, o: Ball) -> Ball {
        let (a, b) = self.aligned(&o);
        if a.unbounded || b.unbounded {
            return Ball::unbounded(a.prec);
        }
        let p = a.prec;
        let spread = a.mid.abs() * &b.rad + b.mid.abs() * &a.rad + &a.rad * &b.rad;
        let rounding = if p > 0 { 1 } else { 0 };
        Ball { mid: round_shift(&(&a.mid * &b.mid), p), rad: ceil_shift(&spread, p) + rounding, prec: p, unbounded: false }
    }
}

impl Div for Ball {
    type Output = Ball;
    fn div(self, o: Ball) -> Ball {
        let (a, b) = self.aligned(&o);
        if a.unbounded || b.contains_zero() {
            return Ball::unbounded(a.prec);
        }
        let p = a.prec;
        let bm = b.mid.abs();
        let mid = round_shift(&((&a.mid << (p + 1)) / &b.mid), 1);
        // |x/y - am/bm| <= (ar |bm| + |am| br) / (|bm| (|bm| - br))
        let num = (&a.rad * &bm + a.mid.abs() * &b.rad) << p;
        let den = &bm * (&bm - &b.rad);
        Ball { mid, rad: num.div_ceil(&den) + 1, prec: p, unbounded: false }
    }
}

impl Ring for Ball {
    fn from_i64(n: i64) -> Self {
        Ball::exact_int(n)
    }
}

impl Field for Ball {
    fn pivot_magnitude(&self) -> Option<f64> {
        Some(self.abs_lower())
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.unbounded {
            write!(f, "[unbounded]")
        } else {
            write!(f, "{:e} +/- {:e}", self.mid_f64(), self.rad_f64())
        }
    }
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "Ball({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn pi_encloses_the_double() {
        let p = Ball::pi(128);
        assert!(p.contains_f64(std::f64::consts::PI, 1e-15));
        assert!(p.rad_f64() < 1e-35);
    }

    #[test]
    fn cos_sin_match_std() {
        for (j, m) in [(1, 15), (7, 15), (2, 33), (31, 60), (-4, 9)] {
            let (c, s) = Ball::cos_sin_2pi(j, m, 128);
            let a = std::f64::consts::TAU * j as f64 / m as f64;
            assert!(c.contains_f64(a.cos(), 1e-14), "{} {} {}", j, m, c);
            assert!(s.contains_f64(a.sin(), 1e-14));
            assert!(c.rad_f64() < 1e-30);
        }
    }

    #[test]
    fn pythagoras_holds_within_radius() {
        let (c, s) = Ball::cos_sin_2pi(3, 17, 160);
        let one = c.clone() * c + s.clone() * s - Ball::one();
        assert!(one.contains_zero());
        assert!(one.rad_f64() < 1e-40);
    }

    #[test]
    fn division_and_rationals() {
        let third = Ball::from_rational(&ratio(1, 3), 128);
        let x = Ball::one().lift(128) / Ball::exact_int(3);
        assert!(third.overlaps(&x));
        assert!((x.clone() * Ball::exact_int(3) - Ball::one()).contains_zero());
        assert!(!(Ball::one() / Ball::zero()).is_bounded());
    }
}
