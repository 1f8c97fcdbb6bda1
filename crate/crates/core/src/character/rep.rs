//! Trace-free SL(2) representations of 2-bridge knots.

use num_complex::Complex64;
use num_integer::Integer;

use super::cyclotomic::{Cyc, CycField};
use super::CharacterError;
use crate::scalar::{rat, Field, Rational};
use crate::unipoly::UniPoly;

/// Equality test used by the matrix checks: exact for cyclotomic values,
/// within `1e-12` (relative to magnitude) for machine complex numbers.
pub trait Approx {
    fn close(&self, o: &Self) -> bool;
}

impl Approx for Cyc {
    fn close(&self, o: &Self) -> bool {
        self == o
    }
}

impl Approx for Complex64 {
    fn close(&self, o: &Self) -> bool {
        (self - o).norm() <= 1e-12 * (1.0 + self.norm().max(o.norm()))
    }
}

pub fn powi<T: Field>(x: &T, e: i64) -> Option<T> {
    let base = if e < 0 {
        if x.is_zero() {
            return None;
        }
        T::one() / x.clone()
    } else {
        x.clone()
    };
    let mut acc = T::one();
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

#[derive(Clone, Debug, PartialEq)]
pub struct Mat2<T>(pub [[T; 2]; 2]);

impl<T: Field> Mat2<T> {
    pub fn mul(&self, o: &Self) -> Self {
        let e = |i: usize, j: usize| self.0[i][0].clone() * o.0[0][j].clone() + self.0[i][1].clone() * o.0[1][j].clone();
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn det(&self) -> T {
        self.0[0][0].clone() * self.0[1][1].clone() - self.0[0][1].clone() * self.0[1][0].clone()
    }

    pub fn trace(&self) -> T {
        self.0[0][0].clone() + self.0[1][1].clone()
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.is_zero() {
            return None;
        }
        let [[a, b], [c, e]] = self.0.clone();
        let s = |x: T| x / d.clone();
        Some(Mat2([[s(e), s(-b)], [s(-c), s(a)]]))
    }
}

impl<T: Approx> Mat2<T> {
    pub fn close(&self, o: &Self) -> bool {
        (0..2).all(|i| (0..2).all(|j| self.0[i][j].close(&o.0[i][j])))
    }
}

/// `A(a) = 1/2 [[(a + 1/a) i, a - 1/a], [a - 1/a, -(a + 1/a) i]]`.
pub fn amat<T: Field>(a: &T, i: &T) -> Result<Mat2<T>, CharacterError> {
    let inv = powi(a, -1).ok_or_else(|| CharacterError::NonInvertibleParameter(format!("{}", a)))?;
    let half = T::one() / T::from_i64(2);
    let p = (a.clone() + inv.clone()) * half.clone();
    let m = (a.clone() - inv) * half;
    Ok(Mat2([[p.clone() * i.clone(), m.clone()], [m, -(p * i.clone())]]))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BridgePattern {
    k: Vec<i64>,
}

impl BridgePattern {
    pub fn new(k: Vec<i64>) -> Result<Self, CharacterError> {
        if k.is_empty() {
            return Err(CharacterError::EmptyPattern);
        }
        Ok(BridgePattern { k })
    }

    /// `[[3, n, 3]]`.
    pub fn three_n_three(n: i64) -> Self {
        BridgePattern { k: vec![3, n, 3] }
    }

    pub fn ks(&self) -> &[i64] {
        &self.k
    }
}

/// `b_0 = b`, `b_1 = -b^-k1`, `b_i = b_{i-1}^-ki b_{i-2}`.
pub fn bridge_b_sequence<T: Field>(pattern: &BridgePattern, b: &T) -> Result<Vec<T>, CharacterError> {
    let bad = || CharacterError::NonInvertibleParameter(format!("{}", b));
    let mut out = vec![b.clone(), -powi(b, -pattern.k[0]).ok_or_else(bad)?];
    for &k in &pattern.k[1..] {
        let n = out.len();
        let next = powi(&out[n - 1], -k).ok_or_else(bad)? * out[n - 2].clone();
        out.push(next);
    }
    Ok(out)
}

/// `b_i = sign * b^exp`, from the same recursion on signed powers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedPower {
    pub sign: i8,
    pub exp: i64,
}

pub fn signed_powers(pattern: &BridgePattern) -> Vec<SignedPower> {
    let mut out = vec![SignedPower { sign: 1, exp: 1 }, SignedPower { sign: -1, exp: -pattern.k[0] }];
    for &k in &pattern.k[1..] {
        let n = out.len();
        let (p, pp) = (out[n - 1], out[n - 2]);
        let sign = if k.is_odd() { p.sign } else { 1 } * pp.sign;
        out.push(SignedPower { sign, exp: -k * p.exp + pp.exp });
    }
    out
}

/// The signed powers the pattern `[[3, n, 3]]` is stated to produce.
pub fn three_n_three_powers(n: i64) -> Vec<SignedPower> {
    vec![
        SignedPower { sign: 1, exp: 1 },
        SignedPower { sign: -1, exp: -3 },
        SignedPower { sign: -1, exp: 3 * n + 1 },
        SignedPower { sign: 1, exp: -9 * n - 6 },
    ]
}

/// `x^-1 = A(b_3)` for `x = A(1)`, against `(-b)^(9n+6) = 1`. A disagreement
/// between the two verdicts is an error.
pub fn rep_condition<T: Field + Approx>(n: i64, b: &T, i: &T) -> Result<bool, CharacterError> {
    let seq = bridge_b_sequence(&BridgePattern::three_n_three(n), b)?;
    let x = amat(&T::one(), i)?;
    let y3 = amat(&seq[3], i)?;
    let matrix = x.inverse().expect("det A = 1").close(&y3);
    let scalar = powi(&-b.clone(), 9 * n + 6).expect("nonnegative power").close(&T::one());
    if matrix != scalar {
        return Err(CharacterError::VerdictMismatch { n, b: format!("{}", b), matrix, scalar });
    }
    Ok(matrix)
}

/// `lcm(4, 9n + 6)`: large enough for both `sqrt(-1)` and `zeta`.
pub fn field_order(n: i64) -> u32 {
    (9 * n + 6).lcm(&4) as u32
}

/// The field `Q(zeta_M)` with `sqrt(-1)` and `zeta = e^(2 pi i / (9n+6))`.
pub struct RepField {
    pub n: i64,
    pub field: std::sync::Arc<CycField>,
    step: i64,
}

impl RepField {
    pub fn new(n: i64) -> Self {
        let m = field_order(n);
        RepField { n, field: CycField::get(m), step: m as i64 / (9 * n + 6) }
    }

    pub fn i(&self) -> Cyc {
        self.field.i().expect("order divisible by 4")
    }

    pub fn zeta(&self, j: i64) -> Cyc {
        self.field.zeta(self.step * j)
    }

    pub fn phi(&self, j: i64) -> Cyc {
        self.field.phi(self.step * j)
    }

    /// `b = -zeta^k`.
    pub fn b(&self, k: i64) -> Cyc {
        -self.zeta(k)
    }
}

pub fn rep_condition_check(n: i64, k: i64) -> Result<bool, CharacterError> {
    let f = RepField::new(n);
    rep_condition(n, &f.b(k), &f.i())
}

/// Dickson polynomial `T_j` with `T_j(mu + 1/mu) = mu^j + mu^-j`.
pub fn dickson(j: u32) -> UniPoly<Rational> {
    let x = UniPoly::x();
    let (mut a, mut b) = (UniPoly::constant(rat(2)), x.clone());
    if j == 0 {
        return a;
    }
    for _ in 1..j {
        let c = &(&x * &b) - &a;
        a = std::mem::replace(&mut b, c);
    }
    b
}

pub fn eval_at(p: &UniPoly<Rational>, x: &Cyc) -> Cyc {
    p.coeffs().iter().rev().fold(Cyc::rational(rat(0)), |acc, c| acc * x.clone() + Cyc::rational(c.clone()))
}

#[derive(Clone, Debug)]
pub struct TraceValues {
    pub r1: Cyc,
    pub r2: Cyc,
}

/// `(r1, r2) = (-phi_k, -phi_{k(3n+1)})`, cross-checked against
/// `-tr(x y)`, `-tr(x y_2)`, the Dickson relation
/// `phi_{k(3n+1)} = T_{3n+1}(phi_k)` and `tr(x y_i) = -b_i - 1/b_i`.
pub fn trace_values(n: i64, k: i64) -> Result<TraceValues, CharacterError> {
    let f = RepField::new(n);
    let i = f.i();
    let b = f.b(k);
    if !rep_condition(n, &b, &i)? {
        return Err(CharacterError::NotARepresentation { n, k });
    }
    let seq = bridge_b_sequence(&BridgePattern::three_n_three(n), &b)?;
    let x = amat(&Cyc::rational(rat(1)), &i)?;
    let tr = |j: usize| -> Result<Cyc, CharacterError> { Ok(x.mul(&amat(&seq[j], &i)?).trace()) };
    let r1 = -f.phi(k);
    let r2 = -f.phi(k * (3 * n + 1));
    let mismatch = |what: &str| CharacterError::TraceMismatch { n, k, what: what.into() };
    if -tr(0)? != r1 {
        return Err(mismatch("-tr(x y) = -phi_k"));
    }
    if -tr(2)? != r2 {
        return Err(mismatch("-tr(x y_2) = -phi_{k(3n+1)}"));
    }
    for j in [1, 2] {
        let inv = seq[j].inv().expect("b_i is a unit");
        if tr(j)? != -(seq[j].clone() + inv) {
            return Err(mismatch(&format!("tr(x y_{}) = -b_{} - 1/b_{}", j, j, j)));
        }
    }
    if eval_at(&dickson((3 * n + 1) as u32), &f.phi(k)) != f.phi(k * (3 * n + 1)) {
        return Err(mismatch("T_{3n+1}(phi_k) = phi_{k(3n+1)}"));
    }
    Ok(TraceValues { r1, r2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Ring;
    use num_traits::{One, Zero};

    #[test]
    fn amat_is_traceless_unimodular() {
        let f = RepField::new(1);
        let i = f.i();
        for j in 0..15 {
            let a = amat(&f.zeta(j), &i).unwrap();
            assert!(a.trace().is_zero());
            assert!(a.det().is_one());
        }
        let x = amat(&Cyc::one(), &i).unwrap();
        assert_eq!(x, Mat2([[i.clone(), Cyc::zero()], [Cyc::zero(), -i]]));
        assert!(amat(&Cyc::zero(), &f.i()).is_err());
    }

    #[test]
    fn signed_power_oracle_matches_stated_sequence() {
        for n in [1, 3, 5, 7] {
            assert_eq!(signed_powers(&BridgePattern::three_n_three(n)), three_n_three_powers(n));
        }
        let p = BridgePattern::new(vec![1]).unwrap();
        assert_eq!(signed_powers(&p)[1], SignedPower { sign: -1, exp: -1 });
        assert!(BridgePattern::new(vec![]).is_err());
    }

    #[test]
    fn sequence_matches_oracle_numerically() {
        let b = Complex64::new(0.3, 1.1);
        for pattern in [vec![3, 1, 3], vec![2, 5, 1, 4], vec![1]] {
            let p = BridgePattern::new(pattern).unwrap();
            let seq = bridge_b_sequence(&p, &b).unwrap();
            for (x, sp) in seq.iter().zip(signed_powers(&p)) {
                let want = powi(&b, sp.exp).unwrap() * sp.sign as f64;
                assert!(x.close(&want), "{} vs {}", x, want);
            }
        }
    }

    #[test]
    fn rep_condition_examples() {
        assert!(rep_condition_check(1, 0).unwrap());
        assert!(rep_condition_check(1, 2).unwrap());
        let i = Complex64::new(0.0, 1.0);
        assert!(!rep_condition(1, &Complex64::new(1.1, 0.0), &i).unwrap());
        // a primitive 60th root is not of the form -zeta^k
        let f = CycField::get(60);
        assert!(!rep_condition(1, &f.zeta(1), &f.i().unwrap()).unwrap());
    }

    #[test]
    fn trace_values_at_zero() {
        let t = trace_values(1, 0).unwrap();
        assert_eq!(t.r1, Cyc::from_i64(-2));
        assert_eq!(t.r2, Cyc::from_i64(-2));
        let t = trace_values(1, 1).unwrap();
        let (re, _) = t.r1.to_f64();
        assert!((re + 2.0 * (std::f64::consts::TAU / 15.0).cos()).abs() < 1e-13);
    }

    #[test]
    fn dickson_small() {
        let d = dickson(3);
        let c: Vec<Rational> = d.coeffs().to_vec();
        assert_eq!(c, vec![rat(0), rat(-3), rat(0), rat(1)]);
    }

}
