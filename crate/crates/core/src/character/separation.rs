//! Degree separation for `f_n = s0 + 2 s2 - s1 T_{3n+1} + s2 T_{3n+4}`.
//!
//! Writing `x = mu + 1/mu`, the three pieces of `f_n` occupy the
//! `mu`-exponent windows `[-d, d]` and `+-[3n+1-d, 3n+4+d]`, which are
//! disjoint once `3n+1 > 2d`. Inside the upper window `f_n` reads
//! `mu^(3n+1) (s2 mu^3 - s1)`, which is never zero for `s2 != 0` because
//! `s1` is symmetric under `mu -> 1/mu` while `mu^3 s2` is not.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::json;

use super::cyclotomic::{Cyc, CycField};
use super::rep::{dickson, eval_at};
use super::CharacterError;
use crate::mpoly::Var;
use crate::report::CheckResult;
use crate::scalar::{rat, Rational};
use crate::unipoly::UniPoly;
use crate::{MPoly, QScalar};

const X: Var = Var::R1;

fn dickson_in_x(j: u32) -> MPoly {
    let d = dickson(j);
    MPoly::from_terms(
        d.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (crate::Monomial::var(X, e as i32), QScalar::constant(c.clone()))),
    )
}

fn check_univariate(s: &MPoly) -> Result<(), CharacterError> {
    let ok = s.terms().all(|(m, _)| m.total_degree() == m.exp(X) && m.exp(X) >= 0);
    if ok {
        Ok(())
    } else {
        Err(CharacterError::NotUnivariate(format!("{}", s)))
    }
}

fn degree(p: &MPoly) -> Option<i32> {
    if p.is_zero() {
        None
    } else {
        p.max_exp(X)
    }
}

fn lead(p: &MPoly) -> QScalar {
    degree(p).map_or_else(QScalar::zero, |d| p.collect(X).remove(&d).unwrap_or_default().constant_term())
}

/// `f_n` for the triple `s = (s0, s1, s2)`.
pub fn f_n(s: &[MPoly; 3], n: i64) -> Result<MPoly, CharacterError> {
    for p in s {
        check_univariate(p)?;
    }
    let big = (3 * n + 1) as u32;
    let even = &s[0] + &s[2].scale(&QScalar::int(2));
    let low = &even - &(&s[1] * &dickson_in_x(big));
    Ok(&low + &(&s[2] * &dickson_in_x(big + 3)))
}

/// The outcome of the separation argument for one triple.
#[derive(Clone, Debug)]
pub struct Separation {
    pub f: MPoly,
    /// `3n + 1 > max deg s_i + 3`.
    pub in_range: bool,
    pub leading: Option<(i32, QScalar)>,
    /// Top terms of two pieces with equal degree that cancel.
    pub cancelled_tops: Vec<(String, String)>,
}

pub fn degree_separation(s: &[MPoly; 3], n: i64) -> Result<Separation, CharacterError> {
    let f = f_n(s, n)?;
    let maxdeg = s.iter().filter_map(degree).max();
    let in_range = maxdeg.is_none_or(|d| 3 * n + 1 > d as i64 + 3);
    let big = (3 * n + 1) as i32;
    let even = &s[0] + &s[2].scale(&QScalar::int(2));
    let pieces = [
        ("s0 + 2 s2", degree(&even), lead(&even)),
        ("-s1 T_{3n+1}", degree(&s[1]).map(|d| d + big), -lead(&s[1])),
        ("s2 T_{3n+4}", degree(&s[2]).map(|d| d + big + 3), lead(&s[2])),
    ];
    let mut cancelled_tops = Vec::new();
    for a in 0..3 {
        for b in a + 1..3 {
            let (na, da, la) = &pieces[a];
            let (nb, db, lb) = &pieces[b];
            if da.is_some() && da == db && (la.clone() + lb.clone()).is_zero() {
                cancelled_tops.push((na.to_string(), nb.to_string()));
            }
        }
    }
    let leading = degree(&f).map(|d| (d, lead(&f)));
    let any_nonzero = s.iter().any(|p| !p.is_zero());
    if in_range && any_nonzero && f.is_zero() {
        return Err(CharacterError::LeadingTermCancelled { pairs: cancelled_tops });
    }
    Ok(Separation { f, in_range, leading, cancelled_tops })
}

/// Splits a polynomial in `x` with coefficients in `Q(q^1/2)` by the power
/// of `q^1/2`.
fn by_q_power(p: &MPoly) -> BTreeMap<i64, UniPoly<Rational>> {
    let mut acc: BTreeMap<i64, BTreeMap<usize, Rational>> = BTreeMap::new();
    for (m, c) in p.terms() {
        for (h, r) in c.terms() {
            let e = acc.entry(h).or_default().entry(m.exp(X) as usize).or_insert_with(|| rat(0));
            *e += r.clone();
        }
    }
    acc.into_iter()
        .map(|(h, cs)| {
            let top = cs.keys().max().copied().unwrap_or(0);
            (h, UniPoly::new((0..=top).map(|i| cs.get(&i).cloned().unwrap_or_else(|| rat(0))).collect()))
        })
        .collect()
}

/// `f_n(phi_k)` against `sum_i s_i(x) r2^i` with `r2 = -phi_{k(3n+1)}`, both
/// at `x = phi_k` and at the trace value `x = r1 = -phi_k`, one `q`-power at
/// a time.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub k: i64,
    pub at_phi: bool,
    pub at_minus_phi: bool,
}

pub fn evaluation_check(s: &[MPoly; 3], n: i64, ks: &[i64]) -> Result<Vec<Evaluation>, CharacterError> {
    let f = f_n(s, n)?;
    let field = CycField::get((9 * n + 6) as u32);
    let fq = by_q_power(&f);
    let sq: Vec<BTreeMap<i64, UniPoly<Rational>>> = s.iter().map(by_q_power).collect();
    let mut halves: Vec<i64> = fq.keys().copied().collect();
    for m in &sq {
        halves.extend(m.keys().copied());
    }
    halves.sort();
    halves.dedup();
    let zero = UniPoly::<Rational>::zero();
    let mut out = Vec::new();
    for &k in ks {
        let phi = field.phi(k);
        let r2 = -field.phi(k * (3 * n + 1));
        let direct = |x: &Cyc, h: i64| -> Cyc {
            (0..3).fold(Cyc::zero(), |acc, i| {
                let si = sq[i].get(&h).unwrap_or(&zero);
                acc + eval_at(si, x) * r2.clone().powi(i as i64).expect("nonnegative power")
            })
        };
        let mut at_phi = true;
        let mut at_minus_phi = true;
        for &h in &halves {
            let lhs = eval_at(fq.get(&h).unwrap_or(&zero), &phi);
            at_phi &= lhs == direct(&phi, h);
            at_minus_phi &= lhs == direct(&-phi.clone(), h);
        }
        out.push(Evaluation { k, at_phi, at_minus_phi });
    }
    Ok(out)
}

/// All three parts of the separation check for one triple: the zero
/// triple gives zero, a nonzero triple in range gives a nonzero `f_n`, and
/// `f_n(phi_k)` agrees with the direct evaluation for `0 <= k <= (9n+5)/2`.
pub fn check_degree_separation(id: &str, s: &[MPoly; 3], n: i64) -> CheckResult {
    let anchor = "f_n(x)=\\sigma_0(x)+2\\sigma_2(x)-\\sigma_1(x)\\theta_{3n+1}(x)+\\sigma_2\\theta_{3n+4}(x)";
    let sigmas: Vec<String> = s.iter().map(|p| p.to_string()).collect();
    let sep = match degree_separation(s, n) {
        Ok(x) => x,
        Err(e) => return CheckResult::fail(id, anchor, json!({"sigma": sigmas, "n": n, "error": e.to_string()})),
    };
    let all_zero = s.iter().all(|p| p.is_zero());
    let zero_ok = !all_zero || sep.f.is_zero();
    let m = (9 * n + 5) / 2;
    let ks: Vec<i64> = (0..=m).collect();
    let evals = match evaluation_check(s, n, &ks) {
        Ok(v) => v,
        Err(e) => return CheckResult::fail(id, anchor, json!({"error": e.to_string()})),
    };
    let eval_ok = evals.iter().all(|e| e.at_phi);
    let sign_free = evals.iter().all(|e| e.at_minus_phi);
    let details = json!({
        "n": n,
        "sigma": sigmas,
        "f_n_zero": sep.f.is_zero(),
        "in_separation_range": sep.in_range,
        "leading_term": sep.leading.as_ref().map(|(d, c)| json!({"degree": d, "coefficient": c.to_string()})),
        "cancelled_top_pairs": sep.cancelled_tops,
        "evaluation": {
            "k_range": [0, m],
            "f_n(phi_k) = sum s_i(phi_k) r2^i": eval_ok,
            "f_n(phi_k) = sum s_i(r1) r2^i at r1 = -phi_k": sign_free,
            "note": "f_n(phi_k) matches the sum with s_i taken at phi_k; at the trace value r1 = -phi_k the triple must first be replaced by s_i(-x)",
        },
    });
    CheckResult::verdict(id, zero_ok && eval_ok, anchor, details)
}

/// The triple as polynomials in `x` from coefficient lists, lowest first.
pub fn triple(s: [&[QScalar]; 3]) -> [MPoly; 3] {
    s.map(|cs| {
        MPoly::from_terms(
            cs.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (crate::Monomial::var(X, e as i32), c.clone())),
        )
    })
}

pub fn one_triple(which: usize) -> [MPoly; 3] {
    let mut s = [MPoly::zero(), MPoly::zero(), MPoly::zero()];
    s[which] = MPoly::one();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn p(src: &str) -> MPoly {
        parse_poly(src).unwrap()
    }

    #[test]
    fn zero_triple() {
        let z = [MPoly::zero(), MPoly::zero(), MPoly::zero()];
        assert!(f_n(&z, 3).unwrap().is_zero());
        assert!(check_degree_separation("t", &z, 1).is_pass());
    }

    #[test]
    fn single_s1_gives_minus_dickson() {
        let f = f_n(&one_triple(1), 5).unwrap();
        assert_eq!(f, -dickson_in_x(16));
        let sep = degree_separation(&one_triple(1), 5).unwrap();
        assert_eq!(sep.leading, Some((16, -QScalar::one())));
    }

    #[test]
    fn single_s0_gives_one() {
        for n in [1, 3, 5] {
            assert_eq!(f_n(&one_triple(0), n).unwrap(), MPoly::one());
        }
    }

    #[test]
    fn cancelling_tops_still_leave_a_term() {
        // s1 = x^3, s2 = 1: both top terms are x^(3n+4)
        let s = [MPoly::zero(), p("r1^3"), MPoly::one()];
        let sep = degree_separation(&s, 5).unwrap();
        assert_eq!(sep.cancelled_tops.len(), 1);
        assert!(!sep.f.is_zero());
    }

    #[test]
    fn rejects_other_variables() {
        let s = [p("r2"), MPoly::zero(), MPoly::zero()];
        assert!(f_n(&s, 1).is_err());
    }

    #[test]
    fn evaluation_agrees() {
        let s = [p("q*r1 + 2"), p("r1^2 - qb"), p("3*r1")];
        let r = check_degree_separation("t", &s, 1);
        assert!(r.is_pass(), "{}", r.details);
        // s1 = x is odd, so the r1 = -phi_k form differs
        let ev = evaluation_check(&[MPoly::zero(), p("r1"), MPoly::zero()], 1, &[1]).unwrap();
        assert!(ev[0].at_phi && !ev[0].at_minus_phi);
    }
}
