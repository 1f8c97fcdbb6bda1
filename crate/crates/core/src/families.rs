//! The q-deformed Chebyshev-type families in a trace variable `r = mu + mu^-1`.
//!
//! * `gamma_k`: `gamma_{k+1} = r gamma_k - gamma_{k-1}`, `gamma_0 = 0`, `gamma_1 = 1`.
//! * `eta_k^n = sum_j binom(n, j) q^{2(2j-n)+k} gamma_{2j-n+k}`.
//! * `c_k^n = (qb eta_{k+1}^n - q eta_k^n - r^n) / (r - alpha)`, an exact division.
//! * `lambda_k^n = -eta_{k+1}^n + eta_k^n - c_k^n t^2`.
//! * Dickson `T_j` with `T_j(mu + mu^-1) = mu^j + mu^-j`.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde_json::json;

use crate::error::Result;
use crate::mpoly::Var;
use crate::parse::parse_poly;
use crate::report::{CheckResult, Failures};
use crate::scalar::Rational;
use crate::{MPoly, QScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Family {
    Gamma,
    Eta,
    C,
    Lambda,
    Dickson,
}

/// Memo table keyed by family, indices and variable.
#[derive(Default)]
pub struct FamilyTable {
    cache: RwLock<HashMap<(Family, i64, u32, Var), MPoly>>,
}

fn q(k: i64) -> MPoly {
    MPoly::constant(QScalar::q_pow(k))
}

/// `alpha = q + qb`.
pub fn alpha() -> MPoly {
    MPoly::constant(QScalar::alpha(1))
}

/// `alpha_k = K + K^-1`, where `K` stands for `q^k`.
pub fn alpha_k() -> MPoly {
    &MPoly::var(Var::K) + &MPoly::var_pow(Var::K, -1)
}

/// `theta = t^2 - 1`.
pub fn theta() -> MPoly {
    &MPoly::var(Var::T).pow(2) - &MPoly::one()
}

impl FamilyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn global() -> &'static FamilyTable {
        static TABLE: OnceLock<FamilyTable> = OnceLock::new();
        TABLE.get_or_init(FamilyTable::new)
    }

    pub fn len(&self) -> usize {
        self.cache.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn cached(&self, key: (Family, i64, u32, Var), build: impl FnOnce() -> Result<MPoly>) -> Result<MPoly> {
        if let Some(p) = self.cache.read().unwrap().get(&key) {
            return Ok(p.clone());
        }
        // computed outside the lock; a racing insert stores an equal value
        let p = build()?;
        self.cache.write().unwrap().entry(key).or_insert_with(|| p.clone());
        Ok(p)
    }

    pub fn gamma(&self, k: i64, v: Var) -> MPoly {
        self.cached((Family::Gamma, k, 0, v), || Ok(gamma_uncached(k, v))).unwrap()
    }

    pub fn eta(&self, k: i64, n: u32, v: Var) -> MPoly {
        self.cached((Family::Eta, k, n, v), || {
            let mut acc = MPoly::zero();
            for j in 0..=n as i64 {
                let b = binomial(BigInt::from(n), BigInt::from(j));
                let coef = QScalar::monomial(2 * (2 * (2 * j - n as i64) + k), Rational::from_integer(b));
                let g = self.gamma(2 * j - n as i64 + k, v);
                acc = &acc + &g.scale(&coef);
            }
            Ok(acc)
        })
        .unwrap()
    }

    pub fn c(&self, k: i64, n: u32, v: Var) -> Result<MPoly> {
        self.cached((Family::C, k, n, v), || {
            let r = MPoly::var(v);
            let num = &(&(&q(-1) * &self.eta(k + 1, n, v)) - &(&q(1) * &self.eta(k, n, v))) - &r.pow(n);
            num.exact_div(&(&r - &alpha()))
        })
    }

    pub fn lambda(&self, k: i64, n: u32, v: Var) -> Result<MPoly> {
        self.cached((Family::Lambda, k, n, v), || {
            let t2 = MPoly::var(Var::T).pow(2);
            let c = self.c(k, n, v)?;
            Ok(&(&self.eta(k, n, v) - &self.eta(k + 1, n, v)) - &(&c * &t2))
        })
    }

    pub fn dickson(&self, j: i64, v: Var) -> MPoly {
        self.cached((Family::Dickson, j, 0, v), || {
            let j = j.abs();
            let x = MPoly::var(v);
            let (mut a, mut b) = (MPoly::int(2), x.clone());
            if j == 0 {
                return Ok(a);
            }
            for _ in 1..j {
                let c = &(&x * &b) - &a;
                a = b;
                b = c;
            }
            Ok(b)
        })
        .unwrap()
    }
}

fn gamma_uncached(k: i64, v: Var) -> MPoly {
    if k < 0 {
        return -gamma_uncached(-k, v);
    }
    let r = MPoly::var(v);
    let (mut a, mut b) = (MPoly::zero(), MPoly::one());
    if k == 0 {
        return a;
    }
    for _ in 1..k {
        let c = &(&r * &b) - &a;
        a = b;
        b = c;
    }
    b
}

pub fn gamma(k: i64) -> MPoly {
    FamilyTable::global().gamma(k, Var::R)
}

pub fn eta(k: i64, n: u32) -> MPoly {
    FamilyTable::global().eta(k, n, Var::R)
}

/// `c_k^n(r)`. Panics if the defining division is not exact, which would
/// mean the arithmetic is broken.
pub fn c_coef(k: i64, n: u32) -> MPoly {
    try_c_coef(k, n).unwrap_or_else(|e| panic!("c({}, {}) : {}", k, n, e))
}

pub fn try_c_coef(k: i64, n: u32) -> Result<MPoly> {
    FamilyTable::global().c(k, n, Var::R)
}

pub fn lambda_coef(k: i64, n: u32) -> MPoly {
    FamilyTable::global().lambda(k, n, Var::R).unwrap_or_else(|e| panic!("lam({}, {}) : {}", k, n, e))
}

pub fn dickson(j: i64) -> MPoly {
    FamilyTable::global().dickson(j, Var::R)
}

/// The same family member in another trace variable.
pub fn in_var(p: &MPoly, v: Var) -> MPoly {
    p.rename(Var::R, v)
}

/// `eta_k^n` from the closed form `q^k (mu^k l+^n - mu^-k l-^n) / (mu - mu^-1)`
/// with `l+- = q^{+-2} mu + q^{-+2} mu^-1`, as a polynomial in `mu^{+-1}`.
pub fn eta_mu_form(k: i64, n: u32) -> Result<MPoly> {
    let mu = MPoly::var(Var::Mu);
    let mui = MPoly::var_pow(Var::Mu, -1);
    let lp = &(&q(2) * &mu) + &(&q(-2) * &mui);
    let lm = &(&q(-2) * &mu) + &(&q(2) * &mui);
    let muk = MPoly::var_pow(Var::Mu, k as i32);
    let mumk = MPoly::var_pow(Var::Mu, -k as i32);
    let num = &q(k) * &(&(&muk * &lp.pow(n)) - &(&mumk * &lm.pow(n)));
    num.exact_div(&(&mu - &mui))
}

fn mu_sub(p: &MPoly) -> MPoly {
    let val = &MPoly::var(Var::Mu) + &MPoly::var_pow(Var::Mu, -1);
    p.substitute(Var::R, &val).expect("r appears with nonnegative powers")
}

/// The claimed highest-order term of `eta_k^n` in `r`.
pub fn eta_leading_claim(k: i64, n: u32) -> MPoly {
    let n = n as i64;
    let r = |e: i64| MPoly::var_pow(Var::R, e as i32);
    match k {
        k if k > 0 => &q(2 * n + k) * &r(n + k - 1),
        0 if n == 0 => MPoly::zero(),
        0 => &(&q(2 * n) - &q(-2 * n)) * &r(n - 1),
        k => -(&q(-2 * n - k.abs()) * &r(n + k.abs() - 1)),
    }
}

/// The actual highest-`r`-degree term.
pub fn leading_in_r(p: &MPoly) -> MPoly {
    match p.collect(Var::R).into_iter().next_back() {
        Some((e, c)) => &c * &MPoly::var_pow(Var::R, e),
        None => MPoly::zero(),
    }
}

const SMALL_C: [(i64, u32, &str); 6] = [
    (0, 0, "0"),
    (0, 1, "q^2 - 1"),
    (1, 0, "q"),
    (1, 1, "q^3*r + q^2 - 1"),
    (2, 0, "q^2*r + q"),
    (2, 1, "q^4*(r^2 - 1) + q^3*r + q^2"),
];

fn diff_detail(k: i64, n: u32, lhs: &MPoly, rhs: &MPoly) -> serde_json::Value {
    json!({"k": k, "n": n, "difference": (lhs - rhs).to_string()})
}

/// Checks every identity about the families for `|k| <= kmax`, `n <= nmax`.
pub fn verify_family_identities(kmax: i64, nmax: u32) -> Vec<CheckResult> {
    let r = MPoly::var(Var::R);
    let t2 = MPoly::var(Var::T).pow(2);
    let ks = || -kmax..=kmax;
    let mut out = Vec::new();

    let mut check = |id: &str, anchor: &str, f: &mut dyn FnMut(&mut Failures)| {
        let start = std::time::Instant::now();
        let mut fl = Failures::default();
        f(&mut fl);
        out.push(fl.into_result(id, anchor).with_runtime(start.elapsed().as_millis() as u64));
    };

    check("families.eta-small", "η_k^0=q^kγ_k, η_k^1=q^k(q^2γ_{k+1}+q̄^2γ_{k-1})", &mut |fl| {
        for k in ks() {
            let (l, rr) = (eta(k, 0), &q(k) * &gamma(k));
            fl.record(l == rr, || diff_detail(k, 0, &l, &rr));
            let (l, rr) = (eta(k, 1), &q(k) * &(&(&q(2) * &gamma(k + 1)) + &(&q(-2) * &gamma(k - 1))));
            fl.record(l == rr, || diff_detail(k, 1, &l, &rr));
        }
    });
    check("families.eta-times-r", "rη_k^n=q̄η_{k+1}^n+qη_{k-1}^n", &mut |fl| {
        for k in ks() {
            for n in 0..=nmax {
                let l = &r * &eta(k, n);
                let rr = &(&q(-1) * &eta(k + 1, n)) + &(&q(1) * &eta(k - 1, n));
                fl.record(l == rr, || diff_detail(k, n, &l, &rr));
            }
        }
    });
    check("families.eta-raise-n", "η_k^{n+1}=qη_{k+1}^n+q̄η_{k-1}^n", &mut |fl| {
        for k in ks() {
            for n in 0..nmax {
                let l = eta(k, n + 1);
                let rr = &(&q(1) * &eta(k + 1, n)) + &(&q(-1) * &eta(k - 1, n));
                fl.record(l == rr, || diff_detail(k, n, &l, &rr));
            }
        }
    });
    check("families.c-step", "c_k^n=c_{k-1}^n+η_k^n", &mut |fl| {
        for k in ks() {
            for n in 0..=nmax {
                let l = c_coef(k, n);
                let rr = &c_coef(k - 1, n) + &eta(k, n);
                fl.record(l == rr, || diff_detail(k, n, &l, &rr));
            }
        }
    });
    check("families.c-shift", "rc_k^n=q̄c_{k+1}^n+qc_{k-1}^n-r^n", &mut |fl| {
        for k in ks() {
            for n in 0..=nmax {
                let l = &r * &c_coef(k, n);
                let rr = &(&(&q(-1) * &c_coef(k + 1, n)) + &(&q(1) * &c_coef(k - 1, n))) - &r.pow(n);
                fl.record(l == rr, || diff_detail(k, n, &l, &rr));
            }
        }
    });
    check("families.c-raise-n", "c_k^{n+1}=qc_{k+1}^n+q̄c_{k-1}^n-r^n", &mut |fl| {
        for k in ks() {
            for n in 0..nmax {
                let l = c_coef(k, n + 1);
                let rr = &(&(&q(1) * &c_coef(k + 1, n)) + &(&q(-1) * &c_coef(k - 1, n))) - &r.pow(n);
                fl.record(l == rr, || diff_detail(k, n, &l, &rr));
            }
        }
    });
    check("families.lambda-raise-n", "λ_k^{n+1}=qλ_{k+1}^n+q̄λ_{k-1}^n+r^nt^2", &mut |fl| {
        for k in ks() {
            for n in 0..nmax {
                let l = lambda_coef(k, n + 1);
                let rr = &(&(&q(1) * &lambda_coef(k + 1, n)) + &(&q(-1) * &lambda_coef(k - 1, n))) + &(&r.pow(n) * &t2);
                fl.record(l == rr, || diff_detail(k, n, &l, &rr));
            }
        }
    });
    check("families.lambda-2-1", "λ_2^1=q(λ_3^0-r)+1", &mut |fl| {
        let l = lambda_coef(2, 1);
        let rr = &(&q(1) * &(&lambda_coef(3, 0) - &r)) + &MPoly::one();
        fl.record(l == rr, || diff_detail(2, 1, &l, &rr));
    });
    check("families.lambda-2-2", "λ_2^2=qλ_3^1+λ_2^0+rt^2+q̄(t^2-1)", &mut |fl| {
        let l = lambda_coef(2, 2);
        let rr = &(&(&(&q(1) * &lambda_coef(3, 1)) + &lambda_coef(2, 0)) + &(&r * &t2)) + &(&q(-1) * &theta());
        fl.record(l == rr, || diff_detail(2, 2, &l, &rr));
    });
    check("families.lambda-at-t0", "λ_k^n|_{t=0}=-η_{k+1}^n+η_k^n", &mut |fl| {
        for k in ks() {
            for n in 0..=nmax {
                let l = lambda_coef(k, n).collect(Var::T).remove(&0).unwrap_or_default();
                let rr = &eta(k, n) - &eta(k + 1, n);
                fl.record(l == rr, || diff_detail(k, n, &l, &rr));
            }
        }
    });
    let coincide = [
        ("families.c3-from-c2.n0", "c_3^0=q̄c_2^1", 0u32, "qb*c(2,1)"),
        ("families.c3-from-c2.n1", "c_3^1=q̄c_2^2+(q̄^3-q̄)c_2^0", 1, "qb*c(2,2) + (qb^3 - qb)*c(2,0)"),
        ("families.c3-from-c2.n2", "c_3^2=q̄c_2^3+(q̄^5-q̄)c_2^1", 2, "qb*c(2,3) + (qb^5 - qb)*c(2,1)"),
    ];
    for (id, anchor, n, rhs) in coincide {
        check(id, anchor, &mut |fl| {
            let l = c_coef(3, n);
            let rr = parse_poly(rhs).expect("builtin expression");
            fl.record(l == rr, || diff_detail(3, n, &l, &rr));
        });
    }
    check("families.eta-closed-form", "η_k^n=q^k(μ^kλ_+^n-μ^{-k}λ_-^n)/(μ-μ^{-1})", &mut |fl| {
        for k in ks() {
            for n in 0..=nmax {
                match eta_mu_form(k, n) {
                    Ok(m) => {
                        let l = mu_sub(&eta(k, n));
                        fl.record(l == m, || diff_detail(k, n, &l, &m));
                    }
                    Err(e) => fl.record(false, || json!({"k": k, "n": n, "error": e.to_string()})),
                }
            }
        }
    });
    check("families.eta-leading-term", "highest-order term of η_k^n", &mut |fl| {
        for k in ks() {
            for n in 0..=nmax {
                let l = leading_in_r(&eta(k, n));
                let rr = eta_leading_claim(k, n);
                fl.record(l == rr, || json!({"k": k, "n": n, "actual": l.to_string(), "claimed": rr.to_string()}));
            }
        }
    });
    check("families.c-small-values", "values of c_k^n for small k,n", &mut |fl| {
        for (k, n, s) in SMALL_C {
            let l = c_coef(k, n);
            let rr = parse_poly(s).expect("builtin expression");
            fl.record(l == rr, || diff_detail(k, n, &l, &rr));
        }
    });
    check("families.dickson-gamma", "T_j=γ_{j+1}-γ_{j-1}", &mut |fl| {
        for j in -12..=12 {
            let l = dickson(j);
            let rr = &gamma(j + 1) - &gamma(j - 1);
            fl.record(l == rr, || diff_detail(j, 0, &l, &rr));
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(0), MPoly::zero());
        assert_eq!(gamma(1), MPoly::one());
        assert_eq!(gamma(3), parse_poly("r^2 - 1").unwrap());
        assert_eq!(gamma(-2), parse_poly("-r").unwrap());
    }

    #[test]
    fn gamma_is_monic_of_degree_k_minus_1() {
        for k in 1..12 {
            let g = gamma(k);
            assert_eq!(g.max_exp(Var::R), Some(k as i32 - 1));
            assert_eq!(leading_in_r(&g), MPoly::var_pow(Var::R, k as i32 - 1));
            assert_eq!(gamma(-k), -g);
        }
    }

    #[test]
    fn eta_values() {
        assert_eq!(eta(1, 1), parse_poly("q^3*r").unwrap());
        assert_eq!(eta(0, 1), parse_poly("q^2 - qb^2").unwrap());
        assert_eq!(leading_in_r(&eta(0, 3)), parse_poly("(q^6 - qb^6)*r^2").unwrap());
    }

    #[test]
    fn c_values() {
        assert_eq!(c_coef(0, 0), MPoly::zero());
        assert_eq!(c_coef(1, 0), parse_poly("q").unwrap());
        assert_eq!(c_coef(2, 1), parse_poly("q^4*(r^2-1) + q^3*r + q^2").unwrap());
        assert_eq!(c_coef(3, 0), parse_poly("q^3*r^2 + q^2*r + q - q^3").unwrap());
    }

    #[test]
    fn c_numerator_expansion() {
        // qb*eta_3^0 - q*eta_2^0 - 1 = q^2 r^2 - q^3 r - q^2 - 1
        let num = &(&(&q(-1) * &eta(3, 0)) - &(&q(1) * &eta(2, 0))) - &MPoly::one();
        assert_eq!(num, parse_poly("q^2*r^2 - q^3*r - q^2 - 1").unwrap());
    }

    #[test]
    fn lambda_small() {
        assert_eq!(lambda_coef(2, 1), parse_poly("q*(lam(3,0) - r) + 1").unwrap());
        assert_eq!(
            lambda_coef(2, 0),
            parse_poly("-q^3*(r^2 - 1) - q^2*(t^2 - 1)*r - q*t^2").unwrap()
        );
    }

    #[test]
    fn dickson_values() {
        assert_eq!(dickson(1), MPoly::var(Var::R));
        assert_eq!(dickson(2), parse_poly("r^2 - 2").unwrap());
        assert_eq!(dickson(-3), dickson(3));
    }

    #[test]
    fn gamma_mu_closed_form() {
        let g3 = mu_sub(&gamma(3));
        assert_eq!(g3, parse_poly("mu^2 + 1 + mu^-2").unwrap());
    }

    #[test]
    fn table_caches_and_renames() {
        let t = FamilyTable::new();
        let a = t.c(2, 1, Var::R2).unwrap();
        assert_eq!(a, in_var(&c_coef(2, 1), Var::R2));
        assert!(!t.is_empty());
        assert_eq!(t.c(2, 1, Var::R2).unwrap(), a);
    }

    #[test]
    fn all_identities_pass() {
        for r in verify_family_identities(4, 3) {
            assert!(r.is_pass(), "{} {}", r.check_id, r.details);
        }
    }
}
