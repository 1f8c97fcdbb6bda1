use proptest::prelude::*;
use skeinlab::parse::parse_poly;
use skeinlab::{Laurent, MPoly, Monomial, QScalar, Rational, Var, Zero};

const VARS: [Var; 4] = [Var::T, Var::R1, Var::R2, Var::K];

fn scalar() -> impl Strategy<Value = QScalar> {
    prop::collection::vec((-6i64..=6, -4i64..=4, 1i64..=3), 1..3).prop_map(|ts| {
        Laurent::from_terms(ts.into_iter().map(|(h, a, b)| (h, Rational::new(a.into(), b.into()))))
    })
}

fn monomial(max_deg: i32) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..=max_deg, VARS.len()).prop_map(move |es| {
        let mut budget = max_deg;
        let mut m = Monomial::one();
        for (v, e) in VARS.iter().zip(es) {
            let e = e.min(budget);
            budget -= e;
            m = m.with_exp(*v, e);
        }
        m
    })
}

/// A polynomial of total degree at most `max_deg`; `K` may also appear with
/// a negative exponent.
fn poly(max_deg: i32) -> impl Strategy<Value = MPoly> {
    prop::collection::vec((monomial(max_deg), scalar(), -1i32..=0), 0..5).prop_map(|ts| {
        MPoly::from_terms(ts.into_iter().map(|(m, c, k)| {
            let e = m.exp(Var::K) + k;
            (m.with_exp(Var::K, e), c)
        }))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn exact_division_round_trip(a in poly(4), b in poly(4)) {
        prop_assume!(!b.is_zero());
        let p = &a * &b;
        prop_assert_eq!(p.exact_div(&b).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn print_parse_round_trip(p in poly(6)) {
        let printed = p.to_string();
        prop_assert_eq!(parse_poly(&printed).unwrap(), p, "{}", printed);
    }

    #[test]
    fn ring_axioms(a in poly(3), b in poly(3), c in poly(3)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn bar_is_an_involution(s in scalar(), t in scalar()) {
        prop_assert_eq!(s.bar().bar(), s.clone());
        prop_assert_eq!((s.clone() * t.clone()).bar(), s.bar() * t.bar());
    }
}
