//! Closure of the relations among `r1, r2` acting on `x1`.
//!
//! Relations here are linear: a relation `xi ~ 0` is an element of the box
//! `r1^i r2^j, i, j <= 2` after the `phi` rules, and "is implied by" means
//! "lies in the span over R[t]". The `Sl4b2` consequences live in the free
//! module on `p124, p14` and go through the formal calculus.

use serde_json::{json, Value};

use super::{box_basis, coordinates, linear_system, RewriteSystem};
use crate::calculus::{check_identity_modulo, Axiom, AxiomSet, Basis, Identity, ModuloOptions, ModuloOutcome, Provenance};
use crate::calculus::frac_str;
use crate::families::FamilyTable;
use crate::linalg::{solve_fraction_free, LinearSolution};
use crate::mpoly::Var;
use crate::parse::parse_poly;
use crate::report::{timed, CheckResult};
use crate::{MPoly, QScalar};

pub const VARS: [Var; 2] = [Var::R1, Var::R2];

fn system() -> RewriteSystem {
    linear_system(&VARS).expect("phi rules have invertible heads")
}

fn reduce(sys: &RewriteSystem, p: &MPoly) -> MPoly {
    sys.normal_form(p).expect("linear rules terminate")
}

fn poly(src: &str) -> MPoly {
    parse_poly(src).expect("built-in expression parses")
}

/// `lambda_k^m(r1) r2^n - r1^m lambda_k^n(r2)`.
pub fn exchange_relation(k: i64, m: u32, n: u32) -> MPoly {
    let f = FamilyTable::global();
    let lam = |e: u32, v: Var| f.lambda(k, e, v).expect("lambda is exact");
    let r1 = MPoly::var(Var::R1);
    let r2 = MPoly::var(Var::R2);
    &(&lam(m, Var::R1) * &r2.pow(n)) - &(&r1.pow(m) * &lam(n, Var::R2))
}

/// The relations from `r1^m r2^n (grave a - acute b)` and
/// `r1^m r2^n (grave b - acute a)`, named `A{m}{n}` and `B{m}{n}`.
pub fn relator_relations(m: u32, n: u32) -> [(String, MPoly); 2] {
    [(format!("A{}{}", m, n), exchange_relation(3, m, n)), (format!("B{}{}", m, n), exchange_relation(2, m, n))]
}

/// The cases `m, n <= 1` with `m * n = 0`.
pub fn base_relations() -> Vec<(String, MPoly)> {
    [(0, 0), (1, 0), (0, 1)].iter().flat_map(|&(m, n)| relator_relations(m, n)).collect()
}

/// `qb(1 - t^2) r1 r2 - qb^2 t^2 r2 - qb^3`.
fn cubic_tail() -> MPoly {
    poly("qb*(1 - t^2)*r1*r2 - qb^2*t^2*r2 - qb^3")
}

/// The relations listed as equivalent to the relators.
pub fn stated_relations() -> Vec<(String, MPoly)> {
    vec![
        ("r1 ~ r2".into(), poly("r1 - r2")),
        ("r1^2 ~ r2^2".into(), poly("r1^2 - r2^2")),
        ("r1 r2 ~ r2^2 + qb^2 - 1".into(), poly("r1*r2 - r2^2 - qb^2 + 1")),
        ("r1(r2^2 - 1) ~ tail".into(), &poly("r1*(r2^2 - 1)") - &cubic_tail()),
        ("(r1^2 - 1) r2 ~ tail".into(), &poly("(r1^2 - 1)*r2") - &cubic_tail()),
    ]
}

/// `-qb^6 t^2 c_a^0(r1) c_b^0(r2)`.
fn product_value(a: i64, b: i64) -> MPoly {
    let f = FamilyTable::global();
    let c = |k: i64, v: Var| f.c(k, 0, v).expect("c is exact");
    let s = MPoly::constant(-QScalar::q_pow(-6)) * MPoly::var(Var::T).pow(2);
    &(&s * &c(a, Var::R1)) * &c(b, Var::R2)
}

/// Whether `target` is an R[t]-combination of `gens` after the phi rules.
pub struct Membership {
    pub solution: LinearSolution<QScalar>,
    pub polynomial: bool,
}

impl Membership {
    pub fn holds(&self) -> bool {
        self.solution.consistent && self.polynomial
    }

    pub fn to_json(&self, names: &[String]) -> Value {
        json!({
            "in_span": self.holds(),
            "consistent": self.solution.consistent,
            "polynomial": self.polynomial,
            "coefficients": names.iter().zip(&self.solution.particular)
                .filter(|(_, c)| !c.is_zero())
                .map(|(n, c)| json!({"relation": n, "coefficient": frac_str(c)}))
                .collect::<Vec<_>>(),
            "nullity": self.solution.nullspace.len(),
        })
    }
}

pub fn membership(sys: &RewriteSystem, target: &MPoly, gens: &[MPoly]) -> Membership {
    let basis = box_basis(Var::R1, Var::R2);
    let coords = |p: &MPoly| coordinates(&reduce(sys, p), &VARS, &basis).expect("phi rules reach the box");
    let cols: Vec<Vec<MPoly>> = gens.iter().map(coords).collect();
    let b = coords(target);
    let a: Vec<Vec<MPoly>> = (0..basis.len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let solution = solve_fraction_free(&a, &b);
    let polynomial = solution.particular.iter().all(|c| c.to_poly().is_some());
    Membership { solution, polynomial }
}

fn names(v: &[(String, MPoly)]) -> Vec<String> {
    v.iter().map(|(n, _)| n.clone()).collect()
}

fn polys(v: &[(String, MPoly)]) -> Vec<MPoly> {
    v.iter().map(|(_, p)| p.clone()).collect()
}

fn item3_forward(sys: &RewriteSystem) -> CheckResult {
    let base = base_relations();
    let mut all = true;
    let mut out = serde_json::Map::new();
    for (name, p) in stated_relations() {
        let m = membership(sys, &p, &polys(&base));
        all &= m.holds();
        out.insert(name, m.to_json(&names(&base)));
    }
    CheckResult::verdict(
        "closure.stated-from-relators",
        all,
        "r_1\\sim r_2, r_1^2\\sim r_2^2, r_1r_2\\sim r_2^2+\\overline{q}^2-1",
        json!({"relators": names(&base), "claims": out}),
    )
}

fn item3_backward(sys: &RewriteSystem) -> CheckResult {
    let stated = stated_relations();
    let mut all = true;
    let mut out = serde_json::Map::new();
    for (name, p) in base_relations() {
        let m = membership(sys, &p, &polys(&stated));
        all &= m.holds();
        out.insert(name, m.to_json(&names(&stated)));
    }
    CheckResult::verdict(
        "closure.relators-from-stated",
        all,
        "The L_1-relations are equivalent to the following",
        json!({"relators": out}),
    )
}

fn case_11(sys: &RewriteSystem) -> CheckResult {
    let base = base_relations();
    let mut all = true;
    let mut out = serde_json::Map::new();
    for (name, p) in relator_relations(1, 1) {
        let m = membership(sys, &p, &polys(&base));
        all &= m.holds();
        out.insert(name, m.to_json(&names(&base)));
    }
    CheckResult::verdict("closure.case-11-trivial", all, "the case m=n=1 becomes trivial, as can be verified", Value::Object(out))
}

fn pq_basis() -> Basis {
    Basis::from_pairs(&[("p14", 1), ("p124", 1)]).expect("valid basis")
}

fn text_axiom(basis: &Basis, name: &str, src: &str) -> Axiom {
    Axiom {
        name: name.into(),
        lhs: basis.parse(src).expect("built-in expression parses"),
        rhs: basis.parse("0").expect("zero parses"),
        provenance: Provenance::Text,
    }
}

/// `Sl12(r1^n)`, `Sl1b2(r1^n)`, `Sl14(r2^n)`, `Sl4b1(r2^n)` in reduced form.
fn relator_axioms(basis: &Basis, n: u32) -> Vec<Axiom> {
    vec![
        text_axiom(basis, &format!("Sl12(r1^{})", n), &format!("c(2,{n},r1)*t*p124 - qb*eta(3,{n},r1)*p14")),
        text_axiom(basis, &format!("Sl1b2(r1^{})", n), &format!("q*eta(3,{n},r1)*p124 + t*c(3,{n},r1)*p14")),
        text_axiom(basis, &format!("Sl14(r2^{})", n), &format!("c(2,{n},r2)*t*p124 - qb*eta(3,{n},r2)*p14")),
        text_axiom(basis, &format!("Sl4b1(r2^{})", n), &format!("eta(3,{n},r2)*p124 + qb*t*c(3,{n},r2)*p14")),
    ]
}

fn chain(basis: &Basis, axioms: Vec<Axiom>, a: i64, b: i64) -> ModuloOutcome {
    let claim = Identity {
        lhs: basis.parse("eta(3,0,r1)*eta(3,0,r2)*p14").expect("parses"),
        rhs: basis.parse(&format!("-c({a},0,r1)*c({b},0,r2)*t^2*p14")).expect("parses"),
    };
    check_identity_modulo(basis, &claim, &AxiomSet { axioms, lower_degree_bound: 1 }, &ModuloOptions::default())
}

/// Which of `c_2^0(r1) c_3^0(r2)` and `c_3^0(r1) c_2^0(r2)` the final
/// product relation closes with.
pub fn product_ordering() -> CheckResult {
    let basis = pq_basis();
    let ax = relator_axioms(&basis, 0);
    // the proof uses Sl14(1) then Sl1b2(1)
    let proof_axioms = vec![ax[2].clone(), ax[1].clone()];
    let mirror_axioms = vec![ax[0].clone(), ax[3].clone()];
    let proof_32 = chain(&basis, proof_axioms.clone(), 3, 2);
    let proof_23 = chain(&basis, proof_axioms, 2, 3);
    let mirror_23 = chain(&basis, mirror_axioms, 2, 3);
    let all_23 = chain(&basis, ax.clone(), 2, 3);

    let sys = system();
    let stated = stated_relations();
    let diff = &product_value(2, 3) - &product_value(3, 2);
    let diff_in_span = membership(&sys, &diff, &polys(&stated));

    let closing: Vec<&str> = [(proof_32.holds, "c_3^0(r1)c_2^0(r2)"), (proof_23.holds, "c_2^0(r1)c_3^0(r2)")]
        .iter()
        .filter(|(h, _)| *h)
        .map(|(_, s)| *s)
        .collect();
    let details = json!({
        "closes_along_proof_chain": closing,
        "proof_chain": {"c3(r1)c2(r2)": proof_32.to_json(), "c2(r1)c3(r2)": proof_23.to_json()},
        "statement_ordering_via_Sl12_and_Sl4b1": mirror_23.holds,
        "statement_ordering_with_all_four_relators": all_23.holds,
        "difference_in_span_of_stated_relations": diff_in_span.to_json(&names(&stated)),
        "note": "the statement uses c_2^0(r1)c_3^0(r2), the proof ends with c_3^0(r1)c_2^0(r2)",
    });
    let anchor = "(r_1^2-1)(r_2^2-1)\\sim-\\overline{q}^6t^2c_2^0(r_1)c_3^0(r_2)";
    if closing.len() == 1 {
        CheckResult::flagged("closure.product-ordering", anchor, details)
    } else {
        CheckResult::fail("closure.product-ordering", anchor, details)
    }
}

/// The replacement for `Sl4b2(r1^m r2^n)`.
pub fn sl4b2_replacement(m: u32, n: u32) -> String {
    format!("qb*(r1^{m}*c(2,{n},r2) - c(2,{m},r1)*r2^{n})*t*p14 + (r1^{m}*eta(2,{n},r2) - eta(2,{m},r1)*r2^{n})*p124")
}

/// The reduced forms of `Sl4b2(1)`, `Sl4b2(r1)`, `Sl4b2(r2)`, with the sign
/// of the `t r_i p14` terms as the reduction produces them.
pub const REDUCED: [(&str, &str); 3] = [
    ("Sl4b2(1)", "(r1 - r2)*p124 + qb*t*(r1 - r2)*p14"),
    ("Sl4b2(r1)", "(1 - q^2*r1*r2)*p124 - t*(r1 + q*r1*r2)*p14"),
    ("Sl4b2(r2)", "(1 - q^2*r1*r2)*p124 - t*(r2 + q*r1*r2)*p14"),
];

/// The three relations the reduced forms are replaced by.
pub const REPLACED_BY: [(&str, &str); 3] = [
    ("(r1 - r2) p124", "(r1 - r2)*p124"),
    ("(r1 r2 - qb^2) p124 + t(qb r1 r2 + qb^2 r2) p14", "(r1*r2 - qb^2)*p124 + t*(qb*r1*r2 + qb^2*r2)*p14"),
    ("t(r1 - r2) p14", "t*(r1 - r2)*p14"),
];

fn span_check(basis: &Basis, claim_src: &str, axioms: &[Axiom], split: bool) -> ModuloOutcome {
    let claim = Identity { lhs: basis.parse(claim_src).expect("parses"), rhs: basis.parse("0").expect("parses") };
    let opts = ModuloOptions { split_vars: if split { VARS.to_vec() } else { Vec::new() }, ..Default::default() };
    check_identity_modulo(basis, &claim, &AxiomSet { axioms: axioms.to_vec(), lower_degree_bound: 1 }, &opts)
}

fn axioms_of(basis: &Basis, v: &[(&str, &str)]) -> Vec<Axiom> {
    v.iter().map(|(n, s)| text_axiom(basis, n, s)).collect()
}

/// The reduced `Sl4b2` consequences against the three replacing relations,
/// both ways, with coefficients in R[t].
pub fn sl4b2_consequences() -> CheckResult {
    let basis = pq_basis();
    let reduced = axioms_of(&basis, &REDUCED);
    let replaced = axioms_of(&basis, &REPLACED_BY);
    let mut ok = true;
    let mut fwd = serde_json::Map::new();
    for (name, src) in REPLACED_BY {
        let o = span_check(&basis, src, &reduced, true);
        ok &= o.holds;
        fwd.insert(name.into(), o.to_json());
    }
    let mut back = serde_json::Map::new();
    for (name, src) in REDUCED {
        let o = span_check(&basis, src, &replaced, true);
        ok &= o.holds;
        back.insert(name.into(), o.to_json());
    }
    CheckResult::verdict(
        "closure.sl4b2-consequences",
        ok,
        "(r_1-r_2)p_{124}\\equiv 0, \\quad (r_1r_2-\\overline{q}^2)p_{124}+t(\\overline{q}r_1r_2+\\overline{q}^2r_2)p_{14}\\equiv 0, \\quad t(r_1-r_2)p_{14}\\equiv 0",
        json!({"replacements_from_reduced": fwd, "reduced_from_replacements": back}),
    )
}

/// `Sl4b2(r1 r2)` is antisymmetric in `r1, r2`, so both of its components
/// are multiples of `r1 - r2`.
pub fn sl4b2_r1r2_automatic() -> CheckResult {
    let basis = pq_basis();
    let axioms = axioms_of(&basis, &[REPLACED_BY[0], REPLACED_BY[2]]);
    let o = span_check(&basis, &sl4b2_replacement(1, 1), &axioms, false);
    CheckResult::verdict(
        "closure.sl4b2-at-r1r2-automatic",
        o.holds,
        "{\\rm Sl}^1_{\\overline{4}2}(r_1r_2)=0 holds automatically",
        o.to_json(),
    )
}

/// Checks of the relations among `r1, r2`, the product ordering and the
/// `Sl4b2` consequences.
pub fn verify_product_closure() -> Vec<CheckResult> {
    let sys = system();
    vec![
        timed(|| item3_forward(&sys)),
        timed(|| item3_backward(&sys)),
        timed(|| case_11(&sys)),
        timed(product_ordering),
        timed(sl4b2_consequences),
        timed(sl4b2_r1r2_automatic),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;
    use num_traits::{One, Zero};

    #[test]
    fn relators_at_zero_are_symmetric_differences() {
        // A00 = lambda_3^0(r1) - lambda_3^0(r2) vanishes at r1 = r2
        let [(_, a), (_, b)] = relator_relations(0, 0);
        let r2 = MPoly::var(Var::R2);
        assert!(a.substitute(Var::R1, &r2).unwrap().is_zero());
        assert!(b.substitute(Var::R1, &r2).unwrap().is_zero());
    }

    #[test]
    fn r1_minus_r2_is_implied() {
        let sys = system();
        let m = membership(&sys, &poly("r1 - r2"), &polys(&base_relations()));
        assert!(m.holds());
    }

    #[test]
    fn unrelated_polynomial_is_not_implied() {
        let sys = system();
        let m = membership(&sys, &MPoly::one(), &polys(&base_relations()));
        assert!(!m.holds());
    }

    #[test]
    fn closure_checks() {
        for r in verify_product_closure() {
            match r.check_id.as_str() {
                "closure.product-ordering" => {
                    assert_eq!(r.status, Status::Flagged, "{}", r.details);
                    assert_eq!(r.details["closes_along_proof_chain"], json!(["c_3^0(r1)c_2^0(r2)"]));
                }
                _ => assert!(r.is_pass(), "{} {}", r.check_id, r.details),
            }
        }
    }
}
