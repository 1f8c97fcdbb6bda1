//! Linear rewriting of polynomials in a few structural trace variables
//! (`r2, r3` or `r1, r2`) with coefficients in `QScalar[t, K^{+-1}]`.
//!
//! A rule rewrites one head monomial, optionally times any monomial in its
//! multiplier variables. Rules are linear: `r2 * (head - tail)` is *not* a
//! consequence of a rule without `r2` among the multipliers. Treating the
//! relations as an ideal collapses the module (see the tests).

pub mod cases;
pub mod product_closure;
pub mod quotient;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::families::FamilyTable;
use crate::mpoly::{Monomial, Var};
use crate::{MPoly, QScalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReductionError {
    #[error("rule {name}: {msg}")]
    BadRule { name: String, msg: String },
    #[error("rules {a} and {b} are not confluent at {at}: {left} vs {right}")]
    NonConfluent { a: String, b: String, at: String, left: String, right: String },
    #[error("normal form did not terminate within {0} rule applications")]
    NoTermination(usize),
    #[error("{name}: derived {derived} does not match {expected}")]
    DerivationMismatch { name: String, derived: String, expected: String },
    #[error("exact division failed in {step}: ({dividend}) / ({divisor})")]
    ExactDivisionFailed { step: String, dividend: String, divisor: String },
    #[error("elimination mismatch: {0}")]
    EliminationMismatch(String),
    #[error("dimension {found} != {expected}; pivot degrees {pivots:?}")]
    DimensionMismatch { found: usize, expected: usize, pivots: Vec<Option<usize>> },
    #[error(transparent)]
    Algebra(#[from] crate::AlgebraError),
}

pub type Result<T> = std::result::Result<T, ReductionError>;

pub const MAX_STEPS: usize = 1_000_000;

/// `head * u -> tail * u` for every monomial `u` in the multiplier variables.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub name: String,
    pub head: Monomial,
    pub tail: MPoly,
    pub multipliers: Vec<Var>,
}

/// The part of a monomial in the given variables, and the rest.
fn split(m: &Monomial, vars: &[Var]) -> (Monomial, Monomial) {
    let mut s = Monomial::one();
    for &v in vars {
        s = s.with_exp(v, m.exp(v));
    }
    (s, m.div(&s))
}

fn degree_in(m: &Monomial, vars: &[Var]) -> i32 {
    vars.iter().map(|&v| m.exp(v)).sum()
}

impl RewriteRule {
    /// The rule `relation ~ 0` solved for `head`. The coefficient of `head`
    /// must be a unit and every other structural monomial must have lower
    /// degree.
    pub fn from_relation(
        name: &str,
        relation: &MPoly,
        head: Monomial,
        vars: &[Var],
        multipliers: &[Var],
    ) -> Result<Self> {
        let bad = |msg: String| ReductionError::BadRule { name: name.to_string(), msg };
        let parts = relation.collect_many(vars);
        let lead = parts.get(&head).ok_or_else(|| bad(format!("head {} absent", head)))?;
        let inv = lead.inverse().ok_or_else(|| bad(format!("head coefficient {} is not a unit", lead)))?;
        let hd = degree_in(&head, vars);
        for m in parts.keys() {
            if *m != head && degree_in(m, vars) >= hd {
                return Err(bad(format!("term {} is not below head {}", m, head)));
            }
        }
        let tail = &MPoly::term(head, QScalar::one()) - &(relation * &inv);
        Ok(Self { name: name.to_string(), head, tail, multipliers: multipliers.to_vec() })
    }

    /// The cofactor `u` with `m = head * u`, if the rule applies to the
    /// structural monomial `m`.
    pub fn matches(&self, m: &Monomial, vars: &[Var]) -> Option<Monomial> {
        for &v in vars {
            let (a, h) = (m.exp(v), self.head.exp(v));
            let ok = if self.multipliers.contains(&v) { a >= h } else { a == h };
            if !ok {
                return None;
            }
        }
        Some(m.div(&self.head))
    }

    /// The relation `head - tail`.
    pub fn relation(&self) -> MPoly {
        &MPoly::term(self.head, QScalar::one()) - &self.tail
    }

    pub fn swapped(&self, a: Var, b: Var, name: &str) -> Self {
        let mult = self.multipliers.iter().map(|&v| if v == a { b } else if v == b { a } else { v }).collect();
        Self { name: name.to_string(), head: self.head.swap(a, b), tail: self.tail.swap_vars(a, b), multipliers: mult }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceStep {
    pub step: usize,
    pub rule_applied: String,
    pub before: String,
    pub after: String,
}

/// An ordered list of rules over fixed structural variables.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    pub vars: Vec<Var>,
    pub rules: Vec<RewriteRule>,
}

impl RewriteSystem {
    pub fn new(vars: &[Var]) -> Self {
        Self { vars: vars.to_vec(), rules: Vec::new() }
    }

    pub fn with_rule(mut self, rule: RewriteRule) -> Self {
        self.rules.push(rule);
        self
    }

    pub fn extend(mut self, rules: impl IntoIterator<Item = RewriteRule>) -> Self {
        self.rules.extend(rules);
        self
    }

    pub fn rule(&self, name: &str) -> Option<&RewriteRule> {
        self.rules.iter().find(|r| r.name == name)
    }

    /// First applicable rule for the highest reducible structural monomial.
    fn redex(&self, p: &MPoly) -> Option<(Monomial, usize, Monomial)> {
        let parts = p.collect_many(&self.vars);
        for m in parts.keys().rev() {
            for (i, r) in self.rules.iter().enumerate() {
                if let Some(u) = r.matches(m, &self.vars) {
                    return Some((*m, i, u));
                }
            }
        }
        None
    }

    /// Rewrites the whole structural monomial `m` of `p` once with rule `i`.
    fn apply(&self, p: &MPoly, m: &Monomial, i: usize, u: &Monomial) -> MPoly {
        let mut rest = MPoly::zero();
        let mut coeff = MPoly::zero();
        for (mono, c) in p.terms() {
            let (s, other) = split(mono, &self.vars);
            if s == *m {
                coeff = &coeff + &MPoly::term(other, c.clone());
            } else {
                rest = &rest + &MPoly::term(*mono, c.clone());
            }
        }
        let tail = self.rules[i].tail.mul_monomial(u, &QScalar::one());
        &rest + &(&coeff * &tail)
    }

    pub fn normal_form(&self, p: &MPoly) -> Result<MPoly> {
        self.normal_form_traced(p, None)
    }

    /// Normal form, recording each rewrite when `trace` is given.
    pub fn normal_form_traced(&self, p: &MPoly, mut trace: Option<&mut Vec<TraceStep>>) -> Result<MPoly> {
        let mut cur = p.clone();
        for step in 0..MAX_STEPS {
            let Some((m, i, u)) = self.redex(&cur) else {
                return Ok(cur);
            };
            let next = self.apply(&cur, &m, i, &u);
            if let Some(t) = trace.as_deref_mut() {
                t.push(TraceStep {
                    step,
                    rule_applied: self.rules[i].name.clone(),
                    before: cur.to_string(),
                    after: next.to_string(),
                });
            }
            cur = next;
        }
        Err(ReductionError::NoTermination(MAX_STEPS))
    }

    /// Smallest structural monomial matched by both rules, if any.
    fn overlap(&self, a: &RewriteRule, b: &RewriteRule) -> Option<Monomial> {
        let mut m = Monomial::one();
        for &v in &self.vars {
            let (ea, eb) = (a.head.exp(v), b.head.exp(v));
            let (fa, fb) = (a.multipliers.contains(&v), b.multipliers.contains(&v));
            let e = match (fa, fb) {
                (false, false) if ea != eb => return None,
                (false, false) => ea,
                (true, false) if eb < ea => return None,
                (true, false) => eb,
                (false, true) if ea < eb => return None,
                (false, true) => ea,
                (true, true) => ea.max(eb),
            };
            m = m.with_exp(v, e);
        }
        Some(m)
    }

    /// Reduces every overlap of two rule heads both ways, including the
    /// overlap times small monomials in the shared multiplier variables.
    pub fn check_confluence(&self) -> Result<usize> {
        let mut pairs = 0;
        for (i, a) in self.rules.iter().enumerate() {
            for b in &self.rules[i + 1..] {
                let Some(m0) = self.overlap(a, b) else { continue };
                let shared: Vec<Var> = a.multipliers.iter().copied().filter(|v| b.multipliers.contains(v)).collect();
                let mut shifts = vec![Monomial::one()];
                for &v in &shared {
                    shifts = shifts.iter().flat_map(|s| (0..=2).map(move |e| s.with_exp(v, s.exp(v) + e))).collect();
                }
                for s in shifts {
                    let m = m0.mul(&s);
                    let via = |r: &RewriteRule| -> Result<MPoly> {
                        let u = r.matches(&m, &self.vars).expect("overlap matches both rules");
                        self.normal_form(&r.tail.mul_monomial(&u, &QScalar::one()))
                    };
                    let (left, right) = (via(a)?, via(b)?);
                    pairs += 1;
                    if left != right {
                        return Err(ReductionError::NonConfluent {
                            a: a.name.clone(),
                            b: b.name.clone(),
                            at: m.to_string(),
                            left: left.to_string(),
                            right: right.to_string(),
                        });
                    }
                }
            }
        }
        Ok(pairs)
    }
}

/// `phi_3 = lambda_3^0 - r`, `phi_4 = lambda_3^1 - r^2 - qb^2 + 1`,
/// `phi_5 = lambda_3^2 - r^3 - (qb^4 - 1) r`, in the variable `v`.
pub fn phi_relations(v: Var) -> Vec<(String, MPoly)> {
    let f = FamilyTable::global();
    let r = MPoly::var(v);
    let qb = |k: i64| MPoly::constant(QScalar::q_pow(-k));
    let one = MPoly::one();
    let lam = |n: u32| f.lambda(3, n, v).expect("lambda is exact");
    vec![
        (format!("phi3({})", v.name()), &lam(0) - &r),
        (format!("phi4({})", v.name()), &(&(&lam(1) - &r.pow(2)) - &qb(2)) + &one),
        (format!("phi5({})", v.name()), &(&lam(2) - &r.pow(3)) - &(&(&qb(4) - &one) * &r)),
    ]
}

/// Rules reducing `v^3, v^4, v^5` with every other structural variable as
/// a free multiplier.
pub fn linear_rules(v: Var, vars: &[Var]) -> Result<Vec<RewriteRule>> {
    let others: Vec<Var> = vars.iter().copied().filter(|&w| w != v).collect();
    phi_relations(v)
        .into_iter()
        .enumerate()
        .map(|(i, (name, rel))| RewriteRule::from_relation(&name, &rel, Monomial::var(v, i as i32 + 3), vars, &others))
        .collect()
}

/// The linear rules in each structural variable.
pub fn linear_system(vars: &[Var]) -> Result<RewriteSystem> {
    let mut sys = RewriteSystem::new(vars);
    for &v in vars {
        sys = sys.extend(linear_rules(v, vars)?);
    }
    Ok(sys)
}

/// Coefficients of `p` on the structural monomials of `basis`, or `None`
/// if `p` has support elsewhere.
pub fn coordinates(p: &MPoly, vars: &[Var], basis: &[Monomial]) -> Option<Vec<MPoly>> {
    let parts: BTreeMap<Monomial, MPoly> = p.collect_many(vars);
    if parts.keys().any(|m| !basis.contains(m)) {
        return None;
    }
    Some(basis.iter().map(|m| parts.get(m).cloned().unwrap_or_else(MPoly::zero)).collect())
}

/// `r_a^i r_b^j` for `0 <= i, j <= 2`, highest first.
pub fn box_basis(a: Var, b: Var) -> Vec<Monomial> {
    let mut v: Vec<Monomial> =
        (0..3).flat_map(|i| (0..3).map(move |j| Monomial::var(a, i).mul(&Monomial::var(b, j)))).collect();
    v.sort();
    v.reverse();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn p(s: &str) -> MPoly {
        parse_poly(s).unwrap()
    }

    const V: [Var; 2] = [Var::R2, Var::R3];

    #[test]
    fn linear_rules_reach_the_box() {
        let sys = linear_system(&V).unwrap();
        let nf = sys.normal_form(&p("r2^5*r3^4 + t*r2^3 - r3^3*r2")).unwrap();
        assert!(coordinates(&nf, &V, &box_basis(Var::R2, Var::R3)).is_some());
        assert_eq!(sys.normal_form(&p("1")).unwrap(), p("1"));
        assert!(sys.check_confluence().unwrap() > 0);
    }

    #[test]
    fn lambda_2_reductions() {
        // lambda_2^1(r) ~ 1 and lambda_2^2(r) ~ (1 - qb^2) lambda_2^0(r) + r
        let sys = linear_system(&V).unwrap();
        let f = FamilyTable::global();
        let l = |n| f.lambda(2, n, Var::R2).unwrap();
        assert_eq!(sys.normal_form(&l(1)).unwrap(), MPoly::one());
        let want = &(&l(0) * &p("1 - qb^2")) + &p("r2");
        assert_eq!(sys.normal_form(&l(2)).unwrap(), want);
    }

    #[test]
    fn multiplier_semantics() {
        let sys = linear_system(&V).unwrap();
        let r3_rule = sys.rule("phi3(r2)").unwrap();
        assert!(r3_rule.matches(&Monomial::var(Var::R2, 3).mul(&Monomial::var(Var::R3, 7)), &V).is_some());
        assert!(r3_rule.matches(&Monomial::var(Var::R2, 4), &V).is_none());
    }

    #[test]
    fn ideal_semantics_collapse() {
        // reading phi_3 as an ideal generator puts r * phi_3 in the span; its
        // remainder after the linear rules is a nonzero relation of degree <= 2
        // in one variable, which no such module can have
        let sys = linear_system(&V).unwrap();
        let phi3 = &phi_relations(Var::R2)[0].1;
        let rem = sys.normal_form(&(&p("r2") * phi3)).unwrap();
        assert!(!rem.is_zero());
        assert!(rem.max_exp(Var::R2).unwrap() <= 2);
        assert!(!rem.involves(Var::R3));
    }

    #[test]
    fn non_unit_head_rejected() {
        let e = RewriteRule::from_relation("bad", &p("t*r2^2 - 1"), Monomial::var(Var::R2, 2), &V, &[]);
        assert!(matches!(e, Err(ReductionError::BadRule { .. })));
        let e = RewriteRule::from_relation("bad", &p("r2^2 - r3^2"), Monomial::var(Var::R2, 2), &V, &[]);
        assert!(matches!(e, Err(ReductionError::BadRule { .. })));
    }

    #[test]
    fn non_confluence_detected() {
        let sys = RewriteSystem::new(&V)
            .with_rule(RewriteRule::from_relation("a", &p("r2*r3 - 1"), Monomial::var(Var::R2, 1).mul(&Monomial::var(Var::R3, 1)), &V, &[]).unwrap())
            .with_rule(RewriteRule::from_relation("b", &p("r2 - t"), Monomial::var(Var::R2, 1), &V, &[Var::R3]).unwrap());
        assert!(matches!(sys.check_confluence(), Err(ReductionError::NonConfluent { .. })));
    }

    #[test]
    fn trace_records_steps() {
        let sys = linear_system(&V).unwrap();
        let mut tr = Vec::new();
        sys.normal_form_traced(&p("r2^4"), Some(&mut tr)).unwrap();
        assert_eq!(tr[0].rule_applied, "phi4(r2)");
        assert!(tr.len() >= 2);
    }
}
