//! Free-module calculus over [`MPoly`] with declared, graded basis symbols.
//!
//! A [`FormalElement`] is a finite sum of ordered words in the basis symbols
//! with central polynomial coefficients. Nothing commutes unless an axiom
//! says so. "Equal modulo lower degree" is modelled by discarding words of
//! degree below a bound; whatever gets discarded is reported.

pub mod action;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{AlgebraError, Result};
use crate::linalg::solve_fraction_free;
use crate::mpoly::{Monomial, Var};
use crate::parse::{parse_with, ExprValue};
use crate::{MPoly, RatFrac};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisSymbol {
    pub name: String,
    pub degree: i32,
}

#[derive(Clone, Debug, Default)]
pub struct Basis {
    symbols: Vec<BasisSymbol>,
    index: HashMap<String, usize>,
}

impl Basis {
    pub fn new(symbols: Vec<BasisSymbol>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if Var::from_name(&s.name).is_some() || matches!(s.name.as_str(), "q" | "qh" | "qb") {
                return Err(AlgebraError::Other(format!("basis symbol `{}` shadows a ring variable", s.name)));
            }
            if index.insert(s.name.clone(), i).is_some() {
                return Err(AlgebraError::Other(format!("duplicate basis symbol `{}`", s.name)));
            }
        }
        Ok(Self { symbols, index })
    }

    /// Convenience constructor from `(name, degree)` pairs.
    pub fn from_pairs(pairs: &[(&str, i32)]) -> Result<Self> {
        Self::new(pairs.iter().map(|(n, d)| BasisSymbol { name: n.to_string(), degree: *d }).collect())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn symbols(&self) -> &[BasisSymbol] {
        &self.symbols
    }

    pub fn degree_of(&self, name: &str) -> Option<i32> {
        self.index.get(name).map(|i| self.symbols[*i].degree)
    }

    /// Degree of an ordered word; the empty word has degree 0.
    pub fn word_degree(&self, w: &Word) -> i32 {
        w.iter().map(|s| self.degree_of(s).unwrap_or(0)).sum()
    }

    /// A copy with one symbol's degree changed.
    pub fn with_degree(&self, name: &str, degree: i32) -> Self {
        let mut b = self.clone();
        if let Some(i) = b.index.get(name) {
            b.symbols[*i].degree = degree;
        }
        b
    }

    /// Parses an element of the free module on this basis.
    pub fn parse(&self, src: &str) -> Result<FormalElement> {
        parse_with(src, &|name| self.contains(name).then(|| FormalElement::symbol(name)))
    }
}

pub type Word = Vec<String>;

fn word_str(w: &Word) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w.join("*")
    }
}

/// A finite sum of words with polynomial coefficients.
#[derive(Clone, PartialEq, Default)]
pub struct FormalElement {
    terms: BTreeMap<Word, MPoly>,
}

impl FormalElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(p: MPoly) -> Self {
        let mut e = Self::zero();
        e.add_term(Vec::new(), p);
        e
    }

    pub fn symbol(name: &str) -> Self {
        let mut e = Self::zero();
        e.add_term(vec![name.to_string()], MPoly::one());
        e
    }

    pub fn word(w: Word, c: MPoly) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    fn add_term(&mut self, w: Word, c: MPoly) {
        if c.is_zero() {
            return;
        }
        let s = match self.terms.remove(&w) {
            Some(x) => &x + &c,
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert(w, s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &MPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> MPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn scale(&self, c: &MPoly) -> Self {
        let mut e = Self::zero();
        for (w, x) in &self.terms {
            e.add_term(w.clone(), x * c);
        }
        e
    }

    /// Splits into (degree >= bound, degree < bound).
    pub fn split_degree(&self, basis: &Basis, bound: i32) -> (Self, Self) {
        let (mut hi, mut lo) = (Self::zero(), Self::zero());
        for (w, c) in &self.terms {
            if basis.word_degree(w) >= bound {
                hi.add_term(w.clone(), c.clone());
            } else {
                lo.add_term(w.clone(), c.clone());
            }
        }
        (hi, lo)
    }

    /// Words containing `sym`, and whether it only ever occurs alone.
    fn occurrence(&self, sym: &str) -> (bool, bool) {
        let mut found = false;
        let mut linear = true;
        for w in self.terms.keys() {
            if w.iter().any(|s| s == sym) {
                found = true;
                if w.len() != 1 {
                    linear = false;
                }
            }
        }
        (found, linear)
    }

    pub fn to_json(&self) -> Value {
        Value::Object(self.terms.iter().map(|(w, c)| (word_str(w), Value::String(c.to_string()))).collect())
    }
}

impl ExprValue for FormalElement {
    fn from_poly(p: MPoly) -> Self {
        Self::scalar(p)
    }
    fn add(&self, o: &Self) -> Self {
        let mut e = self.clone();
        for (w, c) in &o.terms {
            e.add_term(w.clone(), c.clone());
        }
        e
    }
    fn sub(&self, o: &Self) -> Self {
        ExprValue::add(self, &o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let mut e = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let mut w = w1.clone();
                w.extend(w2.iter().cloned());
                e.add_term(w, c1 * c2);
            }
        }
        e
    }
    fn neg(&self) -> Self {
        self.scale(&-MPoly::one())
    }
    fn as_poly(&self) -> Option<MPoly> {
        match self.terms.len() {
            0 => Some(MPoly::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }
}

impl std::ops::Add for &FormalElement {
    type Output = FormalElement;
    fn add(self, o: &FormalElement) -> FormalElement {
        ExprValue::add(self, o)
    }
}

impl std::ops::Sub for &FormalElement {
    type Output = FormalElement;
    fn sub(self, o: &FormalElement) -> FormalElement {
        ExprValue::sub(self, o)
    }
}

impl fmt::Display for FormalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| if w.is_empty() { format!("({})", c) } else { format!("({})*{}", c, word_str(w)) })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for FormalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "figure")]
    Figure,
    #[serde(rename = "text")]
    Text,
}

#[derive(Clone, Debug)]
pub struct Axiom {
    pub name: String,
    pub lhs: FormalElement,
    pub rhs: FormalElement,
    pub provenance: Provenance,
}

impl Axiom {
    /// `lhs - rhs`, which the axiom asserts is zero.
    pub fn relation(&self) -> FormalElement {
        &self.lhs - &self.rhs
    }
}

#[derive(Clone, Debug, Default)]
pub struct AxiomSet {
    pub axioms: Vec<Axiom>,
    pub lower_degree_bound: i32,
}

/// A claimed identity `lhs = rhs` (modulo lower degree).
#[derive(Clone, Debug)]
pub struct Identity {
    pub lhs: FormalElement,
    pub rhs: FormalElement,
}

impl Identity {
    pub fn difference(&self) -> FormalElement {
        &self.lhs - &self.rhs
    }
}

/// How to read the coefficients of the axiom combination.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientRing {
    /// Coefficients must be polynomials.
    #[default]
    Polynomial,
    /// Any element of the fraction field is acceptable.
    Fraction,
}

#[derive(Clone, Debug, Default)]
pub struct ModuloOptions {
    /// Variables treated as part of the basis: coefficients may not involve them.
    pub split_vars: Vec<Var>,
    pub coefficient_ring: CoefficientRing,
    /// Explicit combination coefficients, one per axiom, instead of solving.
    pub combination: Option<Vec<MPoly>>,
    /// Rows left unconstrained: lower-order terms the claim does not pin down.
    pub free: Option<FreeRows>,
}

/// The rows `m * w` with `w` in `words` and `deg_var(m) < below`.
#[derive(Clone, Debug)]
pub struct FreeRows {
    pub var: Var,
    pub below: i32,
    pub words: Vec<Word>,
}

impl FreeRows {
    fn covers(&self, (w, m): &RowKey) -> bool {
        self.words.contains(w) && m.exp(self.var) < self.below
    }
}

#[derive(Clone, Debug)]
pub struct ModuloOutcome {
    pub holds: bool,
    pub consistent: bool,
    pub polynomial: bool,
    /// `(axiom name, coefficient)`.
    pub coefficients: Vec<(String, RatFrac)>,
    pub nullspace: Vec<Vec<RatFrac>>,
    /// Nonzero part of claim minus combination in degree >= bound.
    pub residual: Vec<(String, RatFrac)>,
    /// Part of claim minus combination below the bound.
    pub discarded: Vec<(String, RatFrac)>,
    /// Values taken by the unconstrained rows.
    pub free: Vec<(String, RatFrac)>,
    pub consumed: Vec<String>,
}

impl ModuloOutcome {
    pub fn to_json(&self) -> Value {
        let fr = |f: &RatFrac| frac_str(f);
        json!({
            "holds": self.holds,
            "consistent": self.consistent,
            "polynomial_coefficients": self.polynomial,
            "coefficients": self.coefficients.iter().map(|(n, c)| json!({"axiom": n, "coefficient": fr(c)})).collect::<Vec<_>>(),
            "nullspace": self.nullspace.iter().map(|v| v.iter().map(fr).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "residual": self.residual.iter().map(|(w, c)| json!({"term": w, "coefficient": fr(c)})).collect::<Vec<_>>(),
            "discarded": self.discarded.iter().map(|(w, c)| json!({"term": w, "coefficient": fr(c)})).collect::<Vec<_>>(),
            "free": self.free.iter().map(|(w, c)| json!({"term": w, "coefficient": fr(c)})).collect::<Vec<_>>(),
            "consumed_axioms": self.consumed,
        })
    }
}

/// Prints a fraction, cancelling the denominator when it divides.
pub fn frac_str(f: &RatFrac) -> String {
    match f.to_poly() {
        Some(p) => p.to_string(),
        None => format!("({}) / ({})", f.num, f.den),
    }
}

type RowKey = (Word, Monomial);

fn rows_of(e: &FormalElement, split: &[Var]) -> BTreeMap<RowKey, MPoly> {
    let mut out = BTreeMap::new();
    for (w, c) in e.terms() {
        if split.is_empty() {
            out.insert((w.clone(), Monomial::one()), c.clone());
        } else {
            for (m, p) in c.collect_many(split) {
                out.insert((w.clone(), m), p);
            }
        }
    }
    out
}

fn row_label((w, m): &RowKey) -> String {
    match (w.is_empty(), m.is_one()) {
        (true, _) => m.to_string(),
        (false, true) => word_str(w),
        (false, false) => format!("{}*{}", m, word_str(w)),
    }
}

/// Decides whether `claim` is a combination of the axioms modulo words of
/// degree below the bound, solving for the combination if none is given.
pub fn check_identity_modulo(basis: &Basis, claim: &Identity, axioms: &AxiomSet, opts: &ModuloOptions) -> ModuloOutcome {
    let bound = axioms.lower_degree_bound;
    let split = &opts.split_vars;
    let target = claim.difference();
    let rels: Vec<FormalElement> = axioms.axioms.iter().map(Axiom::relation).collect();
    let names: Vec<String> = axioms.axioms.iter().map(|a| a.name.clone()).collect();

    let target_rows = rows_of(&target, split);
    let rel_rows: Vec<BTreeMap<RowKey, MPoly>> = rels.iter().map(|r| rows_of(r, split)).collect();
    let mut keys: BTreeSet<RowKey> = target_rows.keys().cloned().collect();
    for r in &rel_rows {
        keys.extend(r.keys().cloned());
    }
    let (free_keys, keys): (Vec<RowKey>, Vec<RowKey>) =
        keys.into_iter().partition(|k| opts.free.as_ref().is_some_and(|f| f.covers(k)));
    let (hi_keys, lo_keys): (Vec<RowKey>, Vec<RowKey>) = keys.into_iter().partition(|k| basis.word_degree(&k.0) >= bound);

    let (coeffs, nullspace, consistent) = match &opts.combination {
        Some(c) => (c.iter().cloned().map(RatFrac::from_poly).collect::<Vec<_>>(), Vec::new(), true),
        None => {
            let a: Vec<Vec<MPoly>> =
                hi_keys.iter().map(|k| rel_rows.iter().map(|r| r.get(k).cloned().unwrap_or_default()).collect()).collect();
            let b: Vec<MPoly> = hi_keys.iter().map(|k| target_rows.get(k).cloned().unwrap_or_default()).collect();
            if rels.is_empty() {
                (Vec::new(), Vec::new(), b.iter().all(|x| x.is_zero()))
            } else {
                let s = solve_fraction_free(&a, &b);
                (s.particular, s.nullspace, s.consistent)
            }
        }
    };

    let remainder_at = |k: &RowKey| -> RatFrac {
        let mut acc = RatFrac::from_poly(target_rows.get(k).cloned().unwrap_or_default());
        for (c, r) in coeffs.iter().zip(&rel_rows) {
            if let Some(x) = r.get(k) {
                acc = acc.sub(&c.scale_poly(x));
            }
        }
        acc.simplify()
    };
    let residual: Vec<(String, RatFrac)> =
        hi_keys.iter().map(|k| (row_label(k), remainder_at(k))).filter(|(_, f)| !f.is_zero()).collect();
    let discarded: Vec<(String, RatFrac)> =
        lo_keys.iter().map(|k| (row_label(k), remainder_at(k))).filter(|(_, f)| !f.is_zero()).collect();
    let free: Vec<(String, RatFrac)> =
        free_keys.iter().map(|k| (row_label(k), remainder_at(k))).filter(|(_, f)| !f.is_zero()).collect();
    let polynomial = coeffs.iter().all(|c| c.to_poly().is_some());
    let holds = consistent
        && residual.is_empty()
        && (polynomial || opts.coefficient_ring == CoefficientRing::Fraction);
    let consumed = names
        .iter()
        .zip(&coeffs)
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, _)| n.clone())
        .collect();
    ModuloOutcome {
        holds,
        consistent,
        polynomial,
        coefficients: names.into_iter().zip(coeffs).collect(),
        nullspace,
        residual,
        discarded,
        free,
        consumed,
    }
}

/// Result of eliminating symbols from an axiom set.
#[derive(Clone, Debug)]
pub struct Elimination {
    /// Relations left after elimination, free of the eliminated symbols.
    pub derived: Vec<(String, FormalElement)>,
    pub outcome: ModuloOutcome,
}

/// Eliminates `eliminate` (each occurring only as a bare symbol) from the
/// axioms by fraction-free row operations, then checks the claim against the
/// derived relations modulo lower degree.
pub fn eliminate_and_verify(
    basis: &Basis,
    axioms: &AxiomSet,
    eliminate: &[String],
    claim: &Identity,
    opts: &ModuloOptions,
) -> Result<Elimination> {
    let mut eqs: Vec<(String, FormalElement)> = axioms.axioms.iter().map(|a| (a.name.clone(), a.relation())).collect();
    for sym in eliminate {
        let w: Word = vec![sym.clone()];
        for (name, e) in &eqs {
            let (_, linear) = e.occurrence(sym);
            if !linear {
                return Err(AlgebraError::Other(format!("`{}` occurs non-linearly in {}", sym, name)));
            }
        }
        let Some(pi) = eqs.iter().position(|(_, e)| !e.coeff(&w).is_zero()) else {
            return Err(AlgebraError::Other(format!("elimination singular: `{}` occurs in no remaining relation", sym)));
        };
        let (pname, pivot) = eqs.remove(pi);
        let a = pivot.coeff(&w);
        eqs = eqs
            .into_iter()
            .map(|(n, e)| {
                let b = e.coeff(&w);
                if b.is_zero() {
                    (n, e)
                } else {
                    (format!("{}[{}]", n, pname), &e.scale(&a) - &pivot.scale(&b))
                }
            })
            .collect();
    }
    let derived_set = AxiomSet {
        axioms: eqs
            .iter()
            .map(|(n, e)| Axiom { name: n.clone(), lhs: e.clone(), rhs: FormalElement::zero(), provenance: Provenance::Text })
            .collect(),
        lower_degree_bound: axioms.lower_degree_bound,
    };
    let outcome = check_identity_modulo(basis, claim, &derived_set, opts);
    Ok(Elimination { derived: eqs, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn triple_product_setup() -> (Basis, AxiomSet, Identity) {
        let basis = Basis::from_pairs(&[
            ("t1", 0), ("t2", 0), ("t3", 0), ("t4", 0),
            ("t12", 2), ("t13", 2), ("t14", 2), ("t23", 2), ("t34", 2),
            ("t123", 3), ("t124", 3), ("t134", 3), ("t234", 3), ("t1234", 4),
            ("t12b134", 5), ("t123b14", 5), ("t12b14", 4),
        ])
        .unwrap();
        let ax = |n: &str, l: &str, r: &str| Axiom {
            name: n.into(),
            lhs: basis.parse(l).unwrap(),
            rhs: basis.parse(r).unwrap(),
            provenance: Provenance::Figure,
        };
        let axioms = AxiomSet {
            axioms: vec![
                ax("p1", "t12*t134", "q*t234 + qb*t12b134 + t1*t1234 + t2*t34"),
                ax("p2", "t14*t123", "q*t123b14 + qb*t234 + t1*t1234 + t4*t23"),
                ax("p3", "t13*t124", "q*t12b134 + qb*t123b14 + t1*t1234 + t3*t12b14"),
            ],
            lower_degree_bound: 5,
        };
        let claim = Identity { lhs: basis.parse("t13*t124").unwrap(), rhs: basis.parse("q^2*t12*t134 + qb^2*t14*t123").unwrap() };
        (basis, axioms, claim)
    }

    #[test]
    fn words_do_not_commute() {
        let b = Basis::from_pairs(&[("x", 1), ("y", 1)]).unwrap();
        let e = b.parse("x*y - y*x").unwrap();
        assert!(!e.is_zero());
        assert!(b.parse("2*x*t - x*t*2").unwrap().is_zero());
    }

    #[test]
    fn basic_reduce_by_elimination() {
        let (basis, axioms, claim) = triple_product_setup();
        let el = eliminate_and_verify(&basis, &axioms, &["t12b134".into(), "t123b14".into()], &claim, &ModuloOptions::default())
            .unwrap();
        assert!(el.outcome.holds, "{}", el.outcome.to_json());
        assert_eq!(el.derived.len(), 1);
        let t234 = el.outcome.discarded.iter().find(|(w, _)| w == "t234").unwrap();
        assert_eq!(t234.1.to_poly().unwrap(), parse_poly("-q^3 - qb^3").unwrap());
    }

    #[test]
    fn elimination_order_does_not_matter() {
        let (basis, axioms, claim) = triple_product_setup();
        let o = ModuloOptions::default();
        let a = eliminate_and_verify(&basis, &axioms, &["t12b134".into(), "t123b14".into()], &claim, &o).unwrap();
        let b = eliminate_and_verify(&basis, &axioms, &["t123b14".into(), "t12b134".into()], &claim, &o).unwrap();
        assert_eq!(a.outcome.holds, b.outcome.holds);
    }

    #[test]
    fn barred_degree_choice_does_not_change_verdict() {
        let (basis, axioms, claim) = triple_product_setup();
        let b3 = basis.with_degree("t12b14", 3);
        let el = eliminate_and_verify(&b3, &axioms, &["t12b134".into(), "t123b14".into()], &claim, &ModuloOptions::default())
            .unwrap();
        assert!(el.outcome.holds);
    }

    #[test]
    fn eliminating_nothing_returns_axioms() {
        let (basis, axioms, _) = triple_product_setup();
        let claim = Identity { lhs: axioms.axioms[0].lhs.clone(), rhs: axioms.axioms[0].rhs.clone() };
        let el = eliminate_and_verify(&basis, &axioms, &[], &claim, &ModuloOptions::default()).unwrap();
        assert_eq!(el.derived.len(), 3);
        assert_eq!(el.derived[0].1, axioms.axioms[0].relation());
        assert!(el.outcome.holds);
    }

    #[test]
    fn wrong_claim_reports_residual() {
        let (basis, axioms, _) = triple_product_setup();
        let claim = Identity { lhs: basis.parse("t13*t124").unwrap(), rhs: basis.parse("q^2*t12*t134").unwrap() };
        let el = eliminate_and_verify(&basis, &axioms, &["t12b134".into(), "t123b14".into()], &claim, &ModuloOptions::default())
            .unwrap();
        assert!(!el.outcome.holds);
        assert!(!el.outcome.residual.is_empty());
    }

    #[test]
    fn zero_claim_with_no_axioms() {
        let b = Basis::default();
        let claim = Identity { lhs: FormalElement::zero(), rhs: FormalElement::zero() };
        assert!(check_identity_modulo(&b, &claim, &AxiomSet::default(), &ModuloOptions::default()).holds);
    }

    #[test]
    fn fraction_coefficients_need_opt_in() {
        let b = Basis::from_pairs(&[("x", 1)]).unwrap();
        let axioms = AxiomSet {
            axioms: vec![Axiom { name: "a".into(), lhs: b.parse("r*x").unwrap(), rhs: b.parse("0").unwrap(), provenance: Provenance::Text }],
            lower_degree_bound: 0,
        };
        let claim = Identity { lhs: b.parse("x").unwrap(), rhs: FormalElement::zero() };
        let strict = check_identity_modulo(&b, &claim, &axioms, &ModuloOptions::default());
        assert!(strict.consistent && !strict.holds);
        let loose = ModuloOptions { coefficient_ring: CoefficientRing::Fraction, ..Default::default() };
        assert!(check_identity_modulo(&b, &claim, &axioms, &loose).holds);
    }

    #[test]
    fn split_vars_keep_coefficients_free_of_them() {
        // with r1 split off, the needed coefficient r1 is not allowed
        let b = Basis::from_pairs(&[("x", 1)]).unwrap();
        let axioms = AxiomSet {
            axioms: vec![Axiom { name: "a".into(), lhs: b.parse("x").unwrap(), rhs: FormalElement::zero(), provenance: Provenance::Text }],
            lower_degree_bound: 0,
        };
        let claim = Identity { lhs: b.parse("r1*x").unwrap(), rhs: FormalElement::zero() };
        assert!(check_identity_modulo(&b, &claim, &axioms, &ModuloOptions::default()).holds);
        let split = ModuloOptions { split_vars: vec![Var::R1], ..Default::default() };
        assert!(!check_identity_modulo(&b, &claim, &axioms, &split).holds);
    }
}
