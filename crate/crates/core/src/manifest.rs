//! Manifest-driven identity checks.
//!
//! A manifest is a JSON file `{"checks": [...]}`. Each entry declares a
//! graded basis, named axioms with provenance, and a claim; optional integer
//! parameters expand the entry into several cases. Placeholders `{expr}`,
//! where `expr` is integer arithmetic over the parameters, are substituted
//! textually before parsing.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{json, Value};

use crate::calculus::{
    check_identity_modulo, eliminate_and_verify, Axiom, AxiomSet, Basis, BasisSymbol, CoefficientRing, FreeRows,
    Identity, ModuloOptions, ModuloOutcome, Provenance,
};
use crate::error::{AlgebraError, Result};
use crate::mpoly::Var;
use crate::report::{timed, CheckResult, Status};

/// Manifests compiled into the library.
pub const BUILTIN: &[(&str, &str)] = &[
    ("basic.json", include_str!("../manifests/basic.json")),
    ("relators.json", include_str!("../manifests/relators.json")),
    ("product_closure.json", include_str!("../manifests/product_closure.json")),
    ("final.json", include_str!("../manifests/final.json")),
];

/// Environment variable naming a directory whose `*.json` files replace the
/// built-in manifests.
pub const DIR_ENV: &str = "SKEINLAB_MANIFEST_DIR";

/// Suite a manifest file belongs to when it does not name one.
pub const DEFAULT_SUITE: &str = "chains";

fn default_suite() -> String {
    DEFAULT_SUITE.into()
}

#[derive(Clone, Debug, Deserialize)]
pub struct ManifestFile {
    #[serde(default = "default_suite")]
    pub suite: String,
    pub checks: Vec<ManifestCheck>,
}

/// Raw manifest text with the name it was loaded under.
#[derive(Clone, Debug)]
pub struct ManifestSource {
    pub name: String,
    pub text: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ManifestCheck {
    pub check_id: String,
    /// Filled in from the enclosing file.
    #[serde(skip)]
    pub suite: String,
    #[serde(default)]
    pub anchor: String,
    #[serde(default)]
    pub params: BTreeMap<String, Vec<i64>>,
    pub basis: Vec<BasisSymbol>,
    #[serde(default)]
    pub axioms: Vec<AxiomSpec>,
    pub claim: ClaimSpec,
    #[serde(default)]
    pub lower_degree_bound: i32,
    #[serde(default)]
    pub eliminate: Vec<String>,
    #[serde(default)]
    pub split_vars: Vec<String>,
    #[serde(default)]
    pub coefficient_ring: CoefficientRing,
    #[serde(default)]
    pub free: Option<FreeSpec>,
    /// Explicit coefficients, one per expanded axiom, checked instead of solved for.
    #[serde(default)]
    pub combination: Option<Vec<String>>,
    /// A known, documented mismatch: a failing claim is reported as flagged.
    #[serde(default)]
    pub discrepancy: Option<String>,
    /// Another plausible grading of some basis symbols. The check is rerun
    /// with it and flagged if the verdict changes.
    #[serde(default)]
    pub alternative_degrees: BTreeMap<String, i32>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct AxiomSpec {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub provenance: Provenance,
    #[serde(default, rename = "for")]
    pub range: Option<RangeSpec>,
}

/// Repeats an axiom for `var` in `from..below`.
#[derive(Clone, Debug, Deserialize)]
pub struct RangeSpec {
    pub var: String,
    pub from: String,
    pub below: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ClaimSpec {
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct FreeSpec {
    pub var: String,
    pub below: String,
    pub words: Vec<String>,
}

pub fn parse_manifest(src: &str) -> Result<ManifestFile> {
    let mut m: ManifestFile = serde_json::from_str(src)
        .map_err(|e| AlgebraError::Parse { line: e.line(), col: e.column(), msg: e.to_string() })?;
    for c in &mut m.checks {
        c.suite = m.suite.clone();
    }
    Ok(m)
}

pub fn builtin_sources() -> Vec<ManifestSource> {
    BUILTIN.iter().map(|(n, t)| ManifestSource { name: n.to_string(), text: t.to_string() }).collect()
}

/// Sources from files and directories (every `*.json` inside, sorted).
pub fn sources_from_paths(paths: &[PathBuf]) -> Result<Vec<ManifestSource>> {
    let io = |p: &Path, e: std::io::Error| AlgebraError::Other(format!("{}: {}", p.display(), e));
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut inner: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| io(p, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "json"))
                .collect();
            inner.sort();
            files.extend(inner);
        } else {
            files.push(p.clone());
        }
    }
    files
        .into_iter()
        .map(|f| {
            let text = std::fs::read_to_string(&f).map_err(|e| io(&f, e))?;
            Ok(ManifestSource { name: f.display().to_string(), text })
        })
        .collect()
}

/// The directory named by [`DIR_ENV`] if set, otherwise the built-ins.
pub fn default_sources() -> Result<Vec<ManifestSource>> {
    match std::env::var_os(DIR_ENV) {
        Some(dir) => sources_from_paths(&[PathBuf::from(dir)]),
        None => Ok(builtin_sources()),
    }
}

pub fn parse_sources(sources: &[ManifestSource]) -> Result<Vec<ManifestCheck>> {
    let mut out = Vec::new();
    for s in sources {
        let m = parse_manifest(&s.text).map_err(|e| match e {
            AlgebraError::Parse { line, col, msg } => AlgebraError::Parse { line, col, msg: format!("{}: {}", s.name, msg) },
            e => e,
        })?;
        out.extend(m.checks);
    }
    Ok(out)
}

/// SHA-256 over the names and contents, in order.
pub fn sources_hash(sources: &[ManifestSource]) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    for s in sources {
        h.update(s.name.as_bytes());
        h.update([0]);
        h.update(s.text.as_bytes());
        h.update([0]);
    }
    h.finalize().iter().map(|b| format!("{:02x}", b)).collect()
}

pub fn load_manifests() -> Result<Vec<ManifestCheck>> {
    parse_sources(&default_sources()?)
}

pub fn load_dir(dir: &Path) -> Result<Vec<ManifestCheck>> {
    parse_sources(&sources_from_paths(&[dir.to_path_buf()])?)
}

/// Evaluates integer arithmetic (`+ - *`, parentheses) over `env`.
pub fn eval_int(src: &str, env: &BTreeMap<String, i64>) -> Result<i64> {
    let toks: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let v = int_sum(&toks, &mut pos, env)?;
    if pos != toks.len() {
        return Err(AlgebraError::Other(format!("bad template expression `{}`", src)));
    }
    Ok(v)
}

fn int_sum(t: &[char], pos: &mut usize, env: &BTreeMap<String, i64>) -> Result<i64> {
    let mut acc = int_prod(t, pos, env)?;
    while *pos < t.len() && (t[*pos] == '+' || t[*pos] == '-') {
        let neg = t[*pos] == '-';
        *pos += 1;
        let v = int_prod(t, pos, env)?;
        acc = if neg { acc - v } else { acc + v };
    }
    Ok(acc)
}

fn int_prod(t: &[char], pos: &mut usize, env: &BTreeMap<String, i64>) -> Result<i64> {
    let mut acc = int_atom(t, pos, env)?;
    while *pos < t.len() && t[*pos] == '*' {
        *pos += 1;
        acc *= int_atom(t, pos, env)?;
    }
    Ok(acc)
}

fn int_atom(t: &[char], pos: &mut usize, env: &BTreeMap<String, i64>) -> Result<i64> {
    let bad = || AlgebraError::Other(format!("bad template expression `{}`", t.iter().collect::<String>()));
    let c = *t.get(*pos).ok_or_else(bad)?;
    if c == '-' {
        *pos += 1;
        return Ok(-int_atom(t, pos, env)?);
    }
    if c == '(' {
        *pos += 1;
        let v = int_sum(t, pos, env)?;
        if t.get(*pos) != Some(&')') {
            return Err(bad());
        }
        *pos += 1;
        return Ok(v);
    }
    let start = *pos;
    while *pos < t.len() && (t[*pos].is_ascii_alphanumeric() || t[*pos] == '_') {
        *pos += 1;
    }
    let word: String = t[start..*pos].iter().collect();
    if word.is_empty() {
        return Err(bad());
    }
    if let Ok(v) = word.parse::<i64>() {
        return Ok(v);
    }
    env.get(&word).copied().ok_or_else(|| AlgebraError::Other(format!("unknown template parameter `{}`", word)))
}

/// Replaces every `{expr}` in `src`.
pub fn substitute(src: &str, env: &BTreeMap<String, i64>) -> Result<String> {
    let mut out = String::with_capacity(src.len());
    let mut rest = src;
    while let Some(i) = rest.find('{') {
        out.push_str(&rest[..i]);
        let j = rest[i..].find('}').ok_or_else(|| AlgebraError::Other(format!("unclosed `{{` in `{}`", src)))? + i;
        out.push_str(&eval_int(&rest[i + 1..j], env)?.to_string());
        rest = &rest[j + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

fn var_of(name: &str) -> Result<Var> {
    Var::from_name(name).ok_or_else(|| AlgebraError::Other(format!("unknown variable `{}`", name)))
}

/// Every assignment of the parameters, in lexicographic order.
fn assignments(params: &BTreeMap<String, Vec<i64>>) -> Vec<BTreeMap<String, i64>> {
    let mut out = vec![BTreeMap::new()];
    for (k, vals) in params {
        out = out
            .into_iter()
            .flat_map(|env| {
                vals.iter().map(move |v| {
                    let mut e = env.clone();
                    e.insert(k.clone(), *v);
                    e
                })
            })
            .collect();
    }
    out
}

/// One instantiated case of a manifest entry.
pub struct Case {
    pub basis: Basis,
    pub axioms: AxiomSet,
    pub claim: Identity,
    pub opts: ModuloOptions,
    pub eliminate: Vec<String>,
}

impl ManifestCheck {
    pub fn instantiate(&self, env: &BTreeMap<String, i64>) -> Result<Case> {
        let basis = Basis::new(self.basis.clone())?;
        let parse = |s: &str, env: &BTreeMap<String, i64>| basis.parse(&substitute(s, env)?);
        let mut axioms = Vec::new();
        for a in &self.axioms {
            let envs = match &a.range {
                None => vec![env.clone()],
                Some(r) => {
                    let (lo, hi) = (eval_int(&substitute(&r.from, env)?, env)?, eval_int(&substitute(&r.below, env)?, env)?);
                    (lo..hi)
                        .map(|j| {
                            let mut e = env.clone();
                            e.insert(r.var.clone(), j);
                            e
                        })
                        .collect()
                }
            };
            for e in envs {
                axioms.push(Axiom {
                    name: substitute(&a.name, &e)?,
                    lhs: parse(&a.lhs, &e)?,
                    rhs: parse(&a.rhs, &e)?,
                    provenance: a.provenance,
                });
            }
        }
        let claim = Identity { lhs: parse(&self.claim.lhs, env)?, rhs: parse(&self.claim.rhs, env)? };
        let free = match &self.free {
            None => None,
            Some(f) => Some(FreeRows {
                var: var_of(&f.var)?,
                below: eval_int(&substitute(&f.below, env)?, env)? as i32,
                words: f.words.iter().map(|w| w.split('*').map(str::to_string).collect()).collect(),
            }),
        };
        let opts = ModuloOptions {
            split_vars: self.split_vars.iter().map(|v| var_of(&substitute(v, env)?)).collect::<Result<_>>()?,
            coefficient_ring: self.coefficient_ring,
            combination: match &self.combination {
                None => None,
                Some(cs) => {
                    if cs.len() != axioms.len() {
                        return Err(AlgebraError::Other(format!(
                            "{}: {} combination coefficients for {} axioms",
                            self.check_id,
                            cs.len(),
                            axioms.len()
                        )));
                    }
                    Some(cs.iter().map(|c| crate::parse::parse_poly(&substitute(c, env)?)).collect::<Result<_>>()?)
                }
            },
            free,
        };
        Ok(Case {
            basis,
            axioms: AxiomSet { axioms, lower_degree_bound: self.lower_degree_bound },
            claim,
            opts,
            eliminate: self.eliminate.clone(),
        })
    }

    pub fn cases(&self) -> Vec<BTreeMap<String, i64>> {
        assignments(&self.params)
    }

    fn evaluate(&self) -> (bool, Vec<Value>) {
        let mut cases = Vec::new();
        let mut all = true;
        for env in self.cases() {
            let (ok, detail) = match self.run_case(&env) {
                Ok((o, derived)) => {
                    let mut d = o.to_json();
                    if let Some(x) = derived {
                        d["derived"] = x;
                    }
                    (o.holds, d)
                }
                Err(e) => (false, json!({"error": e.to_string()})),
            };
            all &= ok;
            cases.push(json!({"params": env, "holds": ok, "outcome": detail}));
        }
        (all, cases)
    }

    fn regraded(&self) -> ManifestCheck {
        let mut c = self.clone();
        for b in &mut c.basis {
            if let Some(&d) = self.alternative_degrees.get(&b.name) {
                b.degree = d;
            }
        }
        c.alternative_degrees.clear();
        c
    }

    /// Runs every case; a case that cannot be set up is a failure, not a panic.
    pub fn run(&self) -> CheckResult {
        timed(|| {
            let (all, cases) = self.evaluate();
            let mut status = match (all, &self.discrepancy) {
                (true, _) => Status::Pass,
                (false, Some(_)) => Status::Flagged,
                (false, None) => Status::Fail,
            };
            let mut details = json!({"cases": cases});
            if let (false, Some(d)) = (all, &self.discrepancy) {
                details["discrepancy"] = json!(d);
            }
            if !self.alternative_degrees.is_empty() {
                let (alt, alt_cases) = self.regraded().evaluate();
                details["alternative_grading"] =
                    json!({"degrees": self.alternative_degrees, "holds": alt, "cases": alt_cases});
                if alt != all {
                    status = Status::Flagged;
                    details["discrepancy"] = json!(format!(
                        "the verdict depends on the grading: {} as given, {} with {:?}",
                        all, alt, self.alternative_degrees
                    ));
                }
            }
            CheckResult::new(self.check_id.clone(), status, self.anchor.clone(), details)
        })
    }

    fn run_case(&self, env: &BTreeMap<String, i64>) -> Result<(ModuloOutcome, Option<Value>)> {
        let c = self.instantiate(env)?;
        if c.eliminate.is_empty() {
            return Ok((check_identity_modulo(&c.basis, &c.claim, &c.axioms, &c.opts), None));
        }
        let el = eliminate_and_verify(&c.basis, &c.axioms, &c.eliminate, &c.claim, &c.opts)?;
        let derived = el.derived.iter().map(|(n, e)| json!({"name": n, "relation": e.to_json()})).collect();
        Ok((el.outcome, Some(Value::Array(derived))))
    }
}

/// Runs every loaded manifest entry. A manifest that fails to load yields a
/// single failing result.
pub fn verify_manifests() -> Vec<CheckResult> {
    match load_manifests() {
        Ok(ms) => ms.iter().map(ManifestCheck::run).collect(),
        Err(e) => vec![CheckResult::fail("manifest.load", "", json!({"error": e.to_string()}))],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(pairs: &[(&str, i64)]) -> BTreeMap<String, i64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn templates() {
        let e = env(&[("k", 3), ("n", 1)]);
        assert_eq!(eval_int("2*k+2", &e).unwrap(), 8);
        assert_eq!(eval_int("-(k-n)*2", &e).unwrap(), -4);
        assert_eq!(substitute("r1^{k+2}*q^{2*k}", &e).unwrap(), "r1^5*q^6");
        assert!(substitute("{m}", &e).is_err());
        assert!(substitute("{k", &e).is_err());
    }

    #[test]
    fn parameter_grid() {
        let mut p = BTreeMap::new();
        p.insert("a".to_string(), vec![0, 1]);
        p.insert("b".to_string(), vec![5, 6, 7]);
        assert_eq!(assignments(&p).len(), 6);
        assert_eq!(assignments(&BTreeMap::new()).len(), 1);
    }

    #[test]
    fn builtin_manifests_parse() {
        for (name, src) in BUILTIN {
            let m = parse_manifest(src).unwrap_or_else(|e| panic!("{}: {}", name, e));
            for c in &m.checks {
                for e in c.cases() {
                    c.instantiate(&e).unwrap_or_else(|err| panic!("{} {:?}: {}", c.check_id, e, err));
                }
            }
        }
    }

    #[test]
    fn failing_claim_without_discrepancy_fails() {
        let src = r#"{"checks":[{"check_id":"x","basis":[{"name":"a","degree":1}],
            "claim":{"lhs":"a","rhs":"2*a"}}]}"#;
        let m = parse_manifest(src).unwrap();
        assert_eq!(m.checks[0].run().status, Status::Fail);
        let src = src.replace(r#""check_id":"x","#, r#""check_id":"x","discrepancy":"known","#);
        let m = parse_manifest(&src).unwrap();
        assert_eq!(m.checks[0].run().status, Status::Flagged);
    }

    #[test]
    fn ranged_axioms_expand() {
        let src = r#"{"checks":[{"check_id":"x","params":{"k":[3]},
            "basis":[{"name":"a","degree":1}],
            "axioms":[{"name":"ax{j}","lhs":"r^{j}*a","rhs":"0","provenance":"text",
                       "for":{"var":"j","from":"0","below":"{k}"}}],
            "claim":{"lhs":"(r^2+r)*a","rhs":"0"},"split_vars":["r"]}]}"#;
        let m = parse_manifest(src).unwrap();
        let c = m.checks[0].instantiate(&env(&[("k", 3)])).unwrap();
        assert_eq!(c.axioms.axioms.len(), 3);
        assert_eq!(m.checks[0].run().status, Status::Pass);
    }
}
