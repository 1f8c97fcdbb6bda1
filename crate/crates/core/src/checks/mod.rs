//! Check registry, run configuration and report emission.
//!
//! Checks are grouped into suites and executed as independent tasks on a
//! thread pool. A task that panics becomes a `fail` result; it never takes
//! the run down. Results are sorted by id, so a report depends only on the
//! configuration and the manifests (apart from timings).

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::character::{self, CharacterConfig, Mode};
use crate::error::AlgebraError;
use crate::manifest::{self, ManifestCheck, ManifestSource};
use crate::report::{CheckResult, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Families,
    Matrix,
    Elimination,
    Chains,
    Reduction,
    Quotient,
    Character,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Families,
        Suite::Matrix,
        Suite::Elimination,
        Suite::Chains,
        Suite::Reduction,
        Suite::Quotient,
        Suite::Character,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Families => "families",
            Suite::Matrix => "matrix",
            Suite::Elimination => "elimination",
            Suite::Chains => "chains",
            Suite::Reduction => "reduction",
            Suite::Quotient => "quotient",
            Suite::Character => "character",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = RunError;
    fn from_str(s: &str) -> Result<Self, RunError> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| RunError::Config(format!("unknown suite `{}`", s)))
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("manifest error: {0}")]
    Manifest(#[from] AlgebraError),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub suites: BTreeSet<Suite>,
    pub kmax: i64,
    pub nmax: u32,
    pub n_values: Vec<i64>,
    pub mode: Mode,
    pub precision: u32,
    pub parallelism: usize,
    /// Manifest files or directories; empty means the default set.
    pub manifest_paths: Vec<PathBuf>,
    pub seed: u64,
    /// Shuffles task order before execution.
    pub shuffle: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            suites: Suite::ALL.into_iter().collect(),
            kmax: 6,
            nmax: 6,
            n_values: vec![1, 3],
            mode: Mode::Exact,
            precision: character::MIN_PRECISION,
            parallelism: std::thread::available_parallelism().map_or(1, |n| n.get()),
            manifest_paths: Vec::new(),
            seed: 7,
            shuffle: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), RunError> {
        let bad = |m: String| Err(RunError::Config(m));
        if self.kmax < 4 {
            return bad(format!("kmax must be at least 4, got {}", self.kmax));
        }
        if self.nmax < 3 {
            return bad(format!("nmax must be at least 3, got {}", self.nmax));
        }
        if let Some(n) = self.n_values.iter().find(|&&n| character::check_n(n).is_err()) {
            return bad(format!("n must be odd and positive, got {}", n));
        }
        if self.parallelism == 0 {
            return bad("parallelism must be positive".into());
        }
        if self.precision < character::MIN_PRECISION {
            return bad(format!("precision must be at least {} bits", character::MIN_PRECISION));
        }
        Ok(())
    }

    fn manifest_sources(&self) -> Result<Vec<ManifestSource>, RunError> {
        Ok(if self.manifest_paths.is_empty() {
            manifest::default_sources()?
        } else {
            manifest::sources_from_paths(&self.manifest_paths)?
        })
    }
}

type TaskFn = Box<dyn Fn() -> Vec<CheckResult> + Send + Sync>;

struct Task {
    name: String,
    suite: Suite,
    run: TaskFn,
}

fn task(name: impl Into<String>, suite: Suite, run: impl Fn() -> Vec<CheckResult> + Send + Sync + 'static) -> Task {
    Task { name: name.into(), suite, run: Box::new(run) }
}

fn tasks(cfg: &RunConfig, manifests: Vec<ManifestCheck>) -> Vec<Task> {
    let mut out = Vec::new();
    let on = |s: Suite| cfg.suites.contains(&s);
    if on(Suite::Families) {
        let (k, n) = (cfg.kmax, cfg.nmax);
        out.push(task("families", Suite::Families, move || crate::families::verify_family_identities(k, n)));
    }
    if on(Suite::Matrix) {
        let (k, n) = (cfg.kmax as u32, cfg.nmax);
        out.push(task("matrix", Suite::Matrix, move || crate::calculus::action::verify_matrix_calculus(k, n)));
    }
    for m in manifests {
        let suite = Suite::from_str(&m.suite).unwrap_or(Suite::Chains);
        if on(suite) {
            out.push(task(format!("manifest:{}", m.check_id), suite, move || vec![m.run()]));
        }
    }
    if on(Suite::Chains) {
        out.push(task("closure", Suite::Chains, crate::reduction::product_closure::verify_product_closure));
    }
    if on(Suite::Reduction) {
        out.push(task("reduction", Suite::Reduction, crate::reduction::cases::verify_reduction));
    }
    if on(Suite::Quotient) {
        out.push(task("quotient", Suite::Quotient, crate::reduction::quotient::verify_quotient_basis));
    }
    if on(Suite::Character) {
        for &n in &cfg.n_values {
            let cc = CharacterConfig {
                n_values: vec![n],
                mode: cfg.mode,
                precision: cfg.precision,
                seed: cfg.seed,
                ..Default::default()
            };
            out.push(task(format!("character.n{}", n), Suite::Character, move || character::verify_character(&cc)));
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub flagged: usize,
}

impl Summary {
    pub fn of(results: &[CheckResult]) -> Self {
        let count = |s: Status| results.iter().filter(|r| r.status == s).count();
        Summary { pass: count(Status::Pass), fail: count(Status::Fail), flagged: count(Status::Flagged) }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    pub version: String,
    pub manifest_hash: String,
    pub results: Vec<CheckResult>,
    pub summary: Summary,
}

impl Report {
    /// 0 when nothing failed (flagged results do not fail a run), else 1.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            1
        } else {
            0
        }
    }

    pub fn flagged(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| r.status == Status::Flagged)
    }

    /// The report with every timing zeroed, for comparing runs.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for x in &mut r.results {
            x.runtime_ms = 0;
        }
        r
    }
}

/// One executed task, for the `--trace` output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceEvent {
    pub task: String,
    pub suite: Suite,
    pub thread: Option<usize>,
    pub start_ms: u64,
    pub runtime_ms: u64,
    pub checks: Vec<String>,
    pub panicked: bool,
}

fn panic_message(p: &(dyn std::any::Any + Send)) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic".into())
}

pub fn run_suite(cfg: &RunConfig) -> Result<Report, RunError> {
    run_suite_traced(cfg).map(|(r, _)| r)
}

pub fn run_suite_traced(cfg: &RunConfig) -> Result<(Report, Vec<TraceEvent>), RunError> {
    cfg.validate()?;
    let sources = cfg.manifest_sources()?;
    let manifests = manifest::parse_sources(&sources)?;
    let mut work = tasks(cfg, manifests);
    if let Some(seed) = cfg.shuffle {
        work.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| RunError::Config(e.to_string()))?;
    let origin = Instant::now();
    let done: Vec<(Vec<CheckResult>, TraceEvent)> = pool.install(|| {
        work.par_iter()
            .map(|t| {
                let start = origin.elapsed().as_millis() as u64;
                let clock = Instant::now();
                let (results, panicked) = match catch_unwind(AssertUnwindSafe(|| (t.run)())) {
                    Ok(r) => (r, false),
                    Err(p) => {
                        let id = format!("{}.task.{}", t.suite, t.name);
                        (vec![CheckResult::fail(id, "", json!({"panic": panic_message(p.as_ref())}))], true)
                    }
                };
                let ev = TraceEvent {
                    task: t.name.clone(),
                    suite: t.suite,
                    thread: rayon::current_thread_index(),
                    start_ms: start,
                    runtime_ms: clock.elapsed().as_millis() as u64,
                    checks: results.iter().map(|r| r.check_id.clone()).collect(),
                    panicked,
                };
                (results, ev)
            })
            .collect()
    });
    let mut results = Vec::new();
    let mut trace = Vec::new();
    for (r, ev) in done {
        results.extend(r);
        trace.push(ev);
    }
    results.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    trace.sort_by_key(|e| e.start_ms);
    let summary = Summary::of(&results);
    let report = Report {
        config: cfg.clone(),
        version: env!("CARGO_PKG_VERSION").into(),
        manifest_hash: manifest::sources_hash(&sources),
        results,
        summary,
    };
    Ok((report, trace))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

impl FromStr for Format {
    type Err = RunError;
    fn from_str(s: &str) -> Result<Self, RunError> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(RunError::Config(format!("unknown report format `{}`", s))),
        }
    }
}

pub fn render_json(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

/// One line per check, then the summary and the flagged checks again.
pub fn render_text(report: &Report) -> String {
    let width = report.results.iter().map(|r| r.check_id.len()).max().unwrap_or(5).max(5);
    let mut s = format!("{:<7}  {:>8}  {:<width$}  anchor\n", "status", "ms", "check", width = width);
    for r in &report.results {
        let anchor: String = r.paper_anchor.chars().take(60).collect();
        s += &format!("{:<7}  {:>8}  {:<width$}  {}\n", r.status, r.runtime_ms, r.check_id, anchor, width = width);
    }
    let Summary { pass, fail, flagged } = &report.summary;
    s += &format!("\nsummary: {} pass, {} fail, {} flagged\n", pass, fail, flagged);
    let flagged: Vec<&CheckResult> = report.flagged().collect();
    if !flagged.is_empty() {
        s += "\nflagged:\n";
        for r in flagged {
            let note = r.details.get("discrepancy").or_else(|| r.details.get("note")).and_then(|v| v.as_str()).unwrap_or("");
            s += &format!("  {}  {}\n", r.check_id, note);
        }
    }
    s
}

fn write_out(text: &str, out: Option<&Path>) -> Result<(), RunError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| RunError::Io { path: p.display().to_string(), msg: e.to_string() }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| RunError::Io { path: "<stdout>".into(), msg: e.to_string() }),
    }
}

/// Writes the report to `out`, or to standard output.
pub fn emit_report(report: &Report, format: Format, out: Option<&Path>) -> Result<(), RunError> {
    let text = match format {
        Format::Json => render_json(report),
        Format::Text => render_text(report),
    };
    write_out(&text, out)
}

pub fn emit_trace(events: &[TraceEvent], out: &Path) -> Result<(), RunError> {
    let text = serde_json::to_string_pretty(events).expect("trace serializes");
    write_out(&text, Some(out))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListedCheck {
    pub check_id: String,
    pub suite: Suite,
    pub anchor: String,
}

#[derive(Deserialize)]
struct CatalogEntry {
    suite: Suite,
    check_id: String,
    anchor: String,
}

/// Ids of the checks implemented in code. `{n}` expands over `n_values`.
const CATALOG: &str = include_str!("catalog.json");

/// Every check the configuration would run, sorted by id, without running
/// anything.
pub fn list_checks(cfg: &RunConfig) -> Result<Vec<ListedCheck>, RunError> {
    cfg.validate()?;
    let catalog: Vec<CatalogEntry> = serde_json::from_str(CATALOG).expect("catalog parses");
    let mut out = Vec::new();
    for e in catalog.into_iter().filter(|e| cfg.suites.contains(&e.suite)) {
        if e.check_id.contains("{n}") {
            for n in &cfg.n_values {
                let id = e.check_id.replace("{n}", &n.to_string());
                out.push(ListedCheck { check_id: id, suite: e.suite, anchor: e.anchor.clone() });
            }
        } else {
            out.push(ListedCheck { check_id: e.check_id, suite: e.suite, anchor: e.anchor });
        }
    }
    for m in manifest::parse_sources(&cfg.manifest_sources()?)? {
        let suite = Suite::from_str(&m.suite).unwrap_or(Suite::Chains);
        if cfg.suites.contains(&suite) {
            out.push(ListedCheck { check_id: m.check_id, suite, anchor: m.anchor });
        }
    }
    out.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> RunConfig {
        RunConfig { n_values: vec![1], parallelism: 4, ..Default::default() }
    }

    #[test]
    fn catalog_matches_a_run() {
        let cfg = quick();
        let ran: Vec<String> = run_suite(&cfg).unwrap().results.into_iter().map(|r| r.check_id).collect();
        let listed: Vec<String> = list_checks(&cfg).unwrap().into_iter().map(|c| c.check_id).collect();
        assert_eq!(ran, listed);
    }

    #[test]
    fn order_and_parallelism_do_not_change_results() {
        let base = run_suite(&RunConfig { parallelism: 1, ..quick() }).unwrap().without_timings();
        for seed in [1, 2] {
            let cfg = RunConfig { shuffle: Some(seed), ..quick() };
            let r = run_suite(&cfg).unwrap().without_timings();
            assert_eq!(
                serde_json::to_value(&r.results).unwrap(),
                serde_json::to_value(&base.results).unwrap()
            );
        }
    }

    #[test]
    fn suite_filter() {
        let cfg = RunConfig { suites: [Suite::Quotient].into_iter().collect(), ..quick() };
        let r = run_suite(&cfg).unwrap();
        assert!(!r.results.is_empty());
        assert!(r.results.iter().all(|x| x.check_id.starts_with("quotient.")));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn invalid_config_is_rejected() {
        assert!(RunConfig { n_values: vec![2], ..quick() }.validate().is_err());
        assert!(RunConfig { kmax: 1, ..quick() }.validate().is_err());
        assert!(RunConfig { parallelism: 0, ..quick() }.validate().is_err());
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn text_report_lists_flagged() {
        let r = run_suite(&quick()).unwrap();
        let text = render_text(&r);
        assert!(text.contains("summary:"));
        assert_eq!(r.flagged().count() > 0, text.contains("\nflagged:\n"));
    }
}
