use std::fs;

use skeinlab::checks::{run_suite, RunConfig, RunError, Suite};
use skeinlab::manifest::{load_dir, parse_manifest};
use skeinlab::report::Status;
use skeinlab::AlgebraError;

const ROTATION: &str = r#"{
  "suite": "elimination",
  "checks": [{
    "check_id": "tmp.rotation",
    "anchor": "",
    "basis": [{"name": "a", "degree": 1}, {"name": "b", "degree": 1}, {"name": "c", "degree": 0}],
    "axioms": [{"name": "swap", "lhs": "b*a", "rhs": "q^2*a*b + c", "provenance": "text"}],
    "claim": {"lhs": "a*b", "rhs": "RHS"},
    "lower_degree_bound": 0
  }]
}"#;

fn tmpdir(tag: &str) -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("skeinlab-{}-{}", tag, std::process::id()));
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

fn elimination_with(dir: &std::path::Path) -> RunConfig {
    RunConfig { suites: [Suite::Elimination].into_iter().collect(), manifest_paths: vec![dir.into()], ..Default::default() }
}

#[test]
fn syntax_error_reports_line_and_column() {
    let src = "{\n  \"checks\": [\n    {\"check_id\": 3,}\n  ]\n}";
    match parse_manifest(src) {
        Err(AlgebraError::Parse { line, col, .. }) => {
            assert_eq!(line, 3);
            assert!(col > 0);
        }
        other => panic!("expected a parse error, got {:?}", other.map(|m| m.checks.len())),
    }
}

#[test]
fn bad_file_in_a_directory_aborts_the_run() {
    let d = tmpdir("bad");
    fs::write(d.join("ok.json"), ROTATION.replace("RHS", "qb^2*b*a - qb^2*c")).unwrap();
    fs::write(d.join("zz.json"), "{ \"checks\": [ }").unwrap();
    let err = run_suite(&elimination_with(&d)).unwrap_err();
    assert!(matches!(err, RunError::Manifest(_)));
    assert!(err.to_string().contains("zz.json"), "{}", err);
}

#[test]
fn user_manifests_pass_and_fail() {
    let d = tmpdir("user");
    fs::write(d.join("good.json"), ROTATION.replace("RHS", "qb^2*b*a - qb^2*c")).unwrap();
    let wrong = ROTATION.replace("RHS", "qb^2*b*a + c").replace("tmp.rotation", "tmp.wrong");
    fs::write(d.join("wrong.json"), wrong).unwrap();
    assert_eq!(load_dir(&d).unwrap().len(), 2);
    let r = run_suite(&elimination_with(&d)).unwrap();
    let status = |id: &str| r.results.iter().find(|x| x.check_id == id).unwrap().status;
    assert_eq!(status("tmp.rotation"), Status::Pass);
    assert_eq!(status("tmp.wrong"), Status::Fail);
    assert_eq!(r.exit_code(), 1);
}
