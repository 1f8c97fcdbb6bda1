use std::process::Command;

fn skeinlab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_skeinlab")).args(args).output().expect("binary runs")
}

#[test]
fn verify_writes_json_report() {
    let out = std::env::temp_dir().join(format!("skeinlab-report-{}.json", std::process::id()));
    let o = skeinlab(&["verify", "--suite", "quotient,elimination", "--report", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["summary"]["fail"], 0);
    assert!(v["manifest_hash"].as_str().unwrap().len() == 64);
    assert!(v["results"].as_array().unwrap().iter().all(|r| r["check_id"].is_string()));
}

#[test]
fn text_report_and_trace() {
    let trace = std::env::temp_dir().join(format!("skeinlab-trace-{}.json", std::process::id()));
    let o = skeinlab(&["verify", "--suite", "character", "--n", "1", "--mode", "float", "--trace", trace.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("character.det.n1"));
    assert!(text.contains("summary:"));
    let events: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(events.as_array().unwrap().len(), 1);
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(skeinlab(&["verify", "--n", "4"]).status.code(), Some(2));
    assert_eq!(skeinlab(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(skeinlab(&["verify", "--precision", "64"]).status.code(), Some(2));
    assert_eq!(skeinlab(&["verify", "--manifests", "/does/not/exist"]).status.code(), Some(2));
    assert_eq!(skeinlab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn list_matches_suite_filter() {
    let o = skeinlab(&["list", "--suite", "families"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().count() >= 10);
    assert!(text.lines().all(|l| l.starts_with("families")));
}
