use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/small").join(name)
}

fn polaris(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polaris")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = polaris(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(polaris(&["--help"]).status.code(), Some(0));
    assert_eq!(polaris(&["--version"]).status.code(), Some(0));
    assert_eq!(polaris(&["network", "--help"]).status.code(), Some(0));
    assert_eq!(polaris(&[]).status.code(), Some(1));
    assert_eq!(polaris(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(polaris(&["predict", "train", "--task", "nope"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let missing = polaris(&["ingest", "--input", "/nonexistent.jsonl", "--periods", s(&fixture("periods.json")), "--out", s(&dir.path().join("c"))]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("ingest"));

    let bad = dir.path().join("p.json");
    std::fs::write(&bad, r#"[{"name":"a","start_utc":0,"end_utc":10},{"name":"b","start_utc":5,"end_utc":20}]"#).unwrap();
    let overlap = polaris(&["pipeline", "--input", s(&fixture("corpus.jsonl")), "--periods", s(&bad), "--out", s(&dir.path().join("o"))]);
    assert_eq!(overlap.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&overlap.stderr).contains("periods"));
}

#[test]
fn stage_by_stage() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let raw = d.join("raw.store");
    let store = d.join("c.store");
    let out = ok(&["ingest", "--input", s(&fixture("corpus.jsonl")), "--periods", s(&fixture("periods.json")), "--out", s(&raw)]);
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["submissions"], 1000);

    let out = ok(&["labels", "merge", "--corpus", s(&raw), "--gold", s(&fixture("gold.csv")), "--predicted", s(&fixture("predicted.csv")), "--out", s(&store)]);
    let merge: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(merge["labelled"].as_u64().unwrap() > 900);

    let out = ok(&["labels", "eval", "--gold", s(&fixture("gold.csv")), "--predicted", s(&fixture("predicted.csv"))]);
    let eval: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(eval["macro_f1"].as_f64().unwrap() <= 1.0);

    let c = s(&store);
    ok(&["polarity", "compute", "--corpus", c, "--out", s(&d.join("pol.csv"))]);
    let pol = std::fs::read_to_string(d.join("pol.csv")).unwrap();
    assert!(pol.starts_with("user_id,period,P,N,A,activity,polarity\n"));
    assert!(pol.lines().count() > 100);
    ok(&["polarity", "dist", "--corpus", c, "--bins", "10", "--out", s(&d.join("dist.json"))]);
    ok(&["network", "build", "--corpus", c, "--out", s(&d.join("edges.csv"))]);
    ok(&["network", "stats", "--corpus", c, "--out", s(&d.join("net"))]);
    assert!(d.join("net/echo.json").exists());
    ok(&["network", "triads", "--corpus", c, "--out", s(&d.join("triads.csv"))]);
    ok(&["dynamics", "patterns", "--corpus", c, "--out", s(&d.join("patterns.csv"))]);
    ok(&["dynamics", "retention", "--corpus", c, "--any-future", "--out", s(&d.join("ret.csv"))]);
    ok(&["dynamics", "prolific", "--corpus", c, "--percentile", "0.9", "--out", s(&d.join("prolific.json"))]);
    assert_eq!(polaris(&["dynamics", "prolific", "--corpus", c, "--percentile", "2", "--out", s(&d.join("x.json"))]).status.code(), Some(2));
    ok(&["features", "extract", "--corpus", c, "--out", s(&d.join("features.csv"))]);

    let model = d.join("model.json");
    ok(&["predict", "train", "--corpus", c, "--task", "presence", "--trees", "10", "--out", s(&model)]);
    let out = ok(&["predict", "eval", "--corpus", c, "--task", "presence", "--model", s(&model)]);
    let m: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(m["kind"], "classification");
    ok(&["predict", "baselines", "--corpus", c, "--task", "presence"]);
    ok(&["predict", "importance", "--corpus", c, "--task", "presence", "--model", s(&model), "--repetitions", "2"]);
    let wrong = polaris(&["predict", "eval", "--corpus", c, "--task", "polarity", "--model", s(&model)]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn qa_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let recs = dir.path().join("ann.csv");
    let mut text = String::from("item_id,worker_id,label\n");
    for i in 0..30 {
        for w in 0..8 {
            let label = if w == 7 { "anti" } else if w < 6 || i % 3 == 0 { "pro" } else { "neither" };
            text.push_str(&format!("i{i},w{w},{label}\n"));
        }
    }
    std::fs::write(&recs, text).unwrap();
    let out = dir.path().join("qa");
    ok(&["qa", "--records", s(&recs), "--out", s(&out)]);
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["items"], 30);
    assert_eq!(summary["flagged"], serde_json::json!(["w7"]));
    assert!(summary["allowlist"].as_array().unwrap().iter().any(|w| w == "w0"));
    let gold = std::fs::read_to_string(out.join("gold.csv")).unwrap();
    assert_eq!(gold.lines().count(), 31);

    std::fs::write(&recs, "item_id,worker_id,label\ni,w,pro\ni,w,anti\n").unwrap();
    assert_eq!(polaris(&["qa", "--records", s(&recs), "--out", s(&out)]).status.code(), Some(2));
}

#[test]
fn pipeline_on_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    ok(&[
        "pipeline", "--input", s(&fixture("corpus.jsonl")), "--periods", s(&fixture("periods.json")),
        "--gold", s(&fixture("gold.csv")), "--predicted", s(&fixture("predicted.csv")),
        "--out", s(&out), "--trees", "10", "--store",
    ]);
    for name in [
        "ingest.json", "density.csv", "polarity.csv", "edges.csv", "echo.json", "triads.csv", "patterns.csv",
        "retention.csv", "prolific.json", "features.csv", "predict_presence.json", "predict_polarity.json", "run.json",
    ] {
        assert!(out.join(name).exists(), "{name}");
    }
    let patterns = std::fs::read_to_string(out.join("patterns.csv")).unwrap();
    let total: u64 = patterns.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap()).sum();
    let users = std::fs::read_to_string(out.join("polarity.csv")).unwrap();
    let distinct: std::collections::BTreeSet<&str> = users.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(total, distinct.len() as u64);
}
