use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn symm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symm"))
        .args(["--input", dir.to_str().unwrap()])
        .args(args)
        .env_remove("SYMM_TOL")
        .env_remove("SYMM_FORMAT")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn verdict<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["verdicts"].as_array().unwrap().iter().find(|v| v["name"] == name).unwrap_or_else(|| panic!("no {name} in {r}"))
}

fn corpus() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let files = [
        ("r11.json", r#"{"kind": "weighted_l1", "r": [1, 1]}"#),
        ("l1.json", r#"{"kind": "lp", "p": 1}"#),
        ("l2.json", r#"{"kind": "lp", "p": 2}"#),
        ("f.json", r#"{"nvars": 2, "terms": [{"exp": [1, 1], "coef": 1}, {"exp": [1, 0], "coef": 2}]}"#),
        ("g.json", r#"{"nvars": 1, "terms": [{"exp": [1], "coef": 1}, {"exp": [2], "coef": -1}]}"#),
        ("minus_one.json", r#"{"nvars": 1, "terms": [{"exp": [0], "coef": -1}]}"#),
        (
            "interval.json",
            r#"{"d": 1, "generators": [{"nvars": 1, "terms": [{"exp": [1], "coef": 1}]},
                {"nvars": 1, "terms": [{"exp": [0], "coef": 1}, {"exp": [1], "coef": -1}]}]}"#,
        ),
        ("two_point.json", r#"{"atoms": [{"point": [1], "weight": "1/2"}, {"point": [-1], "weight": "1/2"}]}"#),
        ("delta2.json", r#"{"atoms": [{"point": [2], "weight": 1}]}"#),
        ("delta_neg2.json", r#"{"atoms": [{"point": [-2], "weight": 1}]}"#),
        (
            "table.json",
            r#"{"nvars": 1, "max_degree": 2, "moments": [{"exp": [0], "value": 1}, {"exp": [1], "value": 0}, {"exp": [2], "value": -1}]}"#,
        ),
        ("point.json", r#"{"coords": [{"i": 0, "v": 1}, {"i": 3, "v": "1/2"}]}"#),
        ("truncated.json", r#"{"kind": "weighted_l1", "r": [1,"#),
        ("bad_weight.json", r#"{"kind": "weighted_l1", "r": [1, 0]}"#),
        ("bad_atom.json", r#"{"atoms": [{"point": [1], "weight": 1}, {"point": [2], "weight": []}]}"#),
        ("dup_atom.json", r#"{"atoms": [{"point": [1], "weight": 1}, {"point": [1], "weight": 1}]}"#),
        ("subset.json", r#"{"checks": [{"name": "quasi_nuclear_criterion"}, {"name": "closed_form_extension", "count": 20}]}"#),
        ("unknown.json", r#"{"checks": [{"name": "moments"}]}"#),
    ];
    for (name, body) in files {
        std::fs::write(dir.path().join(name), body).unwrap();
    }
    dir
}

#[test]
fn ext_eval_closed_form_example() {
    let dir = corpus();
    let out = symm(dir.path(), &["ext", "eval", "--seminorm", "r11.json", "--poly", "f.json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(verdict(&r, "value")["value"], 3);
    assert_eq!(verdict(&r, "interval_verified")["pass"], true);
    assert_eq!(r["command"], "ext eval");
    assert_eq!(r["inputs_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn spectrum_test_on_the_l1_ball() {
    let dir = corpus();
    let inside = symm(dir.path(), &["spectrum", "test", "--seminorm", "l1.json", "--point", "1,-1"]);
    assert_eq!(inside.status.code(), Some(0));
    assert_eq!(verdict(&report(&inside), "contains")["pass"], true);
    let outside = symm(dir.path(), &["spectrum", "test", "--seminorm", "l1.json", "--point", "1,-1.5"]);
    assert_eq!(outside.status.code(), Some(1));
    assert_eq!(report(&outside)["pass"], false);
}

#[test]
fn l2_boundary_is_decided_exactly() {
    let dir = corpus();
    let out = symm(dir.path(), &["spectrum", "test", "--seminorm", "l2.json", "--point", "3/5,4/5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(verdict(&report(&out), "contains")["value"]["exact"], true);
}

#[test]
fn norm_verbs() {
    let dir = corpus();
    let r = report(&symm(dir.path(), &["norm", "eval", "--seminorm", "r11.json", "--point", "1,-1/2"]));
    assert_eq!(verdict(&r, "value")["value"], 1.5);
    let r = report(&symm(dir.path(), &["norm", "dual", "--seminorm", "r11.json", "--point", "1,-3"]));
    assert_eq!(verdict(&r, "dual_norm")["value"], 3);
}

#[test]
fn spectrum_sample_is_seeded() {
    let dir = corpus();
    let args = ["--seed", "7", "spectrum", "sample", "--seminorm", "l2.json", "--nvars", "3", "--count", "10"];
    let a = symm(dir.path(), &args);
    let b = symm(dir.path(), &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(report(&a)["witnesses"]["samples"].as_array().unwrap().len(), 10);
}

#[test]
fn module_certificates_and_witnesses() {
    let dir = corpus();
    let out = symm(dir.path(), &["module", "cert", "--module", "interval.json", "--poly", "g.json", "--epsilon", "1/10"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(verdict(&r, "certificate_verified")["pass"], true);
    assert_eq!(r["witnesses"]["found"], true);

    let out = symm(dir.path(), &["module", "cert", "--module", "interval.json", "--poly", "minus_one.json"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["witnesses"]["found"], false);
    assert!(r["witnesses"]["witness"].is_array());

    let out = symm(dir.path(), &["module", "arch", "--module", "interval.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out)["witnesses"]["k"].as_u64().unwrap() >= 1);
}

#[test]
fn moments_verbs() {
    let dir = corpus();
    let out = symm(dir.path(), &["moments", "check", "--measure", "two_point.json", "--max-degree", "6", "--hr", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let out = symm(dir.path(), &["moments", "check", "--table", "table.json"]);
    assert_eq!(out.status.code(), Some(1));

    let out = symm(dir.path(), &["moments", "check", "--measure", "delta2.json", "--module", "interval.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(verdict(&report(&out), "m_positive")["pass"], false);

    let r = report(&symm(dir.path(), &["moments", "reconstruct", "--measure", "two_point.json", "--max-degree", "6"]));
    assert_eq!(r["witnesses"]["atoms"].as_array().unwrap().len(), 2);

    let r = report(&symm(dir.path(), &["moments", "radius", "--measure", "delta2.json", "--weights", "1/2"]));
    assert_eq!(verdict(&r, "exact")["value"], 4);

    let r = report(&symm(dir.path(), &["moments", "mk", "--measure", "delta2.json", "--max-degree", "40"]));
    assert_eq!(verdict(&r, "quasi_analytic")["value"], "quasi_analytic");

    let r = report(&symm(dir.path(), &["moments", "distinguish", "--measure", "delta2.json", "--other", "delta_neg2.json"]));
    assert_eq!(verdict(&r, "distinguish")["value"]["agree"], false);
    assert_eq!(verdict(&r, "distinguish")["value"]["exp"], serde_json::json!([1]));
}

#[test]
fn nuclear_check() {
    let dir = corpus();
    let r = report(&symm(dir.path(), &["nuclear", "check", "--s1", "0", "--s2", "3/5", "--point", "point.json"]));
    assert_eq!(verdict(&r, "quasi_nuclear")["value"], true);
    assert_eq!(verdict(&r, "norms_ordered")["pass"], true);
    let r = report(&symm(dir.path(), &["nuclear", "check", "--s1", "0", "--s2", "1/2"]));
    assert_eq!(verdict(&r, "quasi_nuclear")["value"], false);
    let r = report(&symm(dir.path(), &["nuclear", "check", "--s1", "1", "--s2", "0"]));
    assert_eq!(verdict(&r, "dominates")["value"], false);
    assert!(r["witnesses"]["dominance_counterexample"].is_object());
}

#[test]
fn input_errors_exit_two_with_a_report() {
    let dir = corpus();
    let cases: [&[&str]; 6] = [
        &["ext", "eval", "--seminorm", "nowhere.json", "--poly", "f.json"],
        &["ext", "eval", "--seminorm", "truncated.json", "--poly", "f.json"],
        &["norm", "eval", "--seminorm", "bad_weight.json", "--point", "1,1"],
        &["moments", "mk", "--measure", "dup_atom.json"],
        &["suite", "run", "--config", "unknown.json"],
        &["norm", "eval", "--seminorm", "r11.json", "--point", "1,one"],
    ];
    for args in cases {
        let out = symm(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let r = report(&out);
        assert!(r["error"].is_string(), "{args:?}: {r}");
        assert_eq!(r["pass"], false);
    }
}

#[test]
fn malformed_json_names_the_path() {
    let dir = corpus();
    let out = symm(dir.path(), &["moments", "mk", "--measure", "bad_atom.json"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = report(&out)["error"].as_str().unwrap().to_string();
    assert!(msg.contains("atoms[1].weight"), "{msg}");
}

#[test]
fn usage_errors_exit_two_and_help_exits_zero() {
    let dir = corpus();
    assert_eq!(symm(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(symm(dir.path(), &["--format", "xml", "nuclear", "check", "--s1", "0", "--s2", "1"]).status.code(), Some(2));
    assert_eq!(symm(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn text_format_and_env_overrides() {
    let dir = corpus();
    let out = symm(dir.path(), &["--format", "text", "ext", "eval", "--seminorm", "r11.json", "--poly", "f.json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("ext eval  [PASS]"), "{text}");
    let out = Command::new(env!("CARGO_BIN_EXE_symm"))
        .args(["nuclear", "check", "--s1", "0", "--s2", "1"])
        .env("SYMM_FORMAT", "text")
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("quasi_nuclear"));
}

#[test]
fn digest_tracks_inputs() {
    let dir = corpus();
    let a = report(&symm(dir.path(), &["norm", "eval", "--seminorm", "r11.json", "--point", "1,1"]));
    let b = report(&symm(dir.path(), &["norm", "eval", "--seminorm", "r11.json", "--point", "1,2"]));
    let c = report(&symm(dir.path(), &["--seed", "1", "norm", "eval", "--seminorm", "r11.json", "--point", "1,1"]));
    assert_ne!(a["inputs_digest"], b["inputs_digest"]);
    assert_ne!(a["inputs_digest"], c["inputs_digest"]);
}

#[test]
fn suite_subset_is_deterministic() {
    let dir = corpus();
    let a = symm(dir.path(), &["suite", "run", "--config", "subset.json"]);
    let b = symm(dir.path(), &["suite", "run", "--config", "subset.json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    let names: Vec<&str> = r["verdicts"].as_array().unwrap().iter().map(|v| v["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["quasi_nuclear_criterion", "closed_form_extension"]);
}
