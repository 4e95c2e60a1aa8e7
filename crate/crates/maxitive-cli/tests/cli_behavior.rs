//! Contract checks for the binary itself: flag overrides, output formats,
//! row-level internal consistency, and error exits.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxitive"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("launching the binary")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let output = run(args);
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}) from {args:?}: {}", String::from_utf8_lossy(&output.stdout))
    })
}

#[test]
fn eval_reports_moments_and_event_measure() {
    let doc = json(&[
        "eval",
        "scenarios/three_point.toml",
        "--k",
        "1",
        "--event",
        "b,c",
        "--format",
        "json",
        "--no-timestamp",
    ]);
    assert_eq!(doc["command"], "eval");
    assert_eq!(doc["eval"]["step"]["e_sup"], 2.0);
    assert_eq!(doc["eval"]["step"]["var_sup"], 9.0);
    assert_eq!(doc["eval"]["event"]["measure"], 0.5);
    assert_eq!(doc["ok"], true);
    assert!(doc.get("timestamp").is_none(), "--no-timestamp leaked a timestamp");

    let empty = json(&[
        "eval",
        "scenarios/three_point.toml",
        "--event",
        "",
        "--format",
        "json",
        "--no-timestamp",
    ]);
    assert_eq!(empty["eval"]["event"]["measure"], 0.0);
    assert_eq!(empty["eval"]["event"]["members"].as_array().unwrap().len(), 0);
}

#[test]
fn chebyshev_rows_are_internally_consistent() {
    let doc = json(&[
        "chebyshev",
        "scenarios/three_point.toml",
        "--k",
        "1",
        "--format",
        "json",
        "--no-timestamp",
    ]);
    let rows = doc["chebyshev"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for row in rows {
        let measured = row["measured"].as_f64().unwrap();
        let bound = row["bound"].as_f64().unwrap();
        let margin = row["margin"].as_f64().unwrap();
        assert_eq!(margin, bound - measured, "margin fails to recompute");
    }
    assert_eq!(doc["chebyshev"]["violations"], 0);
    assert_eq!(doc["ok"], true);
}

#[test]
fn lln_rows_recompute_and_overrides_apply() {
    let doc = json(&[
        "lln",
        "scenarios/linear_sqrt.toml",
        "--horizon",
        "50",
        "--eps",
        "0.2,0.1",
        "--format",
        "json",
        "--no-timestamp",
    ]);
    let report = &doc["lln"]["report"];
    assert_eq!(report["horizon"], 50);
    assert_eq!(report["eps_grid"], serde_json::json!([0.2, 0.1]));
    let curves = report["curves"].as_array().unwrap();
    assert_eq!(curves.len(), 2);
    for curve in curves {
        let rows = curve["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 50);
        for row in rows {
            let measured = row["measured"].as_f64().unwrap();
            let bound = row["bound"].as_f64().unwrap();
            let margin = row["margin"].as_f64().unwrap();
            assert_eq!(margin, bound - measured, "margin fails to recompute");
        }
    }
    assert_eq!(report["bound_violations"], 0);
    assert_eq!(doc["ok"], true);
}

#[test]
fn shipped_summable_scenario_passes_end_to_end() {
    let output = run(&["lln", "scenarios/linear_offset.toml", "--format", "json"]);
    assert!(output.status.success(), "{output:?}");
    let doc: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(doc["lln"]["report"]["hypothesis"]["satisfied"], "Yes");
    assert_eq!(doc["lln"]["report"]["mean_remark"]["mu"], 1.0);
    assert_eq!(doc["lln"]["report"]["mean_convergence"]["decision"], "Holds");
}

#[test]
fn converge_emits_per_eps_blocks_and_verdicts() {
    let doc = json(&[
        "converge",
        "scenarios/linear_sqrt.toml",
        "--eps",
        "0.05",
        "--format",
        "json",
        "--no-timestamp",
    ]);
    let section = &doc["converge"];
    assert_eq!(section["per_eps"].as_array().unwrap().len(), 1);
    let block = &section["per_eps"][0];
    assert_eq!(block["inequality_ok"], true);
    assert_eq!(block["tail_verdict"]["VanishesAt"]["m"], 401);
    assert_eq!(section["in_measure"]["decision"], "Holds");
    assert_eq!(section["almost_everywhere"]["decision"], "Holds");
    assert_eq!(section["consistent"], true);
    assert_eq!(doc["ok"], true);
}

#[test]
fn csv_output_has_exact_headers() {
    let output = run(&["chebyshev", "scenarios/three_point.toml", "--format", "csv"]);
    let text = stdout(&output);
    assert_eq!(text.lines().next(), Some("r,measured,bound,margin"));
    assert_eq!(text.lines().count(), 6);

    let output = run(&["lln", "scenarios/linear_sqrt.toml", "--format", "csv", "--horizon", "10"]);
    let text = stdout(&output);
    assert_eq!(text.lines().next(), Some("eps,n,measured,bound,margin"));
    assert_eq!(text.lines().count(), 1 + 3 * 10);

    let output = run(&["converge", "scenarios/linear_sqrt.toml", "--format", "csv", "--horizon", "10"]);
    let text = stdout(&output);
    assert_eq!(text.lines().next(), Some("eps,n,measured,tail_sup,limsup_measure"));
}

#[test]
fn seed_override_reseeds_or_warns() {
    let one = json(&[
        "eval",
        "scenarios/bounded_noise.toml",
        "--k",
        "3",
        "--seed",
        "1",
        "--format",
        "json",
        "--no-timestamp",
    ]);
    let two = json(&[
        "eval",
        "scenarios/bounded_noise.toml",
        "--k",
        "3",
        "--seed",
        "2",
        "--format",
        "json",
        "--no-timestamp",
    ]);
    assert!(one["warnings"].as_array().unwrap().is_empty());
    assert_ne!(one["eval"]["step"]["e_sup"], two["eval"]["step"]["e_sup"]);

    let ignored = json(&[
        "eval",
        "scenarios/three_point.toml",
        "--k",
        "1",
        "--seed",
        "7",
        "--format",
        "json",
        "--no-timestamp",
    ]);
    let warnings = ignored["warnings"].as_array().unwrap();
    assert!(
        warnings.iter().any(|w| w.as_str().unwrap().contains("--seed ignored")),
        "missing seed warning: {warnings:?}"
    );
    assert_eq!(ignored["eval"]["step"]["e_sup"], 2.0);
}

#[test]
fn table_thinning_respects_max_rows() {
    let full = stdout(&run(&["lln", "scenarios/linear_sqrt.toml", "--eps", "0.1", "--max-rows", "0"]));
    let full_rows = full.lines().filter(|l| l.trim_start().starts_with(char::is_numeric)).count();
    assert!(full_rows >= 1000, "expected all 1000 rows, saw {full_rows}");

    let thin = stdout(&run(&["lln", "scenarios/linear_sqrt.toml", "--eps", "0.1", "--max-rows", "6"]));
    let thin_rows = thin.lines().filter(|l| l.trim_start().starts_with(char::is_numeric)).count();
    assert!(thin_rows <= 8, "thinned table still has {thin_rows} numeric rows");
    assert!(thin.contains("..."), "no fold marker in thinned output");
}

#[test]
fn structural_errors_exit_two() {
    assert_eq!(run(&["lln", "scenarios/does_not_exist.toml"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "scenarios/three_point.toml"]).status.code(), Some(2));
    assert_eq!(
        run(&["chebyshev", "scenarios/three_point.toml", "--r", "-1"]).status.code(),
        Some(2)
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[space]\noutcomes = [\"a\"]\n[distribution]\nweights = { a = 0.5 }\n")
        .unwrap();
    let output = run(&["eval", bad.to_str().unwrap(), "--k", "1"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(!output.stderr.is_empty(), "parse failure should explain itself on stderr");
}
