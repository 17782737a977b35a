use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_twistorctl");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("TWISTORCTL_SELFTEST_MUTATION").output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON report")
}

fn verdict<'a>(doc: &'a Value, question: &str) -> &'a Value {
    doc["verdicts"].as_array().unwrap().iter().find(|v| v["question"] == question).expect("verdict present")
}

fn nijenhuis<'a>(doc: &'a Value, sign: &str) -> &'a Value {
    doc["nijenhuis"].as_array().unwrap().iter().find(|v| v["sign"] == sign).expect("sign present")
}

#[test]
fn decompose_sphere_is_constant_curvature() {
    let doc = report(&["decompose", "--fixture", "sphere", "--dim", "4"]);
    assert_eq!(doc["schema_version"], 1);
    let dec = &doc["decomposition"];
    assert!((dec["scal"].as_f64().unwrap() - 12.0).abs() < 1e-5);
    assert!(dec["e_norm"].as_f64().unwrap() < 1e-6);
    assert!(dec["c_norm"].as_f64().unwrap() < 1e-6);
}

#[test]
fn decompose_product_spheres_is_einstein_with_weyl() {
    let doc = report(&["decompose", "--fixture", "product_spheres", "--dim", "4"]);
    let dec = &doc["decomposition"];
    assert!(dec["e_norm"].as_f64().unwrap() < 1e-5);
    assert!(dec["c_norm"].as_f64().unwrap() > 0.1);
}

#[test]
fn decompose_symplectic_fixture_without_weyl_is_ricci_type() {
    let doc =
        report(&["decompose", "--kind", "symplectic", "--dim", "6", "--source", "symplectic", "--weyl-seeds", "0"]);
    assert_eq!(doc["decomposition"]["ricci_type"], true);
    let doc =
        report(&["decompose", "--kind", "symplectic", "--dim", "6", "--source", "symplectic", "--weyl-seeds", "2"]);
    assert_eq!(doc["decomposition"]["ricci_type"], false);
}

#[test]
fn verdicts_on_fixtures() {
    let sphere = report(&["verdict", "--fixture", "sphere", "--dim", "4", "--oriented"]);
    assert_eq!(verdict(&sphere, "Jplus_integrable")["answer"], true);
    assert_eq!(verdict(&sphere, "Jminus_integrable")["answer"], false);
    assert_eq!(verdict(&sphere, "type11_compatible")["answer"], true);

    let product = report(&["verdict", "--fixture", "product_spheres", "--dim", "4", "--oriented"]);
    assert_eq!(verdict(&product, "Jplus_integrable")["answer"], false);

    let fs = report(&["verdict", "--fixture", "fubini_study_cp2", "--dim", "4", "--oriented"]);
    assert_eq!(verdict(&fs, "Jplus_integrable")["answer"], true);
    let flipped =
        report(&["verdict", "--fixture", "fubini_study_cp2", "--dim", "4", "--oriented", "--flip-orientation"]);
    assert_eq!(verdict(&flipped, "Jplus_integrable")["answer"], false);

    for doc in [&sphere, &product, &fs, &flipped] {
        for v in doc["verdicts"].as_array().unwrap() {
            assert_eq!(v["agreement"], true, "{v}");
        }
    }
}

#[test]
fn nijenhuis_ranks() {
    let sphere = report(&["nijenhuis", "--fixture", "sphere", "--dim", "4", "--oriented"]);
    let minus = nijenhuis(&sphere, "J-");
    assert_eq!(minus["rank_min"], 6);
    assert_eq!(minus["horizontal_containment"], true);

    let flat = report(&["nijenhuis", "--fixture", "flat", "--dim", "4"]);
    assert_eq!(nijenhuis(&flat, "J+")["rank_max"], 0);
    assert_eq!(nijenhuis(&flat, "J-")["horizontal_containment"], true);
}

#[test]
fn two_form_examples() {
    let sphere = report(&["two-form", "--fixture", "sphere", "--dim", "4"]);
    let tf = &sphere["two_form"];
    assert_eq!(tf["nondegenerate"], true);
    assert!(tf["type11_residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(tf["positive_plus"], true);

    let flat = report(&["two-form", "--fixture", "flat", "--dim", "4"]);
    assert_eq!(flat["two_form"]["nondegenerate"], false);
    assert!(flat["two_form"]["positive_plus"].is_null());

    let weyl = report(&["two-form", "--source", "random", "--part", "weyl", "--dim", "4", "--tensor-seed", "3"]);
    assert!(weyl["two_form"]["type11_max_residual"].as_f64().unwrap() > 1e-3);
}

#[test]
fn spectrum_clusters_on_the_expected_set() {
    for args in [
        &["spectrum", "--fixture", "sphere", "--dim", "4"][..],
        &["spectrum", "--fixture", "pseudo_sphere_22", "--dim", "4"][..],
        &["spectrum", "--kind", "symplectic", "--dim", "4", "--fiber-samples", "8"][..],
    ] {
        let doc = report(args);
        let s = &doc["spectrum"];
        assert!(s["max_distance"].as_f64().unwrap() <= 1e-8, "{args:?}");
        let total: u64 = s["clusters"].as_array().unwrap().iter().map(|c| c["multiplicity"].as_u64().unwrap()).sum();
        assert_eq!(total, s["operator_dim"].as_u64().unwrap());
    }
}

#[test]
fn reports_embed_seed_and_tolerances() {
    let doc = report(&["verdict", "--fixture", "sphere", "--dim", "4", "--seed", "42", "--fiber-samples", "8"]);
    assert_eq!(doc["seed"], 42);
    assert!(doc["tolerances"]["rank"].is_number());
    assert_eq!(doc["input"]["sampling"]["fiber_samples"], 8);
}

#[test]
fn floats_carry_seventeen_significant_digits() {
    let out = run(&["decompose", "--fixture", "sphere", "--dim", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.contains("\"scal\"")).unwrap();
    let mantissa = line.split(':').nth(1).unwrap().trim().trim_end_matches(',').split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{line}");
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"structure": {"kind": "pseudo_riemannian", "dim": 4, "oriented": true},
            "source": {"type": "fixture", "name": "product_spheres"},
            "sampling": {"fiber_samples": 16, "seed": 5}}"#,
    )
    .unwrap();
    let out = dir.path().join("report.txt");
    let status =
        run(&["verdict", "--config", cfg.to_str().unwrap(), "--format", "text", "--out", out.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stderr));
    assert!(status.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("verdicts[0].question = Jplus_integrable"), "{text}");
    assert!(text.contains("verdicts[0].answer = false"), "{text}");
    assert!(text.contains("input.sampling.seed = 5"), "{text}");
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"unknown": 1}"#).unwrap();
    let missing = dir.path().join("missing.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["decompose", "--dim", "5"],
        vec!["decompose", "--kind", "pseudo", "--dim", "4", "--signature", "1,3"],
        vec!["verdict", "--fixture", "no_such_fixture"],
        vec!["verdict", "--fixture", "hyperbolic", "--point", "2,0,0,0"],
        vec!["verdict", "--kind", "symplectic", "--oriented"],
        vec!["verdict", "--fiber-samples", "0"],
        vec!["verdict", "--config", bad.to_str().unwrap()],
        vec!["verdict", "--config", missing.to_str().unwrap()],
        vec!["verdict", "--no-such-flag"],
        vec!["--threads", "0", "verdict"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn selftest_passes_and_detects_the_mutation() {
    let out = run(&["selftest"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("12 passed, 0 failed"), "{stdout}");

    let mutated = Command::new(BIN).args(["selftest"]).env("TWISTORCTL_SELFTEST_MUTATION", "1").output().unwrap();
    assert_eq!(mutated.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&mutated.stdout).contains("FAIL"));
}

#[test]
fn selftest_json_is_machine_readable() {
    let out = run(&["selftest", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["checks"].as_array().unwrap().len(), 12);
}
