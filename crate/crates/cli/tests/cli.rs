use std::process::{Command, Output};

use serde_json::Value;

fn hurwitz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurwitz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn documented_examples() {
    let out = hurwitz(&["classical", "--profiles", "2|2|2|2"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), r#"{"value":"1/2"}"#);

    let out = json(&hurwitz(&["mumford", "--profiles", "2|2|2|2", "--tree", "(0,1,2,3);"]));
    assert_eq!(out["classical"], "1/2");
    assert_eq!(out["wiener_weight"], "1/2");
    assert_eq!(out["mumford"], "0");

    let out = json(&hurwitz(&["tropical", "--profiles", "2|2|2|2", "--tree", "((0,1),(2,3));"]));
    assert_eq!(out["raw_count"], 1);
    assert_eq!(out["weighted"], "1/2");
    assert_eq!(out["classes"][0]["betti"], 1);
    assert_eq!(out["classes"][0]["aut"], 2);
}

#[test]
fn errors_are_json_with_nonzero_status() {
    let cases: &[(&[&str], &str, i32)] = &[
        (&["classical", "--profiles", "2|3"], "UnequalSums", 2),
        (&["classical", "--profiles", "2|x"], "MalformedProfile", 2),
        (&["classical", "--profiles", "2|2", "--degree", "3"], "DegreeMismatch", 2),
        (&["classical", "--profiles", "2|2|2|2", "--genus", "0"], "GenusMismatch", 2),
        (&["tropical", "--profiles", "2|2|2|2", "--tree", "((0,1),(0,2));"], "DuplicateLeaf", 2),
        (&["tropical", "--profiles", "2|2|2|2", "--tree", "((0,1),(2,3)"], "ParseError", 2),
        (&["tropical", "--profiles", "2|2|2", "--tree", "((0,1),(2,3));"], "LeafProfileMismatch", 2),
        (&["tropical", "--profiles", "2|2|2|2", "--tree", "(0,1,2,3);"], "NotBinary", 2),
        (&["classical", "--profiles", "2,1|2,1|2,1|2,1", "--max-work", "1"], "WorkLimit", 3),
        (&["covers", "--profiles", "2|2|2|2"], "MissingExportDir", 2),
    ];
    for (args, code, status) in cases {
        let out = hurwitz(args);
        assert_eq!(out.status.code(), Some(*status), "{args:?}");
        let v = json(&out);
        assert_eq!(v["error"], *code, "{args:?}");
        assert!(v["detail"].is_string());
    }
}

#[test]
fn output_is_byte_stable() {
    let args = ["tropical", "--profiles", "2,1|2,1|2,1|2,1|2,1", "--tree", "((0,3),2,(1,4));"];
    let first = hurwitz(&args).stdout;
    for threads in ["1", "4"] {
        let again = Command::new(env!("CARGO_BIN_EXE_hurwitz"))
            .args(args)
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap()
            .stdout;
        assert_eq!(first, again);
    }
}

#[test]
fn covers_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let out = hurwitz(&["covers", "--profiles", "2,1|2,1|2,1|2,1", "--export-dir", path]);
    assert!(out.status.success());
    let report = json(&out);
    let files: Vec<String> = report["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f.as_str().unwrap().to_string())
        .collect();
    assert_eq!(files.len(), 2 * report["raw_count"].as_u64().unwrap() as usize);
    for f in &files {
        let body = std::fs::read_to_string(dir.path().join(f)).unwrap();
        if f.ends_with(".dot") {
            assert!(body.starts_with("digraph") || body.starts_with("graph"), "{body}");
        } else {
            serde_json::from_str::<Value>(&body).unwrap();
        }
    }
    let saved: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(saved, report);
}

#[test]
fn verify_passes_on_golden_set() {
    let golden: Vec<Value> = serde_json::from_str(include_str!("golden.json")).unwrap();
    for case in golden {
        let profiles = case["profiles"].as_str().unwrap();
        let mut args = vec!["classical", "--profiles", profiles];
        assert_eq!(json(&hurwitz(&args))["value"], case["classical"], "{case}");
        args[0] = "verify";
        if let Some(t) = case["tree"].as_str() {
            args.extend(["--tree", t]);
        }
        let out = hurwitz(&args);
        assert!(out.status.success(), "{case}: {}", String::from_utf8_lossy(&out.stdout));
        assert_eq!(json(&out)["passed"], true);
    }
}

#[test]
fn verify_flags_covers_with_positive_local_genus() {
    // the only degree-3 covers with three full cycles have a genus-one vertex
    let out = hurwitz(&["verify", "--profiles", "3|3|3"]);
    assert_eq!(out.status.code(), Some(1));
    let failed: Vec<String> = json(&out)["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(failed, ["tropical_equals_classical"]);
}
