mod common;

use std::fs;
use std::process::Command;

use common::{golden_path, manifest_dir, run_case, CORPUS};
use serde_json::Value;

/// Set `QSPA_UPDATE_GOLDEN=1` to rewrite the golden files from the current binary.
#[test]
fn corpus_matches_golden_files() {
    let update = std::env::var_os("QSPA_UPDATE_GOLDEN").is_some();
    let mut mismatches = Vec::new();
    for case in CORPUS {
        let (code, stdout) = run_case(case);
        assert_eq!(code, case.exit, "{}: exit code\n{}", case.name, String::from_utf8_lossy(&stdout));
        let path = golden_path(case.name);
        if update {
            fs::write(&path, &stdout).unwrap();
            continue;
        }
        let expected = fs::read(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
        if expected != stdout {
            mismatches.push(case.name);
        }
    }
    assert!(mismatches.is_empty(), "reports differ from golden files: {mismatches:?}");
}

#[test]
fn every_subcommand_has_a_golden_case() {
    for cmd in ["spa", "apply", "witness", "entropy", "moments", "spectrum", "measure", "nogo", "gen-state"] {
        assert!(
            CORPUS.iter().any(|c| c.args[0] == cmd && c.exit == 0),
            "no successful golden case for {cmd}"
        );
    }
}

fn schema() -> Value {
    let text = fs::read_to_string(manifest_dir().join("report.schema.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn required(schema: &Value) -> Vec<&str> {
    schema["required"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect()
}

#[test]
fn reports_carry_schema_fields() {
    let schema = schema();
    let defs = &schema["$defs"];
    for case in CORPUS {
        let (_, stdout) = run_case(case);
        let report: Value = serde_json::from_slice(&stdout).unwrap();
        for key in required(&schema) {
            assert!(report.get(key).is_some(), "{}: missing {key}", case.name);
        }
        assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
        for key in required(&defs["tolerances"]) {
            assert!(report["tolerances"].get(key).is_some(), "{}: tolerances.{key}", case.name);
        }
        if case.exit == 0 {
            assert!(report.get("error").is_none());
            assert!(report["result"].is_object(), "{}", case.name);
        } else {
            assert!(report.get("result").is_none());
            for key in required(&defs["error"]) {
                assert!(report["error"].get(key).is_some(), "{}: error.{key}", case.name);
            }
            let kind = if case.exit == 3 { "numerical" } else { "validation" };
            assert_eq!(report["error"]["kind"], kind, "{}", case.name);
        }
    }
}

#[test]
fn state_reports_feed_back_as_inputs() {
    let dir = std::env::temp_dir().join(format!("qspa-roundtrip-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let state = dir.join("state.json");
    let bin = env!("CARGO_BIN_EXE_qspa");
    let status = Command::new(bin)
        .args(["gen-state", "--kind", "mixed", "--d", "3", "--seed", "21", "--output"])
        .arg(&state)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(bin).args(["spectrum", "--via", "shift", "--state"]).arg(&state).output().unwrap();
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let eig = report["result"]["estimate"]["eigenvalues"].as_array().unwrap();
    assert_eq!(eig.len(), 3);
    let sum: f64 = eig.iter().map(|v| v.as_f64().unwrap()).sum();
    assert!((sum - 1.0).abs() < 1e-12);
    assert_eq!(report["result"]["observables_used"], 3);
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn tolerance_overrides_appear_in_reports() {
    let out = Command::new(env!("CARGO_BIN_EXE_qspa"))
        .args(["spa", "--map", "builtin:transpose", "--d", "2"])
        .env("QSPA_TOL_HERMITICITY", "1e-6")
        .output()
        .unwrap();
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["tolerances"]["hermiticity"], 1e-6);

    let out = Command::new(env!("CARGO_BIN_EXE_qspa"))
        .args(["spa", "--map", "builtin:transpose", "--d", "2"])
        .env("QSPA_TOL_PSD_CLIP", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn version_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_qspa")).arg("--version").output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), format!("qspa {}", env!("CARGO_PKG_VERSION")));
}

#[test]
fn unknown_flags_give_json_usage_errors() {
    let out = Command::new(env!("CARGO_BIN_EXE_qspa")).args(["spa", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["error"]["code"], "usage");
}
