//! End-to-end tests of the `layerscope` binary: exit codes, file
//! handling, the tolerance override, and the repro subcommand.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_layerscope"))
}

fn samples() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join("samples")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn validate_accepts_sample_observables() {
    for name in ["sharp-z.json", "unsharp-x.json", "xy-joint.json"] {
        let output = bin()
            .args(["validate"])
            .arg(samples().join(name))
            .output()
            .unwrap();
        assert!(output.status.success(), "{name}: {}", stderr(&output));
        assert!(stdout(&output).contains("VALID"));
    }
}

#[test]
fn validate_rejects_bad_sums_with_exit_2() {
    let dir = std::env::temp_dir().join("layerscope-cli-test-badsum");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("double-identity.json");
    let identity = r#"[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]"#;
    std::fs::write(
        &path,
        format!(r#"{{"dim":2,"effects":[{identity},{identity}]}}"#),
    )
    .unwrap();
    let output = bin().args(["validate"]).arg(&path).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("identity"));
}

#[test]
fn malformed_json_reports_location_and_exit_2() {
    let dir = std::env::temp_dir().join("layerscope-cli-test-malformed");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{ \"dim\": 2, ").unwrap();
    let output = bin().args(["validate"]).arg(&path).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("line"));
}

#[test]
fn classify_prints_the_layer_verdict() {
    let output = bin()
        .arg("classify")
        .arg(samples().join("sharp-z.json"))
        .arg(samples().join("sharp-z.json"))
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("strongest layer: BROADCASTABLE"));
    assert!(text.contains("\"strongest_layer\": \"BROADCASTABLE\""));

    let output = bin()
        .arg("classify")
        .arg(samples().join("unsharp-x.json"))
        .arg(samples().join("unsharp-y.json"))
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("strongest layer: COMPATIBLE"));
    assert!(text.contains("WeaklyCompatible") || text.contains("WEAKLY_COMPATIBLE"));
}

#[test]
fn classify_accepts_witness_documents() {
    let output = bin()
        .arg("classify")
        .arg(samples().join("sharp-z.json"))
        .arg(samples().join("sharp-z.json"))
        .arg("--witness")
        .arg(samples().join("z-copier-witness.json"))
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    assert!(stdout(&output).contains("witness 0"));
}

#[test]
fn degree_locates_the_boundary() {
    let output = bin()
        .arg("degree")
        .arg(samples().join("sharp-x.json"))
        .arg(samples().join("sharp-z.json"))
        .output()
        .unwrap();
    assert!(output.status.success());
    assert!(stdout(&output).contains("0.70710678"));
}

#[test]
fn verify_broadcast_exit_codes_track_the_verdict() {
    let ok = bin()
        .arg("verify-broadcast")
        .arg(samples().join("z-copier.json"))
        .arg(samples().join("sharp-z.json"))
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    assert!(stdout(&ok).contains("yes"));

    let fail = bin()
        .arg("verify-broadcast")
        .arg(samples().join("z-copier.json"))
        .arg(samples().join("sharp-x.json"))
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(1));

    let pair = bin()
        .arg("verify-broadcast")
        .arg(samples().join("z-copier.json"))
        .arg(samples().join("sharp-z.json"))
        .arg(samples().join("sharp-z.json"))
        .output()
        .unwrap();
    assert_eq!(pair.status.code(), Some(0));
    assert!(stdout(&pair).contains("one-side"));
}

#[test]
fn repro_single_scenario_and_json_output() {
    let output = bin()
        .args(["repro", "degree", "--json", "-"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("ALL PASS"));
    let json_start = text.find('[').unwrap();
    let parsed: serde_json::Value = serde_json::from_str(text[json_start..].trim()).unwrap();
    assert_eq!(parsed[0]["scenario_id"], "degree");
    assert!(!text.contains("runtime_ms"));
}

#[test]
fn repro_unknown_scenario_is_an_input_error() {
    let output = bin().args(["repro", "nonsense"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("unknown scenario"));
}

#[test]
fn repro_reports_are_stable_across_runs_for_a_seed() {
    let run = || {
        let output = bin()
            .args([
                "repro",
                "unsharp-equivalence",
                "--seed",
                "99",
                "--trials",
                "25",
                "--json",
                "-",
            ])
            .output()
            .unwrap();
        assert!(output.status.success());
        let text = stdout(&output);
        text[text.find('[').unwrap()..].to_string()
    };
    assert_eq!(run(), run());
}

#[test]
fn tolerance_env_var_loosens_validation() {
    let dir = std::env::temp_dir().join("layerscope-cli-test-tol");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("slightly-off.json");
    // Effects sum to (1 + 1e-6)·I: invalid at 1e-9, fine at 1e-3.
    let body = r#"{"dim":2,"effects":[[[[0.500001,0.0],[0.0,0.0]],[[0.0,0.0],[0.500001,0.0]]],[[[0.5,0.0],[0.0,0.0]],[[0.0,0.0],[0.5,0.0]]]]}"#;
    std::fs::write(&path, body).unwrap();

    let strict = bin().args(["validate"]).arg(&path).output().unwrap();
    assert_eq!(strict.status.code(), Some(2));

    let loose = bin()
        .args(["validate"])
        .arg(&path)
        .env("LAYERSCOPE_TOL", "1e-3")
        .output()
        .unwrap();
    assert_eq!(loose.status.code(), Some(0), "{}", stderr(&loose));
}
