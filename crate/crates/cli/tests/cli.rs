use std::process::{Command, Output};

use serde_json::Value;

fn csl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csl")).args(args).output().expect("run csl")
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn fixture_exit_codes() {
    let cases: &[(&[&str], &str, i32)] = &[
        (&["check"], "s3-quaternionic.spec", 0),
        (&["check"], "five-dim-pair.spec", 0),
        (&["check", "--property", "psphere"], "five-dim-pair.spec", 1),
        (&["check"], "r7-round-not-taut.spec", 0),
        (&["check"], "r7-taut-not-round.spec", 0),
        (&["check"], "torus-bundle.spec", 0),
        (&["check"], "t3-circle.spec", 0),
        (&["scan"], "t3-circle.spec", 2),
        (&["scan"], "dependent-scan.spec", 1),
        (&["check"], "dependent-scan.spec", 3),
        (&["check"], "unproven.spec", 2),
        (&["check"], "degenerate.spec", 0),
        (&["check"], "syntax-error.spec", 3),
        (&["check"], "no-such-file.spec", 3),
    ];
    for (args, file, want) in cases {
        let path = fixture(file);
        let mut full = vec!["--json"];
        full.extend_from_slice(args);
        full.push(&path);
        let out = csl(&full);
        assert_eq!(code(&out), *want, "{args:?} {file}: {}", String::from_utf8_lossy(&out.stdout));
        let v = json(&out);
        assert_eq!(v["exit_code"], *want);
    }
}

#[test]
fn syntax_errors_carry_a_position() {
    let out = csl(&["--json", "check", &fixture("syntax-error.spec")]);
    let v = json(&out);
    let msg = v["error"].as_str().expect("error message");
    assert!(msg.contains("line") && msg.contains("column"), "{msg}");
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(code(&csl(&["frobnicate"])), 3);
    assert_eq!(code(&csl(&["verify", "no-such-example"])), 3);
    assert_eq!(code(&csl(&["--help"])), 0);
}

#[test]
fn reeb_field_on_the_sphere() {
    let out = csl(&["reeb", "--form", "alpha", &fixture("s3-quaternionic.spec")]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("(-q2)∂q1 + (q1)∂q2 + (q4)∂q3 + (-q3)∂q4"), "{text}");
}

#[test]
fn rho_and_hr() {
    let v = json(&csl(&["--json", "rho", "16"]));
    assert_eq!(v["data"], 8);
    let path = std::env::temp_dir().join(format!("csl-hr8-{}.json", std::process::id()));
    let out = csl(&["--json", "hr", "8", "--emit", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let family: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(family["m"], 8);
    assert_eq!(family["matrices"].as_array().unwrap().len(), 7);
}

fn strip_elapsed(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("elapsed_ms");
            map.values_mut().for_each(strip_elapsed);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_elapsed),
        _ => {}
    }
}

#[test]
fn verify_is_deterministic() {
    let mut a = json(&csl(&["--json", "verify"]));
    let mut b = json(&csl(&["--json", "verify"]));
    strip_elapsed(&mut a);
    strip_elapsed(&mut b);
    assert_eq!(a, b);
    assert_eq!(a["exit_code"], 0);
}

#[test]
fn json_output_reparses() {
    let out = csl(&["--json", "catalog"]);
    let v = json(&out);
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
    assert!(v["data"].is_array() || v["data"].is_object());
}
