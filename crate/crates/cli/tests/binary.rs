use std::fs;
use std::io::Write;
use std::process::{Command, Stdio};

fn carlitz(args: &[&str], stdin: &str) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_carlitz"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn input_and_output_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    let output = dir.path().join("out.json");
    fs::write(&input, r#"{"a":[{"j":0,"k":0,"coef":"x"}]}"#).unwrap();
    let (code, stdout) = carlitz(
        &["solve-ode", "--order", "3", "--check", "-i", input.to_str().unwrap(), "-o", output.to_str().unwrap()],
        "",
    );
    assert_eq!(code, 0, "{stdout}");
    assert_eq!(fs::read_to_string(&output).unwrap(), stdout);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["check"]["passed"], true);
    assert_eq!(doc["manifest"]["command"], "solve-ode");
}

#[test]
fn exit_codes() {
    assert_eq!(carlitz(&["compose"], "{").0, 2);
    assert_eq!(carlitz(&["compose", "--p", "4"], r#"{"a":"t","b":"t"}"#).0, 2);
    assert_eq!(carlitz(&["invert"], r#"{"u":"t^2"}"#).0, 3);
    assert_eq!(carlitz(&["eval"], r#"{"a":"x^{-2}*t^2","t0":"x"}"#).0, 3);
    assert_eq!(carlitz(&["solve-riccati", "--branch", "nonzero"], r#"{"lambda":"x^{1/4}"}"#).0, 5);
    assert_eq!(carlitz(&["solve-riccati", "--branch", "nonzero", "--s", "2"], r#"{"lambda":"x^{1/4}"}"#).0, 0);
    assert_eq!(carlitz(&["--help"], "").0, 0);
    assert_eq!(carlitz(&["frobnicate"], "").0, 2);
}

#[test]
fn stdin_matches_file_input() {
    let doc = r#"{"u":"t + x*t^2"}"#;
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("u.json");
    fs::write(&input, doc).unwrap();
    let from_stdin = carlitz(&["invert", "--order", "5"], doc);
    let from_file = carlitz(&["invert", "--order", "5", "-i", input.to_str().unwrap()], "");
    assert_eq!(from_stdin, from_file);
}
