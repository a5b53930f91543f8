//! Runs every `tests/golden/*.args` case and compares stdout and the exit code.
//! `UPDATE_GOLDEN=1` rewrites the expectations.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn run_case(args_file: &Path) -> (String, i32) {
    let text = fs::read_to_string(args_file).unwrap();
    let mut args = Vec::new();
    let mut stdin = None;
    for line in text.lines().filter(|l| !l.is_empty()) {
        match line.strip_prefix("<stdin ") {
            Some(path) => stdin = Some(fs::read(root().join(path)).unwrap()),
            None => args.push(line.to_string()),
        }
    }
    let mut child = Command::new(env!("CARGO_BIN_EXE_gridlab"))
        .args(&args)
        .current_dir(root())
        .env_remove("GRIDLAB_BUDGET")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(&stdin.unwrap_or_default()).unwrap();
    drop(pipe);
    let out = child.wait_with_output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

#[test]
fn golden_cases() {
    let dir = root().join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut cases: Vec<PathBuf> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "args"))
        .collect();
    cases.sort();
    assert!(!cases.is_empty());
    let mut failures = Vec::new();
    for case in &cases {
        let (stdout, code) = run_case(case);
        let out_path = case.with_extension("stdout");
        let code_path = case.with_extension("code");
        if update {
            fs::write(&out_path, &stdout).unwrap();
            fs::write(&code_path, format!("{code}\n")).unwrap();
            continue;
        }
        let want_out = fs::read_to_string(&out_path).unwrap_or_default();
        let want_code: i32 = fs::read_to_string(&code_path).map(|s| s.trim().parse().unwrap()).unwrap_or(-1);
        if stdout != want_out || code != want_code {
            failures.push(format!(
                "{}: exit {code} (want {want_code})\n got: {stdout}\nwant: {want_out}",
                case.file_stem().unwrap().to_string_lossy()
            ));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let case = root().join("tests/golden/gridcheck_1a_p5_s1_t2.args");
    assert_eq!(run_case(&case), run_case(&case));
}

#[test]
fn errors_go_to_stderr() {
    let out = Command::new(env!("CARGO_BIN_EXE_gridlab"))
        .args(["curves", "imult", "--f", "tests/fixtures/malformed.json", "--g", "x", "--point", "0:0:1"])
        .current_dir(root())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn construct_writes_out_file() {
    let path = std::env::temp_dir().join(format!("gridlab-construct-{}.json", std::process::id()));
    let out = Command::new(env!("CARGO_BIN_EXE_gridlab"))
        .args(["construct", "--family", "1d", "--p", "5", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let written = fs::read_to_string(&path).unwrap();
    fs::remove_file(&path).unwrap();
    assert_eq!(written.as_bytes(), out.stdout.as_slice());
    let v: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(v["family"], "1d");
    assert_eq!(v["hypersurface"]["bidegree"], serde_json::json!([1, 1]));
}
