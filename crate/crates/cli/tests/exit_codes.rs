use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn diagcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diagcat"))
        .args(args)
        .current_dir(corpus())
        .output()
        .unwrap()
}

fn code(args: &[&str]) -> i32 {
    diagcat(args).status.code().unwrap()
}

#[test]
fn pass_and_fail() {
    assert_eq!(code(&["check-cat", "kite.fincat"]), 0);
    assert_eq!(code(&["check-cat", "mutations/associativity.fincat"]), 1);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(code(&["check-cat", "missing.fincat"]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
    assert_eq!(code(&["infer", "{}", "A -> "]), 2);
    assert_eq!(code(&["check-cat", "kite.fincat", "--cap", "0"]), 2);
}

#[test]
fn parse_errors_carry_a_position() {
    let dir = std::env::temp_dir().join(format!("diagcat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.diag");
    std::fs::write(
        &bad,
        "layer L in \"C\"\nnode A : L \"A\"\narrow f : A => A \"f\"\n",
    )
    .unwrap();
    let out = diagcat(&["stages", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3, column 13"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cap_exceeded_exits_3() {
    let out = diagcat(&["--cap", "2", "yoneda", "kite_yoneda_1.yon"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn reduce_formats() {
    let dot = diagcat(&[
        "reduce",
        "g (add 2 3)",
        "--sig",
        "arith.sig",
        "--format",
        "graph",
    ]);
    let dot = String::from_utf8(dot.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("label=\"29\""));
}

#[test]
fn examples_run_the_whole_corpus() {
    let out = diagcat(&["examples"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(!text.contains("FAIL "), "{text}");
    let last = text.lines().last().unwrap();
    let (ok, total) = last.split_once(" of ").unwrap();
    assert!(last.ends_with("entries as expected"));
    assert_eq!(ok, total.split(' ').next().unwrap());
}

#[test]
fn corpus_location_from_environment() {
    let empty = std::env::temp_dir().join(format!("diagcat-empty-{}", std::process::id()));
    std::fs::create_dir_all(&empty).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_diagcat"))
        .arg("examples")
        .env("DIAGCAT_CORPUS", &empty)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("MANIFEST"));
    std::fs::remove_dir_all(&empty).unwrap();
}

#[test]
fn sequential_mode_matches() {
    let par = diagcat(&[
        "eval",
        "equalizer.diag",
        "--model",
        "equalizer_monoid.model",
    ]);
    let seq = diagcat(&[
        "--sequential",
        "eval",
        "equalizer.diag",
        "--model",
        "equalizer_monoid.model",
    ]);
    assert_eq!(par.stdout, seq.stdout);
    assert_eq!(seq.status.code(), Some(1));
}
