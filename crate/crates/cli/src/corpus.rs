//! The corpus manifest: one command per line, with the expected verdict.
//!
//! ```text
//! check-cat kite.fincat => pass
//! check-fun mutations/respids.fun => fail respids
//! context univ_arrow.diag => golden univ_arrow.context
//! check-fun mutations/typing.fun => error
//! ```
//!
//! `fail NAME` additionally requires the obligation `NAME` to be the one
//! reported with a witness. Paths are relative to the corpus directory.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Parser;
use diagcat::{EnumConfig, Error, Result};

use crate::commands::{execute, Outcome};
use crate::{Cli, Command};

pub const MANIFEST: &str = "MANIFEST";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expect {
    Pass,
    Fail(Option<String>),
    Error,
    Golden(PathBuf),
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub line: usize,
    pub args: Vec<String>,
    pub expect: Expect,
}

pub fn default_corpus() -> PathBuf {
    match std::env::var_os("DIAGCAT_CORPUS") {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus"),
    }
}

/// Splits on whitespace, keeping double-quoted runs together.
fn words(s: &str, line: usize) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut started = false;
    for c in s.chars() {
        match c {
            '"' => {
                quoted = !quoted;
                started = true;
            }
            c if c.is_whitespace() && !quoted => {
                if started {
                    out.push(std::mem::take(&mut cur));
                    started = false;
                }
            }
            c => {
                cur.push(c);
                started = true;
            }
        }
    }
    if quoted {
        return Err(Error::parse(line, s.len(), "unterminated quote"));
    }
    if started {
        out.push(cur);
    }
    Ok(out)
}

pub fn parse_manifest(text: &str) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (cmd, expect) = line
            .rsplit_once("=>")
            .ok_or_else(|| Error::parse(n, 1, "missing `=> expectation`"))?;
        let expect = expect.trim();
        let expect = match expect
            .split_once(' ')
            .map_or((expect, ""), |(a, b)| (a, b.trim()))
        {
            ("pass", "") => Expect::Pass,
            ("fail", "") => Expect::Fail(None),
            ("fail", name) => Expect::Fail(Some(name.to_string())),
            ("error", "") => Expect::Error,
            ("golden", file) if !file.is_empty() => Expect::Golden(PathBuf::from(file)),
            _ => {
                return Err(Error::parse(
                    n,
                    raw.find("=>").unwrap_or(0) + 3,
                    format!("unknown expectation `{expect}`"),
                ))
            }
        };
        out.push(Entry {
            line: n,
            args: words(cmd, n)?,
            expect,
        });
    }
    Ok(out)
}

fn rebase(cmd: &mut Command, dir: &Path) {
    let fix = |p: &mut PathBuf| {
        if p.is_relative() {
            *p = dir.join(&*p);
        }
    };
    match cmd {
        Command::CheckCat { file }
        | Command::CheckFun { file }
        | Command::CheckNt { file }
        | Command::Stages { file }
        | Command::Context { file, .. }
        | Command::Render { file }
        | Command::Yoneda { file } => fix(file),
        Command::Eval { file, model } => {
            fix(file);
            fix(model);
        }
        Command::Reduce { sig, .. } => fix(sig),
        Command::Kan {
            functor,
            values,
            sources,
            targets,
        } => {
            fix(functor);
            fix(values);
            sources.iter_mut().chain(targets.iter_mut()).for_each(fix);
        }
        Command::Adj { manifest, .. } => fix(manifest),
        Command::Infer { .. } | Command::Examples { .. } => {}
    }
}

/// Runs one entry; `Ok(None)` when it behaved as expected, otherwise a
/// description of the difference.
pub fn run_entry(entry: &Entry, dir: &Path, cfg: &EnumConfig) -> Result<Option<String>> {
    let argv = std::iter::once("diagcat".to_string()).chain(entry.args.iter().cloned());
    let mut cli =
        Cli::try_parse_from(argv).map_err(|e| Error::parse(entry.line, 1, e.to_string()))?;
    if matches!(cli.command, Command::Examples { .. }) {
        return Err(Error::parse(
            entry.line,
            1,
            "the manifest cannot run itself",
        ));
    }
    rebase(&mut cli.command, dir);
    let mut local = cli.config();
    local.parallel &= cfg.parallel;
    let got = execute(&cli.command, cli.format, &local);
    Ok(match (&entry.expect, got) {
        (Expect::Error, Err(_)) => None,
        (Expect::Error, Ok(out)) => Some(format!("expected an error, got {}", verdict(&out))),
        (_, Err(e)) => Some(format!("unexpected error: {e}")),
        (Expect::Pass, Ok(out)) if out.passed => None,
        (Expect::Fail(None), Ok(out)) if !out.passed => None,
        (Expect::Fail(Some(name)), Ok(out)) if !out.passed => {
            let marker = format!("[FAIL] {name} witness");
            if out.text.contains(&marker) {
                None
            } else {
                Some(format!("failed, but not on obligation `{name}`"))
            }
        }
        (Expect::Golden(file), Ok(out)) => {
            let path = dir.join(file);
            let want = std::fs::read_to_string(&path).map_err(|e| Error::Io {
                path: path.display().to_string(),
                msg: e.to_string(),
            })?;
            if want == out.text {
                None
            } else {
                Some(format!("output differs from {}", file.display()))
            }
        }
        (_, Ok(out)) => Some(format!(
            "expected {:?}, got {}",
            entry.expect,
            verdict(&out)
        )),
    })
}

fn verdict(out: &Outcome) -> &'static str {
    if out.passed {
        "pass"
    } else {
        "fail"
    }
}

pub fn run_manifest(dir: Option<&Path>, cfg: &EnumConfig) -> Result<Outcome> {
    let dir = dir.map_or_else(default_corpus, Path::to_path_buf);
    let path = dir.join(MANIFEST);
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    let entries = parse_manifest(&text)?;
    let mut out = String::new();
    let mut bad = 0;
    for entry in &entries {
        let shown = entry.args.join(" ");
        match run_entry(entry, &dir, cfg)? {
            None => writeln!(out, "ok    {shown}").unwrap(),
            Some(why) => {
                bad += 1;
                writeln!(out, "FAIL  {shown}: {why}").unwrap();
            }
        }
    }
    writeln!(
        out,
        "{} of {} entries as expected",
        entries.len() - bad,
        entries.len()
    )
    .unwrap();
    Ok(Outcome {
        text: out,
        passed: bad == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_lines() {
        let es = parse_manifest("# c\n\ninfer \"{f: A'->A}\" \"A -> A\" => pass\ncheck-cat x.fincat => fail associativity\n")
            .unwrap();
        assert_eq!(es.len(), 2);
        assert_eq!(es[0].args, ["infer", "{f: A'->A}", "A -> A"]);
        assert_eq!(es[1].expect, Expect::Fail(Some("associativity".into())));
        assert!(parse_manifest("check-cat x => maybe").is_err());
    }
}
