//! Helpers shared by the CLI end-to-end tests and the acceptance target.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    /// `error.code` from the JSON error object on stderr.
    pub fn error_code(&self) -> Option<String> {
        let v: serde_json::Value = serde_json::from_str(self.stderr.lines().last()?).ok()?;
        v["error"]["code"].as_str().map(str::to_owned)
    }
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn bonnetlab(args: &[&str], envs: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bonnetlab"));
    cmd.args(args).env_remove("BONNETLAB_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn run(args: &[&str]) -> Run {
    bonnetlab(args, &[])
}

pub fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

pub struct MatrixCell {
    pub command: &'static str,
    pub case: &'static str,
    pub expected: i32,
    pub got: i32,
    pub error_code: Option<String>,
}

impl MatrixCell {
    pub fn ok(&self) -> bool {
        self.expected == self.got
    }
}

/// Pass / fail / input-error for each of the four commands.
pub fn exit_code_matrix(work: &Path) -> Vec<MatrixCell> {
    let f = |n: &str| fixture(n).to_string_lossy().into_owned();
    let out = |n: &str| work.join(n).to_string_lossy().into_owned();
    let mut cells = Vec::new();
    let mut cell = |command, case, expected, args: Vec<String>| {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let r = run(&args);
        cells.push(MatrixCell { command, case, expected, got: r.code, error_code: r.error_code() });
        r
    };

    cell("construct", "pass", 0, vec!["construct".into(), f("example_a.json"), "--out".into(), out("construct_pass")]);
    cell("construct", "fail", 1, vec!["construct".into(), f("as_printed.json"), "--out".into(), out("construct_fail")]);
    cell(
        "construct",
        "input-error",
        2,
        vec!["construct".into(), f("j_zero.json"), "--out".into(), out("construct_err")],
    );

    let pass = cell("check", "pass", 0, vec!["check".into(), f("example_a.json")]);
    let fail = cell("check", "fail", 1, vec!["check".into(), f("kappa_violated.json")]);
    cell("check", "input-error", 2, vec!["check".into(), f("unknown_field.json")]);

    cell("solve", "pass", 0, vec!["solve".into(), f("perturbed_a.json"), "--out".into(), out("solve_pass")]);
    cell("solve", "fail", 1, vec!["solve".into(), f("frozen_infeasible.json"), "--out".into(), out("solve_fail")]);
    cell("solve", "input-error", 2, vec!["solve".into(), f("missing_anchor.json"), "--out".into(), out("solve_err")]);

    std::fs::write(work.join("check_pass.json"), &pass.stdout).unwrap();
    std::fs::write(work.join("check_fail.json"), &fail.stdout).unwrap();
    cell("report", "pass", 0, vec!["report".into(), out("check_pass.json"), "--out".into(), out("report_pass")]);
    cell("report", "fail", 1, vec!["report".into(), out("check_fail.json"), "--out".into(), out("report_fail")]);
    cell("report", "input-error", 2, vec!["report".into(), f("empty.json"), "--out".into(), out("report_err")]);
    cells
}
