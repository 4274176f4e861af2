#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn clue(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clue")).args(args).current_dir(cwd).output().expect("spawn clue")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Runs `clue` and panics with its stderr unless it exits 0.
pub fn ok(args: &[&str], cwd: &Path) {
    let out = clue(args, cwd);
    assert_eq!(code(&out), 0, "clue {args:?} failed: {}", stderr(&out));
}

pub fn read(path: impl AsRef<Path>) -> String {
    let path = path.as_ref();
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

pub fn json(path: impl AsRef<Path>) -> serde_json::Value {
    serde_json::from_str(&read(path)).unwrap()
}

/// Files in `dir` other than manifests, sorted by name.
pub fn outputs(dir: &Path) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| !p.file_name().unwrap().to_string_lossy().ends_with("manifest.json"))
        .collect();
    files.sort();
    files
}

/// Rows of a `losstrace.csv`.
pub fn loss_trace(path: &Path) -> Vec<clue_core::probe::LossPoint> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.deserialize().map(|row| row.unwrap()).collect()
}
