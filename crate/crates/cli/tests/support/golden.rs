// Golden transcripts: `<name>.cmd` holds one shell-quoted command line,
// `<name>.out` the expected stdout, stderr and exit code.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

pub fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn cases() -> Vec<(String, Vec<String>)> {
    let mut out: Vec<(String, Vec<String>)> = std::fs::read_dir(dir())
        .expect("golden directory")
        .filter_map(|e| {
            let path = e.ok()?.path();
            (path.extension()? == "cmd").then_some(path)
        })
        .map(|path| {
            let line = std::fs::read_to_string(&path).expect("readable cmd file");
            let args = shlex::split(line.trim()).expect("well-formed command line");
            (path.file_stem().unwrap().to_string_lossy().into_owned(), args)
        })
        .collect();
    out.sort();
    out
}

pub fn transcript(stdout: &[u8], stderr: &[u8], code: i32) -> String {
    let mut t = String::from_utf8_lossy(stdout).into_owned();
    if !stderr.is_empty() {
        t.push_str("[stderr]\n");
        t.push_str(&String::from_utf8_lossy(stderr));
    }
    t.push_str(&format!("[exit {code}]\n"));
    t
}

pub fn run_in_process(args: &[String]) -> String {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = ncalg_cli::run_with_root(args, &dir(), &mut out, &mut err);
    transcript(&out, &err, code)
}

pub fn expected(name: &str) -> Option<String> {
    std::fs::read_to_string(dir().join(format!("{name}.out"))).ok()
}

/// Names of cases whose output differs from the recorded transcript.
pub fn mismatches() -> Vec<String> {
    cases()
        .into_iter()
        .filter(|(name, args)| expected(name).as_deref() != Some(run_in_process(args).as_str()))
        .map(|(name, _)| name)
        .collect()
}

/// Cases per subcommand; every cmd file starts with the subcommand.
pub fn subcommand_counts() -> std::collections::BTreeMap<String, usize> {
    let mut counts = std::collections::BTreeMap::new();
    for (_, args) in cases() {
        *counts.entry(args[0].clone()).or_insert(0) += 1;
    }
    counts
}
