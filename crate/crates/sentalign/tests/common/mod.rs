#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_sentalign")
}

/// Writes `sentalign.toml` into `dir`, pointing at the fixture vector files.
pub fn write_config(dir: &Path, extra: &str) -> PathBuf {
    let f = fixtures();
    let config = format!(
        "corpus_root = \"corpus\"\nword_vectors = {:?}\n{extra}\n[sentence_vectors]\ntable = {:?}\n",
        f.join("vectors.txt"),
        f.join("sentence_vectors.tsv"),
    );
    let path = dir.join("sentalign.toml");
    fs::write(&path, config).unwrap();
    path
}

pub fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin()).current_dir(dir).env("RUST_LOG", "error").args(args).output().expect("binary runs")
}

pub fn run_ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Ingests the fixture input into `<dir>/corpus`.
pub fn ingest_fixture(dir: &Path) -> PathBuf {
    let config = write_config(dir, "");
    let input = fixtures().join("input");
    run_ok(dir, &["--config", config.to_str().unwrap(), "ingest", "--input", input.to_str().unwrap()]);
    dir.join("corpus")
}

/// Relative path → bytes of every file below `root`.
pub fn tree(root: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                let rel = path
                    .strip_prefix(root)
                    .unwrap()
                    .components()
                    .map(|c| c.as_os_str().to_string_lossy())
                    .collect::<Vec<_>>()
                    .join("/");
                out.insert(rel, fs::read(&path).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}

pub fn digest(files: &BTreeMap<String, Vec<u8>>) -> String {
    let mut h = Sha256::new();
    for (name, body) in files {
        h.update(name.as_bytes());
        h.update([0]);
        h.update((body.len() as u64).to_le_bytes());
        h.update(body);
    }
    hex::encode(h.finalize())
}
