//! Append-only JSON-lines label store and the classification task file.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use log::warn;
use sentalign_core::eval::{LabelRecord, LabelTask};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A sampled match together with the two sentence texts shown to annotators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskRecord {
    #[serde(flatten)]
    pub task: LabelTask,
    pub simple_sentence: String,
    pub complex_sentence: String,
}

/// Parses one JSON value per line. An unterminated last line is the trace of
/// an interrupted append and is dropped with a warning.
pub fn parse_jsonl<T: DeserializeOwned>(text: &str, path: &Path) -> Result<Vec<T>> {
    let mut out = Vec::new();
    let complete = if text.is_empty() || text.ends_with('\n') {
        text
    } else {
        warn!("{}: ignoring unterminated last line", path.display());
        &text[..text.rfind('\n').map_or(0, |i| i + 1)]
    };
    for (n, line) in complete.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(line).map_err(|e| Error::format(path, n + 1, e.to_string()))?);
    }
    Ok(out)
}

pub fn to_jsonl<T: Serialize>(items: &[T]) -> String {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(item).expect("records serialize"));
        out.push('\n');
    }
    out
}

pub fn read_labels(path: &Path) -> Result<Vec<LabelRecord>> {
    parse_jsonl(&fs::read_to_string(path).map_err(Error::io(path))?, path)
}

pub fn read_tasks(path: &Path) -> Result<Vec<TaskRecord>> {
    parse_jsonl(&fs::read_to_string(path).map_err(Error::io(path))?, path)
}

pub fn write_tasks(path: &Path, tasks: &[TaskRecord]) -> Result<()> {
    fs::write(path, to_jsonl(tasks)).map_err(Error::io(path))
}

/// Single writer over the label file. Every append is flushed to disk before
/// it returns.
#[derive(Debug)]
pub struct LabelStore {
    path: PathBuf,
    file: File,
}

impl LabelStore {
    /// Opens (creating if needed) the store and returns the records already in it.
    pub fn open(path: &Path) -> Result<(Self, Vec<LabelRecord>)> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(Error::io(dir))?;
        }
        let existing = if path.exists() { read_labels(path)? } else { Vec::new() };
        let mut file = OpenOptions::new().create(true).append(true).open(path).map_err(Error::io(path))?;
        // Cut off a torn trailing record so the next append starts on a fresh line.
        let len = file.metadata().map_err(Error::io(path))?.len();
        if len > 0 {
            let text = fs::read(path).map_err(Error::io(path))?;
            if text.last() != Some(&b'\n') {
                let keep = text.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
                file.set_len(keep as u64).map_err(Error::io(path))?;
            }
        }
        file.flush().map_err(Error::io(path))?;
        Ok((LabelStore { path: path.to_path_buf(), file }, existing))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&mut self, record: &LabelRecord) -> Result<()> {
        let mut line = serde_json::to_string(record).map_err(Error::json(&self.path))?;
        line.push('\n');
        self.file.write_all(line.as_bytes()).map_err(Error::io(&self.path))?;
        self.file.sync_data().map_err(Error::io(&self.path))
    }

    /// Current file contents.
    pub fn snapshot(&self) -> Result<String> {
        fs::read_to_string(&self.path).map_err(Error::io(&self.path))
    }
}
