//! `.gt` ground-truth files.
//!
//! ```text
//! # pair <pair-id>
//! <simple_index>\t<complex_index>
//! ```
//!
//! A file may hold several pair sections. Other `#` lines and blank lines
//! are ignored.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sentalign_core::eval::GroundTruth;

use crate::{Error, Result};

pub const EXTENSION: &str = "gt";
const HEADER: &str = "# pair ";

pub fn to_text(truths: &[GroundTruth]) -> String {
    let mut out = String::new();
    for gt in truths {
        out.push_str(HEADER);
        out.push_str(&gt.pair_id);
        out.push('\n');
        for (s, c) in gt.matches() {
            out.push_str(&format!("{s}\t{c}\n"));
        }
    }
    out
}

pub fn parse(text: &str, path: &Path) -> Result<Vec<GroundTruth>> {
    let mut sections: Vec<(String, Vec<(usize, usize)>)> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if let Some(id) = line.strip_prefix(HEADER) {
            sections.push((id.trim().to_string(), Vec::new()));
            continue;
        }
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((_, matches)) = sections.last_mut() else {
            return Err(Error::format(path, n + 1, "match line before any pair header"));
        };
        let parsed = line.split_once('\t').and_then(|(s, c)| Some((s.trim().parse().ok()?, c.trim().parse().ok()?)));
        match parsed {
            Some(pair) => matches.push(pair),
            None => return Err(Error::format(path, n + 1, format!("expected `simple<TAB>complex`, got {line:?}"))),
        }
    }
    sections
        .into_iter()
        .map(|(id, matches)| GroundTruth::new(id, matches).map_err(|e| Error::format(path, 0, e.to_string())))
        .collect()
}

pub fn read_file(path: &Path) -> Result<Vec<GroundTruth>> {
    let text = fs::read_to_string(path).map_err(Error::io(path))?;
    parse(&text, path)
}

/// Reads a single `.gt` file, or every `.gt` file of a directory in name order.
pub fn read(path: &Path) -> Result<Vec<GroundTruth>> {
    if path.is_file() {
        return read_file(path);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)
        .map_err(Error::io(path))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == EXTENSION))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for file in files {
        out.extend(read_file(&file)?);
    }
    Ok(out)
}

/// Replaces `path` through a temporary file and rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(Error::io(dir))?;
    let tmp = path.with_extension("tmp");
    let mut file = fs::File::create(&tmp).map_err(Error::io(&tmp))?;
    file.write_all(contents).map_err(Error::io(&tmp))?;
    file.sync_all().map_err(Error::io(&tmp))?;
    fs::rename(&tmp, path).map_err(Error::io(path))
}

pub fn write_file(path: &Path, truths: &[GroundTruth]) -> Result<()> {
    write_atomic(path, to_text(truths).as_bytes())
}

/// `<dir>/<pair-id>.gt`
pub fn pair_path(dir: &Path, pair_id: &str) -> PathBuf {
    dir.join(format!("{pair_id}.{EXTENSION}"))
}
