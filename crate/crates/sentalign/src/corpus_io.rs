//! Reading and writing the per-source corpus layout.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;
use sentalign_core::model::{Corpus, CorpusManifest, ManifestEntry};
use sentalign_core::Article;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const PARSED_DIR: &str = "parsed";
pub const RESULTS_DIR: &str = "results";

/// Contents of `<root>/<source>/manifest.json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceManifest {
    pub source: String,
    pub articles: Vec<ManifestEntry>,
}

#[derive(Debug, Deserialize)]
struct RawSourceManifest {
    #[serde(default)]
    source: Option<String>,
    articles: Vec<serde_json::Value>,
}

#[derive(Debug, Default)]
pub struct LoadedCorpus {
    pub corpus: Corpus,
    pub warnings: Vec<String>,
}

/// Slug part of an article id, used as its file name.
pub fn article_slug(id: &str) -> &str {
    id.rsplit('/').next().unwrap_or(id)
}

pub fn article_path(root: &Path, source: &str, id: &str) -> PathBuf {
    root.join(source).join(PARSED_DIR).join(format!("{}.txt", article_slug(id)))
}

/// Source directories of `root` in name order, skipping `results` and hidden entries.
pub fn source_dirs(root: &Path) -> Result<Vec<(String, PathBuf)>> {
    let mut dirs = Vec::new();
    for entry in fs::read_dir(root).map_err(Error::io(root))? {
        let entry = entry.map_err(Error::io(root))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if name == RESULTS_DIR || name.starts_with('.') || !entry.path().is_dir() {
            continue;
        }
        dirs.push((name, entry.path()));
    }
    dirs.sort();
    Ok(dirs)
}

/// Reads one sentence per line, dropping blank lines.
pub fn read_sentences(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(Error::io(path))?;
    Ok(text.lines().map(|l| l.trim_end_matches('\r')).filter(|l| !l.trim().is_empty()).map(str::to_string).collect())
}

/// Loads every source under `root` and resolves article pairs.
///
/// A source directory without a manifest is fatal. Malformed manifest
/// entries, duplicate ids and missing article files are skipped with a
/// warning, as are articles whose partners cannot be resolved.
pub fn load_corpus(root: &Path) -> Result<LoadedCorpus> {
    let mut warnings = Vec::new();
    let mut manifest = CorpusManifest::default();
    let mut articles = Vec::new();
    let mut seen = BTreeSet::new();
    for (name, dir) in source_dirs(root)? {
        let path = dir.join(MANIFEST_FILE);
        if !path.is_file() {
            return Err(Error::MissingManifest(path));
        }
        let text = fs::read_to_string(&path).map_err(Error::io(&path))?;
        let raw: RawSourceManifest = serde_json::from_str(&text).map_err(Error::json(&path))?;
        let source = raw.source.unwrap_or_else(|| name.clone());
        let mut entries = Vec::new();
        for (n, value) in raw.articles.into_iter().enumerate() {
            let entry: ManifestEntry = match serde_json::from_value(value) {
                Ok(e) => e,
                Err(e) => {
                    warnings.push(format!("{}: entry {n} skipped: {e}", path.display()));
                    continue;
                }
            };
            if !seen.insert(entry.id.clone()) {
                warnings.push(format!("{}: duplicate article id {}, skipped", path.display(), entry.id));
                continue;
            }
            let file = article_path(root, &name, &entry.id);
            if !file.is_file() {
                warnings.push(format!("{}: article file {} missing, skipped", entry.id, file.display()));
                continue;
            }
            articles.push(Article::from_entry(&entry, &source, read_sentences(&file)?));
            entries.push(entry);
        }
        manifest.sources.entry(source).or_default().extend(entries);
    }
    let (corpus, more) = Corpus::assemble(manifest, articles);
    warnings.extend(more);
    for w in &warnings {
        warn!("{w}");
    }
    Ok(LoadedCorpus { corpus, warnings })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(Error::io(parent))?;
    }
    fs::write(path, contents).map_err(Error::io(path))
}

/// Lines joined with `\n`, each terminated; embedded line breaks become spaces.
pub fn lines_to_text<S: AsRef<str>>(lines: &[S]) -> String {
    let mut out = String::new();
    for line in lines {
        out.push_str(&line.as_ref().replace(['\r', '\n'], " "));
        out.push('\n');
    }
    out
}

/// Writes `<root>/<source>/manifest.json` and one text file per article.
/// Entries are written in id order.
pub fn write_source(
    root: &Path,
    dir_name: &str,
    manifest: &SourceManifest,
    texts: &dyn Fn(&str) -> Option<Vec<String>>,
) -> Result<()> {
    let mut manifest = manifest.clone();
    manifest.articles.sort_by(|a, b| a.id.cmp(&b.id));
    for entry in &manifest.articles {
        let sentences = texts(&entry.id).unwrap_or_default();
        write_file(&article_path(root, dir_name, &entry.id), &lines_to_text(&sentences))?;
    }
    let path = root.join(dir_name).join(MANIFEST_FILE);
    let mut json = serde_json::to_string_pretty(&manifest).map_err(Error::json(&path))?;
    json.push('\n');
    write_file(&path, &json)
}

/// Writes the loaded articles back in the same layout. Manifest entries
/// without a loaded article are left out.
pub fn write_corpus(root: &Path, corpus: &Corpus) -> Result<()> {
    for (source, entries) in &corpus.manifest.sources {
        let articles = entries.iter().filter(|e| corpus.article(&e.id).is_some()).cloned().collect();
        let manifest = SourceManifest { source: source.clone(), articles };
        let texts = |id: &str| corpus.article(id).map(|a| a.sentences.iter().map(|s| s.raw_text.clone()).collect());
        write_source(root, source, &manifest, &texts)?;
    }
    Ok(())
}
