//! Raw HTML / text input → corpus layout.
//!
//! Input layout, one directory per source:
//!
//! ```text
//! <input>/<source>/articles.json   {"source": "...", "articles": [entry, ...]}
//! <input>/<source>/template.toml   extraction template, needed for HTML files
//! <input>/<source>/<file>          .html/.htm or plain text
//! ```
//!
//! Each entry carries `file`, `url`, `crawl_date`, optional
//! `publication_date`, `simple`, `language_tier` and `associated` (partner
//! URLs or article ids).

use std::fs;
use std::path::Path;

use log::warn;
use sentalign_core::model::{article_id, ManifestEntry};
use sentalign_core::text::{RuleSplitter, SentenceSplitter};
use sentalign_core::LanguageTier;
use serde::Deserialize;

use crate::corpus_io::{self, SourceManifest};
use crate::extract::{extract_text, ExtractionTemplate};
use crate::{Error, Result};

pub const INPUT_MANIFEST: &str = "articles.json";
pub const TEMPLATE_FILE: &str = "template.toml";

#[derive(Debug, Clone, Deserialize)]
pub struct InputEntry {
    pub file: String,
    pub url: String,
    pub crawl_date: String,
    #[serde(default)]
    pub publication_date: Option<String>,
    pub simple: bool,
    pub language_tier: LanguageTier,
    #[serde(default)]
    pub associated: Vec<String>,
}

#[derive(Debug, Deserialize)]
struct InputManifest {
    source: String,
    articles: Vec<InputEntry>,
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct IngestReport {
    pub written: usize,
    /// `(file, reason)` of every discarded article.
    pub discarded: Vec<(String, String)>,
}

fn is_html(file: &str) -> bool {
    let lower = file.to_ascii_lowercase();
    lower.ends_with(".html") || lower.ends_with(".htm")
}

/// Partner references given as URLs are turned into article ids of the same source.
fn partner_id(source: &str, reference: &str) -> String {
    if reference.contains("://") {
        article_id(source, reference)
    } else {
        reference.to_string()
    }
}

pub fn ingest(input: &Path, output: &Path, splitter: &RuleSplitter) -> Result<IngestReport> {
    let mut report = IngestReport::default();
    for (dir_name, dir) in corpus_io::source_dirs(input)? {
        let path = dir.join(INPUT_MANIFEST);
        let text = fs::read_to_string(&path).map_err(Error::io(&path))?;
        let manifest: InputManifest = serde_json::from_str(&text).map_err(Error::json(&path))?;
        let template_path = dir.join(TEMPLATE_FILE);
        let template = if template_path.is_file() { Some(ExtractionTemplate::load(&template_path)?) } else { None };
        let source = manifest.source.clone();

        let mut entries = Vec::new();
        let mut texts = std::collections::BTreeMap::new();
        for item in manifest.articles {
            let file = dir.join(&item.file);
            let outcome = fs::read_to_string(&file).map_err(Error::io(&file)).and_then(|raw| {
                let text = if is_html(&item.file) {
                    let template = template
                        .as_ref()
                        .ok_or_else(|| Error::Template(format!("{dir_name}: HTML input needs {TEMPLATE_FILE}")))?;
                    extract_text(&raw, template)?
                } else {
                    raw
                };
                let sentences = splitter.split(&text);
                if sentences.is_empty() {
                    return Err(Error::Unusable("no sentences".into()));
                }
                Ok(sentences)
            });
            let sentences = match outcome {
                Ok(s) => s,
                Err(e @ (Error::Unusable(_) | Error::Io { .. })) => {
                    warn!("{}: discarded: {e}", file.display());
                    report.discarded.push((format!("{dir_name}/{}", item.file), e.to_string()));
                    continue;
                }
                Err(e) => return Err(e),
            };
            let id = article_id(&source, &item.url);
            texts.insert(id.clone(), sentences);
            entries.push(ManifestEntry {
                id,
                url: item.url,
                crawl_date: item.crawl_date,
                publication_date: item.publication_date,
                simple: item.simple,
                associated: item.associated.iter().map(|a| partner_id(&source, a)).collect(),
                language_tier: item.language_tier,
            });
        }
        report.written += entries.len();
        let out = SourceManifest { source: source.clone(), articles: entries };
        corpus_io::write_source(output, &source, &out, &|id| texts.get(id).cloned())?;
    }
    Ok(report)
}
