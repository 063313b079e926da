//! Per-variant alignment output: line-parallel text files plus `matches.json`.

use std::fs;
use std::path::Path;

use sentalign_core::{AlignmentSet, ArticlePair, Match, Matcher, Measure, Variant};
use serde::{Deserialize, Serialize};

use crate::corpus_io::lines_to_text;
use crate::{fmt6, round6, Error, Result};

pub const MATCHES_FILE: &str = "matches.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub simple_index: usize,
    pub complex_index: usize,
    pub simple_sentence: String,
    pub complex_sentence: String,
    #[serde(serialize_with = "six_decimals")]
    pub similarity: f64,
}

fn six_decimals<S: serde::Serializer>(value: &f64, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    let raw = serde_json::value::RawValue::from_string(fmt6(*value)).map_err(serde::ser::Error::custom)?;
    raw.serialize(serializer)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub pair_id: String,
    pub simple_article: String,
    pub complex_article: String,
    pub matches: Vec<MatchRecord>,
}

/// Everything written for one variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantOutput {
    pub variant: String,
    pub measure: Measure,
    pub matcher: Matcher,
    pub threshold_k: Option<f64>,
    pub pairs: Vec<PairRecord>,
}

fn one_line(s: &str) -> String {
    s.replace(['\r', '\n'], " ")
}

impl VariantOutput {
    /// Collects the alignment sets of one variant in pair-id order.
    pub fn new<'a, I>(variant: Variant, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a AlignmentSet, ArticlePair<'a>)>,
    {
        let mut pairs = Vec::new();
        for (set, pair) in sets {
            set.validate()?;
            let mut matches = Vec::with_capacity(set.matches.len());
            for m in &set.matches {
                let text =
                    |article: &sentalign_core::Article, i: usize| {
                        article.sentences.get(i).map(|s| one_line(&s.raw_text)).ok_or_else(|| {
                            sentalign_core::Error::IndexOutOfRange(format!("{}: sentence {i}", article.id))
                        })
                    };
                matches.push(MatchRecord {
                    simple_index: m.simple_index,
                    complex_index: m.complex_index,
                    simple_sentence: text(pair.simple, m.simple_index)?,
                    complex_sentence: text(pair.complex, m.complex_index)?,
                    similarity: round6(m.similarity),
                });
            }
            pairs.push(PairRecord {
                pair_id: set.pair_id.clone(),
                simple_article: pair.simple.id.clone(),
                complex_article: pair.complex.id.clone(),
                matches,
            });
        }
        pairs.sort_by(|a, b| a.pair_id.cmp(&b.pair_id));
        Ok(VariantOutput {
            variant: variant.name(),
            measure: variant.measure,
            matcher: variant.matcher,
            threshold_k: variant.k,
            pairs,
        })
    }

    pub fn variant(&self) -> Variant {
        Variant { measure: self.measure, matcher: self.matcher, k: self.threshold_k }
    }

    pub fn alignment_sets(&self) -> Vec<AlignmentSet> {
        self.pairs
            .iter()
            .map(|p| AlignmentSet {
                pair_id: p.pair_id.clone(),
                measure: self.measure,
                matcher: self.matcher,
                threshold_k: self.threshold_k,
                matches: p
                    .matches
                    .iter()
                    .map(|m| Match {
                        simple_index: m.simple_index,
                        complex_index: m.complex_index,
                        similarity: m.similarity,
                    })
                    .collect(),
            })
            .collect()
    }

    pub fn total_matches(&self) -> usize {
        self.pairs.iter().map(|p| p.matches.len()).sum()
    }

    /// Writes the variant into `dir`, creating it if needed.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(Error::io(dir))?;
        for pair in &self.pairs {
            let simple: Vec<&str> = pair.matches.iter().map(|m| m.simple_sentence.as_str()).collect();
            let complex: Vec<&str> = pair.matches.iter().map(|m| m.complex_sentence.as_str()).collect();
            for (suffix, lines) in [("simple", simple), ("complex", complex)] {
                let path = dir.join(format!("{}.{suffix}.txt", pair.pair_id));
                fs::write(&path, lines_to_text(&lines)).map_err(Error::io(&path))?;
            }
        }
        let path = dir.join(MATCHES_FILE);
        let mut json = serde_json::to_string_pretty(self).map_err(Error::json(&path))?;
        json.push('\n');
        fs::write(&path, json).map_err(Error::io(&path))
    }

    /// Reads a variant directory and checks the text files against `matches.json`.
    pub fn read(dir: &Path) -> Result<Self> {
        let path = dir.join(MATCHES_FILE);
        let text = fs::read_to_string(&path).map_err(Error::io(&path))?;
        let out: VariantOutput = serde_json::from_str(&text).map_err(Error::json(&path))?;
        for pair in &out.pairs {
            for suffix in ["simple", "complex"] {
                let file = dir.join(format!("{}.{suffix}.txt", pair.pair_id));
                let body = fs::read_to_string(&file).map_err(Error::io(&file))?;
                let lines: Vec<&str> = body.lines().collect();
                if lines.len() != pair.matches.len() {
                    return Err(Error::format(
                        &file,
                        lines.len(),
                        format!("{} lines for {} matches", lines.len(), pair.matches.len()),
                    ));
                }
                for (n, (line, m)) in lines.iter().zip(&pair.matches).enumerate() {
                    let expected = if suffix == "simple" { &m.simple_sentence } else { &m.complex_sentence };
                    if line != expected {
                        return Err(Error::format(&file, n + 1, "line differs from matches.json"));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Variant directories under `results`, in name order.
pub fn read_results(results: &Path) -> Result<Vec<VariantOutput>> {
    let mut dirs = Vec::new();
    if !results.exists() {
        return Ok(Vec::new());
    }
    for entry in fs::read_dir(results).map_err(Error::io(results))? {
        let entry = entry.map_err(Error::io(results))?;
        if entry.path().join(MATCHES_FILE).is_file() {
            dirs.push(entry.path());
        }
    }
    dirs.sort();
    dirs.iter().map(|d| VariantOutput::read(d)).collect()
}
