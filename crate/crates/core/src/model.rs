//! Domain types: articles, pairs, alignments and the corpus manifest.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::similarity::Measure;
use crate::{Error, Result};

/// Language variety of an article.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LanguageTier {
    /// Alltagssprache, everyday German. The complex side of a pair.
    AS,
    /// Einfache Sprache.
    ES,
    /// Leichte Sprache.
    LS,
}

impl LanguageTier {
    pub fn is_simple(self) -> bool {
        !matches!(self, LanguageTier::AS)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LanguageTier::AS => "AS",
            LanguageTier::ES => "ES",
            LanguageTier::LS => "LS",
        }
    }
}

impl fmt::Display for LanguageTier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub index: usize,
    pub raw_text: String,
    /// Normalized words; empty until preprocessing has run.
    pub tokens: Vec<String>,
    /// `tokens` joined by single spaces, the input for character n-grams.
    pub char_stream: String,
}

impl Sentence {
    pub fn new(index: usize, raw_text: impl Into<String>) -> Self {
        Sentence { index, raw_text: raw_text.into(), tokens: Vec::new(), char_stream: String::new() }
    }

    pub fn with_tokens(index: usize, raw_text: impl Into<String>, tokens: Vec<String>) -> Self {
        let char_stream = tokens.join(" ");
        Sentence { index, raw_text: raw_text.into(), tokens, char_stream }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Article {
    pub id: String,
    pub source: String,
    pub url: String,
    pub crawl_date: String,
    pub publication_date: Option<String>,
    pub language_tier: LanguageTier,
    pub sentences: Vec<Sentence>,
}

impl Article {
    /// Builds an article from metadata and raw sentence strings, numbering them 0..n.
    pub fn from_entry<I, S>(entry: &ManifestEntry, source: &str, sentences: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Article {
            id: entry.id.clone(),
            source: source.to_string(),
            url: entry.url.clone(),
            crawl_date: entry.crawl_date.clone(),
            publication_date: entry.publication_date.clone(),
            language_tier: entry.language_tier,
            sentences: sentences.into_iter().enumerate().map(|(i, s)| Sentence::new(i, s)).collect(),
        }
    }

    /// Final path component of the id, used for file names.
    pub fn slug(&self) -> &str {
        self.id.rsplit('/').next().unwrap_or(&self.id)
    }
}

/// One simple article bound to one complex article.
#[derive(Debug, Clone, Copy)]
pub struct ArticlePair<'a> {
    pub simple: &'a Article,
    pub complex: &'a Article,
}

impl<'a> ArticlePair<'a> {
    pub fn new(simple: &'a Article, complex: &'a Article) -> Result<Self> {
        if !simple.language_tier.is_simple() {
            return Err(Error::InvalidPair(format!("{} is not a simple article", simple.id)));
        }
        if complex.language_tier != LanguageTier::AS {
            return Err(Error::InvalidPair(format!("{} is not an AS article", complex.id)));
        }
        Ok(ArticlePair { simple, complex })
    }

    pub fn id(&self) -> String {
        pair_id(&self.simple.id, &self.complex.id)
    }
}

/// File-system safe identifier of a pair: `<simple>__<complex>` with `/` replaced by `.`.
pub fn pair_id(simple_id: &str, complex_id: &str) -> String {
    format!("{}__{}", simple_id.replace('/', "."), complex_id.replace('/', "."))
}

/// Lowercases, maps every non-alphanumeric ASCII character to `-` and collapses runs.
pub fn slugify(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars().flat_map(char::to_lowercase) {
        if c.is_ascii_alphanumeric() {
            out.push(c);
        } else if !out.ends_with('-') {
            out.push('-');
        }
    }
    out.trim_matches('-').to_string()
}

/// Article id `{source}/{url-path-slug}`.
pub fn article_id(source: &str, url: &str) -> String {
    let without_scheme = url.split_once("://").map_or(url, |(_, rest)| rest);
    let path = match without_scheme.find('/') {
        Some(i) if url.contains("://") => &without_scheme[i..],
        Some(_) => without_scheme,
        None if url.contains("://") => "",
        None => without_scheme,
    };
    let path = path.split(['?', '#']).next().unwrap_or("");
    let mut slug = slugify(path);
    if slug.is_empty() {
        slug.push_str("index");
    }
    format!("{}/{}", slugify(source), slug)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Matcher {
    #[serde(rename = "mst")]
    Mst,
    #[serde(rename = "mstlis")]
    MstLis,
}

impl Matcher {
    pub const ALL: [Matcher; 2] = [Matcher::Mst, Matcher::MstLis];

    pub fn name(self) -> &'static str {
        match self {
            Matcher::Mst => "mst",
            Matcher::MstLis => "mstlis",
        }
    }
}

impl fmt::Display for Matcher {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Matcher {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mst" => Ok(Matcher::Mst),
            "mstlis" | "mst-lis" | "mst_lis" => Ok(Matcher::MstLis),
            _ => Err(Error::Parse { kind: "matcher", value: s.to_string() }),
        }
    }
}

/// A measure + matcher + optional `k` combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Variant {
    pub measure: Measure,
    pub matcher: Matcher,
    pub k: Option<f64>,
}

impl Variant {
    /// Directory name `<measure>-<matcher>-<k or "nothr">`.
    pub fn name(&self) -> String {
        match self.k {
            Some(k) => format!("{}-{}-{}", self.measure.name(), self.matcher.name(), k),
            None => format!("{}-{}-nothr", self.measure.name(), self.matcher.name()),
        }
    }

    /// The 8 × 2 × {none, `k`} grid in a fixed order.
    pub fn grid(k: f64) -> Vec<Variant> {
        let mut out = Vec::with_capacity(32);
        for measure in Measure::ALL {
            for matcher in Matcher::ALL {
                for k in [None, Some(k)] {
                    out.push(Variant { measure, matcher, k });
                }
            }
        }
        out
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { kind: "variant", value: s.to_string() };
        let (rest, k) = s.rsplit_once('-').ok_or_else(bad)?;
        let (measure, matcher) = rest.rsplit_once('-').ok_or_else(bad)?;
        let k = match k {
            "nothr" => None,
            k => Some(k.parse::<f64>().map_err(|_| bad())?),
        };
        Ok(Variant { measure: measure.parse()?, matcher: matcher.parse()?, k })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Match {
    pub simple_index: usize,
    pub complex_index: usize,
    pub similarity: f64,
}

/// Matches for one article pair under one variant. At most one match per simple index.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentSet {
    pub pair_id: String,
    pub measure: Measure,
    pub matcher: Matcher,
    pub threshold_k: Option<f64>,
    pub matches: Vec<Match>,
}

impl AlignmentSet {
    pub fn variant(&self) -> Variant {
        Variant { measure: self.measure, matcher: self.matcher, k: self.threshold_k }
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for m in &self.matches {
            if !seen.insert(m.simple_index) {
                return Err(Error::DuplicateSimpleIndex(m.simple_index));
            }
        }
        Ok(())
    }

    pub fn pairs(&self) -> BTreeSet<(usize, usize)> {
        self.matches.iter().map(|m| (m.simple_index, m.complex_index)).collect()
    }
}

/// Metadata of one article as stored in a source's `manifest.json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub url: String,
    pub crawl_date: String,
    #[serde(default)]
    pub publication_date: Option<String>,
    pub simple: bool,
    #[serde(default)]
    pub associated: Vec<String>,
    pub language_tier: LanguageTier,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusManifest {
    pub sources: BTreeMap<String, Vec<ManifestEntry>>,
}

impl CorpusManifest {
    pub fn entry(&self, id: &str) -> Option<&ManifestEntry> {
        self.sources.values().flatten().find(|e| e.id == id)
    }

    pub fn len(&self) -> usize {
        self.sources.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Loaded articles plus the resolved simple/complex pairs (indices into `articles`).
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub manifest: CorpusManifest,
    pub articles: Vec<Article>,
    pub pairs: Vec<(usize, usize)>,
}

impl Corpus {
    /// Resolves pairs through the associated-article ids of both sides.
    ///
    /// Ids that do not resolve to a loaded article of the opposite side are
    /// reported. A simple article left without any partner is removed from
    /// the corpus.
    pub fn assemble(manifest: CorpusManifest, articles: Vec<Article>) -> (Corpus, Vec<String>) {
        let mut warnings = Vec::new();
        let by_id: BTreeMap<&str, usize> = articles.iter().enumerate().map(|(i, a)| (a.id.as_str(), i)).collect();

        let mut pair_set = BTreeSet::new();
        let mut partnerless = BTreeSet::new();
        for entry in manifest.sources.values().flatten() {
            let Some(&own) = by_id.get(entry.id.as_str()) else { continue };
            let own_simple = articles[own].language_tier.is_simple();
            let mut resolved = 0;
            for partner in &entry.associated {
                match by_id.get(partner.as_str()) {
                    Some(&p) if articles[p].language_tier.is_simple() != own_simple => {
                        resolved += 1;
                        pair_set.insert(if own_simple { (own, p) } else { (p, own) });
                    }
                    Some(_) => {
                        warnings.push(format!("{}: associated article {partner} has the same language side", entry.id))
                    }
                    None => warnings.push(format!("{}: associated article {partner} cannot be resolved", entry.id)),
                }
            }
            if own_simple && resolved == 0 {
                partnerless.insert(own);
            }
        }
        // A partner may still list this article from its own side.
        partnerless.retain(|i| !pair_set.iter().any(|(s, _)| s == i));
        for &i in &partnerless {
            warnings.push(format!("{}: no usable partner article, skipped", articles[i].id));
        }

        let mut remap = BTreeMap::new();
        let mut kept = Vec::with_capacity(articles.len());
        for (i, article) in articles.into_iter().enumerate() {
            if !partnerless.contains(&i) {
                remap.insert(i, kept.len());
                kept.push(article);
            }
        }
        let pairs = pair_set.into_iter().map(|(s, c)| (remap[&s], remap[&c])).collect();
        (Corpus { manifest, articles: kept, pairs }, warnings)
    }

    pub fn pair(&self, index: usize) -> ArticlePair<'_> {
        let (s, c) = self.pairs[index];
        ArticlePair { simple: &self.articles[s], complex: &self.articles[c] }
    }

    pub fn iter_pairs(&self) -> impl Iterator<Item = ArticlePair<'_>> + '_ {
        (0..self.pairs.len()).map(move |i| self.pair(i))
    }

    pub fn article(&self, id: &str) -> Option<&Article> {
        self.articles.iter().find(|a| a.id == id)
    }
}
