//! Descriptive corpus statistics per source and language side.
//!
//! Counts use whitespace tokens of the raw sentences. All per-article and
//! per-sentence figures are means over articles.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::model::Article;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Simple,
    Complex,
}

impl Side {
    pub fn of(article: &Article) -> Side {
        if article.language_tier.is_simple() {
            Side::Simple
        } else {
            Side::Complex
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Simple => "simple",
            Side::Complex => "complex",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub source: String,
    pub side: Side,
    pub articles: usize,
    pub tokens: usize,
    pub sentences_per_article: f64,
    pub tokens_per_sentence: f64,
    pub words_per_article: f64,
}

pub const TOTAL: &str = "total";

#[derive(Default)]
struct Acc {
    articles: usize,
    tokens: usize,
    sentences: usize,
    with_sentences: usize,
    tokens_per_sentence: f64,
    distinct_words: usize,
}

impl Acc {
    fn add(&mut self, article: &Article) {
        let tokens: Vec<&str> = article.sentences.iter().flat_map(|s| s.raw_text.split_whitespace()).collect();
        self.articles += 1;
        self.tokens += tokens.len();
        self.sentences += article.sentences.len();
        if !article.sentences.is_empty() {
            self.with_sentences += 1;
            self.tokens_per_sentence += tokens.len() as f64 / article.sentences.len() as f64;
        }
        self.distinct_words += tokens.iter().collect::<BTreeSet<_>>().len();
    }

    fn row(&self, source: &str, side: Side) -> StatsRow {
        let per_article = |x: f64| if self.articles == 0 { 0.0 } else { x / self.articles as f64 };
        StatsRow {
            source: source.to_string(),
            side,
            articles: self.articles,
            tokens: self.tokens,
            sentences_per_article: per_article(self.sentences as f64),
            tokens_per_sentence: if self.with_sentences == 0 {
                0.0
            } else {
                self.tokens_per_sentence / self.with_sentences as f64
            },
            words_per_article: per_article(self.distinct_words as f64),
        }
    }
}

/// One row per (source, side) in sorted order, then one `total` row per side.
pub fn corpus_statistics<'a, I>(articles: I) -> Vec<StatsRow>
where
    I: IntoIterator<Item = &'a Article>,
{
    let mut groups: BTreeMap<(Side, &str), Acc> = BTreeMap::new();
    let mut totals: BTreeMap<Side, Acc> = BTreeMap::new();
    for article in articles {
        let side = Side::of(article);
        groups.entry((side, article.source.as_str())).or_default().add(article);
        totals.entry(side).or_default().add(article);
    }
    let mut rows: Vec<StatsRow> = groups.iter().map(|((side, source), acc)| acc.row(source, *side)).collect();
    rows.extend(totals.iter().map(|(side, acc)| acc.row(TOTAL, *side)));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{LanguageTier, ManifestEntry};
    use alloc::vec;

    fn article(source: &str, tier: LanguageTier, sentences: &[&str]) -> Article {
        let entry = ManifestEntry {
            id: alloc::format!("{source}/x"),
            url: String::new(),
            crawl_date: String::new(),
            publication_date: None,
            simple: tier.is_simple(),
            associated: vec![],
            language_tier: tier,
        };
        Article::from_entry(&entry, source, sentences.iter().copied())
    }

    #[test]
    fn single_sentence_article() {
        let rows = corpus_statistics([&article("x", LanguageTier::LS, &["a b a"])]);
        assert_eq!(rows.len(), 2);
        let r = &rows[0];
        assert_eq!((r.articles, r.tokens), (1, 3));
        assert_eq!((r.sentences_per_article, r.tokens_per_sentence, r.words_per_article), (1.0, 3.0, 2.0));
        assert_eq!(rows[1].source, TOTAL);
    }

    #[test]
    fn means_over_articles() {
        // Article 1: 2 sentences, 6 tokens, 4 distinct. Article 2: 1 sentence, 2 tokens, 2 distinct.
        let a = article("x", LanguageTier::AS, &["Der Hund bellt.", "Der Hund schläft."]);
        let b = article("x", LanguageTier::AS, &["Hallo Welt."]);
        let rows = corpus_statistics([&a, &b]);
        let r = &rows[0];
        assert_eq!((r.articles, r.tokens), (2, 8));
        assert_eq!(r.sentences_per_article, 1.5);
        assert_eq!(r.tokens_per_sentence, (3.0 + 2.0) / 2.0);
        assert_eq!(r.words_per_article, 3.0);
    }

    #[test]
    fn totals_pool_sources() {
        let arts = [
            article("a", LanguageTier::LS, &["x y"]),
            article("b", LanguageTier::ES, &["x y z", "w"]),
            article("a", LanguageTier::AS, &["q"]),
        ];
        let rows = corpus_statistics(&arts);
        let names: Vec<(&str, Side)> = rows.iter().map(|r| (r.source.as_str(), r.side)).collect();
        assert_eq!(
            names,
            vec![
                ("a", Side::Simple),
                ("b", Side::Simple),
                ("a", Side::Complex),
                (TOTAL, Side::Simple),
                (TOTAL, Side::Complex)
            ]
        );
        let simple_total = &rows[3];
        let pooled = corpus_statistics(arts.iter().filter(|a| a.language_tier.is_simple()));
        assert_eq!(simple_total.tokens, 6);
        assert_eq!(simple_total.articles, 2);
        assert_eq!(pooled.last().unwrap().tokens_per_sentence, simple_total.tokens_per_sentence);
        assert!(corpus_statistics(core::iter::empty()).is_empty());
    }
}
