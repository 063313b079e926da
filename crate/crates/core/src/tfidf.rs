//! Document frequencies and TF-IDF weights over words or character 4-grams.
//!
//! Each article is one document; frequencies are collected over the whole
//! corpus, simple and complex articles alike.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::model::{Article, Sentence};
use crate::{Error, Result};

pub const GRAM_SIZE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TermKind {
    Word,
    Char4Gram,
}

impl TermKind {
    /// Term occurrences of a preprocessed sentence, in order.
    pub fn terms(self, sentence: &Sentence) -> Vec<String> {
        match self {
            TermKind::Word => sentence.tokens.clone(),
            TermKind::Char4Gram => char_ngrams(&sentence.char_stream, GRAM_SIZE),
        }
    }
}

/// All length-`n` character windows of `stream`, without padding.
pub fn char_ngrams(stream: &str, n: usize) -> Vec<String> {
    let chars: Vec<char> = stream.chars().collect();
    if n == 0 || chars.len() < n {
        return Vec::new();
    }
    chars.windows(n).map(|w| w.iter().collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TfidfStats {
    pub document_count: usize,
    pub document_frequency: BTreeMap<String, usize>,
    pub kind: TermKind,
}

/// Sparse term → weight vector of one sentence.
pub type WeightVector = BTreeMap<String, f64>;

impl TfidfStats {
    pub fn build<'a, I>(articles: I, kind: TermKind) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Article>,
    {
        let mut document_count = 0;
        let mut document_frequency = BTreeMap::new();
        for article in articles {
            document_count += 1;
            let terms: BTreeSet<String> = article.sentences.iter().flat_map(|s| kind.terms(s)).collect();
            for term in terms {
                *document_frequency.entry(term).or_insert(0) += 1;
            }
        }
        if document_count == 0 {
            return Err(Error::EmptyCorpus);
        }
        Ok(TfidfStats { document_count, document_frequency, kind })
    }

    pub fn df(&self, term: &str) -> Option<usize> {
        self.document_frequency.get(term).copied()
    }

    /// `ln(N / df)`; terms never seen get `ln(N + 1)`.
    pub fn idf(&self, term: &str) -> f64 {
        let n = self.document_count as f64;
        match self.df(term) {
            Some(df) => libm::log(n / df as f64),
            None => libm::log(n + 1.0),
        }
    }

    /// Raw count of `term` in `sentence` times its idf.
    pub fn weight(&self, term: &str, sentence: &Sentence) -> f64 {
        let tf = self.kind.terms(sentence).iter().filter(|t| *t == term).count();
        if tf == 0 {
            return 0.0;
        }
        tf as f64 * self.idf(term)
    }

    pub fn weight_vector(&self, sentence: &Sentence) -> WeightVector {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for term in self.kind.terms(sentence) {
            *counts.entry(term).or_insert(0) += 1;
        }
        counts
            .into_iter()
            .map(|(term, tf)| {
                let w = tf as f64 * self.idf(&term);
                (term, w)
            })
            .collect()
    }
}

pub fn tfidf_weight(stats: &TfidfStats, term: &str, sentence: &Sentence) -> f64 {
    stats.weight(term, sentence)
}
