//! The eight sentence similarity measures and the similarity matrix.
//!
//! Word-embedding measures skip out-of-vocabulary tokens. A sentence with no
//! usable tokens (or a sentence-vector miss) scores 0 against everything and
//! is recorded in the matrix diagnostics.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::assignment::max_weight_assignment;
use crate::model::Sentence;
use crate::preprocess::PreprocessProfile;
use crate::tfidf::{TermKind, TfidfStats, WeightVector};
use crate::vectors::{SentenceVectors, WordVectorStore};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Bow,
    Char4gram,
    Cosine,
    Average,
    Cwasa,
    Maximum,
    Bipartite,
    SentenceEmbedding,
}

impl Measure {
    pub const ALL: [Measure; 8] = [
        Measure::Bow,
        Measure::Char4gram,
        Measure::Cosine,
        Measure::Average,
        Measure::Cwasa,
        Measure::Maximum,
        Measure::Bipartite,
        Measure::SentenceEmbedding,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Bow => "bow",
            Measure::Char4gram => "char4gram",
            Measure::Cosine => "cosine",
            Measure::Average => "average",
            Measure::Cwasa => "cwasa",
            Measure::Maximum => "maximum",
            Measure::Bipartite => "bipartite",
            Measure::SentenceEmbedding => "sentence-embedding",
        }
    }

    pub fn is_tfidf(self) -> bool {
        matches!(self, Measure::Bow | Measure::Char4gram)
    }

    /// Preprocessing the measure expects its sentences to have gone through.
    pub fn profile(self) -> PreprocessProfile {
        if self.is_tfidf() {
            PreprocessProfile::tfidf()
        } else {
            PreprocessProfile::embedding()
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "bow" | "bag-of-words" => Measure::Bow,
            "char4gram" | "4gram" | "char-4gram" => Measure::Char4gram,
            "cosine" => Measure::Cosine,
            "average" => Measure::Average,
            "cwasa" => Measure::Cwasa,
            "maximum" => Measure::Maximum,
            "bipartite" => Measure::Bipartite,
            "sentence-embedding" | "sbert" => Measure::SentenceEmbedding,
            _ => return Err(Error::Parse { kind: "measure", value: s.to_string() }),
        })
    }
}

/// Providers a measure may draw on. Only the ones the measure needs must be set.
#[derive(Clone, Copy, Default)]
pub struct Resources<'a> {
    pub word_stats: Option<&'a TfidfStats>,
    pub gram_stats: Option<&'a TfidfStats>,
    pub word_vectors: Option<&'a WordVectorStore>,
    pub sentence_vectors: Option<&'a (dyn SentenceVectors + Sync)>,
}

/// `u·v / (‖u‖‖v‖)`, 0 when either vector has zero norm.
pub fn cossim(u: &[f64], v: &[f64]) -> f64 {
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu: f64 = u.iter().map(|x| x * x).sum();
    let nv: f64 = v.iter().map(|x| x * x).sum();
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    // sqrt(nu * nv) makes cossim(u, u) exactly 1.
    (dot / libm::sqrt(nu * nv)).clamp(-1.0, 1.0)
}

fn sparse_cosine(a: &WeightVector, b: &WeightVector) -> f64 {
    let dot: f64 = a.iter().filter_map(|(t, wa)| b.get(t).map(|wb| wa * wb)).sum();
    let na: f64 = a.values().map(|w| w * w).sum();
    let nb: f64 = b.values().map(|w| w * w).sum();
    let denom = libm::sqrt(na * nb);
    if denom == 0.0 {
        return 0.0;
    }
    (dot / denom).clamp(0.0, 1.0)
}

/// In-vocabulary word vectors of a sentence, widened to f64.
fn word_vectors(sentence: &Sentence, store: &WordVectorStore) -> Vec<Vec<f64>> {
    sentence.tokens.iter().filter_map(|t| store.lookup(t)).map(|v| v.iter().map(|&x| f64::from(x)).collect()).collect()
}

/// Row-major word-to-word cosine matrix.
struct PhiMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl PhiMatrix {
    fn new(a: &[Vec<f64>], b: &[Vec<f64>]) -> Self {
        let mut values = Vec::with_capacity(a.len() * b.len());
        for u in a {
            for v in b {
                values.push(cossim(u, v));
            }
        }
        PhiMatrix { rows: a.len(), cols: b.len(), values }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    fn is_degenerate(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    /// First column with the highest value in row `i`.
    fn best_col(&self, i: usize) -> usize {
        (0..self.cols).fold(0, |best, j| if self.at(i, j) > self.at(i, best) { j } else { best })
    }

    fn best_row(&self, j: usize) -> usize {
        (0..self.rows).fold(0, |best, i| if self.at(i, j) > self.at(best, j) { i } else { best })
    }

    fn average(&self) -> f64 {
        if self.is_degenerate() {
            return 0.0;
        }
        self.values.iter().sum::<f64>() / (self.rows * self.cols) as f64
    }

    fn maximum(&self) -> f64 {
        if self.is_degenerate() {
            return 0.0;
        }
        let simple: f64 = (0..self.rows).map(|i| self.at(i, self.best_col(i))).sum::<f64>() / self.rows as f64;
        let complex: f64 = (0..self.cols).map(|j| self.at(self.best_row(j), j)).sum::<f64>() / self.cols as f64;
        0.5 * (simple + complex)
    }

    fn cwasa(&self) -> f64 {
        if self.is_degenerate() {
            return 0.0;
        }
        let mut in_union = vec![false; self.rows * self.cols];
        for i in 0..self.rows {
            let j = self.best_col(i);
            if self.at(i, j) >= 0.0 {
                in_union[i * self.cols + j] = true;
            }
        }
        for j in 0..self.cols {
            let i = self.best_row(j);
            if self.at(i, j) >= 0.0 {
                in_union[i * self.cols + j] = true;
            }
        }
        let (sum, count) = self
            .values
            .iter()
            .zip(&in_union)
            .filter(|(_, &keep)| keep)
            .fold((0.0, 0usize), |(s, c), (v, _)| (s + v, c + 1));
        if count == 0 {
            0.0
        } else {
            sum / count as f64
        }
    }

    fn bipartite(&self) -> f64 {
        if self.is_degenerate() {
            return 0.0;
        }
        let assignment = max_weight_assignment(&self.values, self.rows, self.cols);
        assignment.total / assignment.pairs.len() as f64
    }
}

fn summed(vectors: &[Vec<f64>]) -> Vec<f64> {
    let dim = vectors.first().map_or(0, Vec::len);
    let mut acc = vec![0.0; dim];
    for v in vectors {
        for (a, x) in acc.iter_mut().zip(v) {
            *a += x;
        }
    }
    acc
}

/// TF-IDF weighted bag-of-words cosine.
pub fn sim_bow(simple: &Sentence, complex: &Sentence, stats: &TfidfStats) -> f64 {
    sparse_cosine(&stats.weight_vector(simple), &stats.weight_vector(complex))
}

/// TF-IDF weighted cosine over character 4-grams of the space-joined tokens.
pub fn sim_char4gram(simple: &Sentence, complex: &Sentence, stats: &TfidfStats) -> f64 {
    debug_assert_eq!(stats.kind, TermKind::Char4Gram);
    sparse_cosine(&stats.weight_vector(simple), &stats.weight_vector(complex))
}

/// Cosine of the summed word vectors.
pub fn sim_cosine(simple: &Sentence, complex: &Sentence, store: &WordVectorStore) -> f64 {
    let a = word_vectors(simple, store);
    let b = word_vectors(complex, store);
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    cossim(&summed(&a), &summed(&b))
}

/// Mean cosine over all word pairs.
pub fn sim_average(simple: &Sentence, complex: &Sentence, store: &WordVectorStore) -> f64 {
    PhiMatrix::new(&word_vectors(simple, store), &word_vectors(complex, store)).average()
}

/// Mean cosine over the union of both sides' non-negative best matches.
pub fn sim_cwasa(simple: &Sentence, complex: &Sentence, store: &WordVectorStore) -> f64 {
    PhiMatrix::new(&word_vectors(simple, store), &word_vectors(complex, store)).cwasa()
}

/// Average of the two directional mean best-match cosines.
pub fn sim_maximum(simple: &Sentence, complex: &Sentence, store: &WordVectorStore) -> f64 {
    PhiMatrix::new(&word_vectors(simple, store), &word_vectors(complex, store)).maximum()
}

/// Mean edge weight of a maximum-weight matching between the two word lists.
pub fn sim_bipartite(simple: &Sentence, complex: &Sentence, store: &WordVectorStore) -> f64 {
    PhiMatrix::new(&word_vectors(simple, store), &word_vectors(complex, store)).bipartite()
}

/// Cosine of whole-sentence embeddings looked up by raw text.
pub fn sim_sentence_embedding(simple: &Sentence, complex: &Sentence, provider: &dyn SentenceVectors) -> f64 {
    match (provider.sentence_vector(&simple.raw_text), provider.sentence_vector(&complex.raw_text)) {
        (Some(a), Some(b)) => cossim(&widen(&a), &widen(&b)),
        _ => 0.0,
    }
}

fn widen(v: &[f32]) -> Vec<f64> {
    v.iter().map(|&x| f64::from(x)).collect()
}

/// Scores for every (simple, complex) sentence combination of a pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    pub pair_id: String,
    pub measure: Measure,
    rows: usize,
    cols: usize,
    values: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation of all entries.
    pub stddev: f64,
    /// Simple sentences that had nothing to compare (no in-vocabulary token, provider miss).
    pub degenerate_simple: Vec<usize>,
    pub degenerate_complex: Vec<usize>,
}

impl SimilarityMatrix {
    /// Panics if `values.len() != rows * cols`.
    pub fn from_values(
        pair_id: impl Into<String>,
        measure: Measure,
        rows: usize,
        cols: usize,
        values: Vec<f64>,
    ) -> Self {
        assert_eq!(values.len(), rows * cols, "matrix has wrong size");
        let (mean, stddev) = mean_stddev(&values);
        SimilarityMatrix {
            pair_id: pair_id.into(),
            measure,
            rows,
            cols,
            values,
            mean,
            stddev,
            degenerate_simple: Vec::new(),
            degenerate_complex: Vec::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

pub fn mean_stddev(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, libm::sqrt(var))
}

enum Prepared {
    Sparse(Vec<WeightVector>),
    Summed(Vec<Option<Vec<f64>>>),
    Words(Vec<Vec<Vec<f64>>>),
}

impl Prepared {
    fn new(sentences: &[Sentence], measure: Measure, res: &Resources<'_>) -> Result<Self> {
        let missing = |what| Error::MissingResource(measure.name(), what);
        Ok(match measure {
            Measure::Bow => {
                let stats = res.word_stats.ok_or_else(|| missing("word tf-idf statistics"))?;
                Prepared::Sparse(sentences.iter().map(|s| stats.weight_vector(s)).collect())
            }
            Measure::Char4gram => {
                let stats = res.gram_stats.ok_or_else(|| missing("4-gram tf-idf statistics"))?;
                Prepared::Sparse(sentences.iter().map(|s| stats.weight_vector(s)).collect())
            }
            Measure::Cosine => {
                let store = res.word_vectors.ok_or_else(|| missing("word vectors"))?;
                Prepared::Summed(
                    sentences
                        .iter()
                        .map(|s| {
                            let words = word_vectors(s, store);
                            (!words.is_empty()).then(|| summed(&words))
                        })
                        .collect(),
                )
            }
            Measure::SentenceEmbedding => {
                let provider = res.sentence_vectors.ok_or_else(|| missing("sentence vectors"))?;
                Prepared::Summed(
                    sentences.iter().map(|s| provider.sentence_vector(&s.raw_text).map(|v| widen(&v))).collect(),
                )
            }
            _ => {
                let store = res.word_vectors.ok_or_else(|| missing("word vectors"))?;
                Prepared::Words(sentences.iter().map(|s| word_vectors(s, store)).collect())
            }
        })
    }

    fn degenerate(&self) -> Vec<usize> {
        let flags: Vec<bool> = match self {
            Prepared::Sparse(v) => v.iter().map(|w| w.values().all(|&x| x == 0.0)).collect(),
            Prepared::Summed(v) => v.iter().map(Option::is_none).collect(),
            Prepared::Words(v) => v.iter().map(Vec::is_empty).collect(),
        };
        flags.iter().enumerate().filter(|(_, &d)| d).map(|(i, _)| i).collect()
    }
}

fn score(measure: Measure, a: &Prepared, i: usize, b: &Prepared, j: usize) -> f64 {
    match (a, b) {
        (Prepared::Sparse(a), Prepared::Sparse(b)) => sparse_cosine(&a[i], &b[j]),
        (Prepared::Summed(a), Prepared::Summed(b)) => match (&a[i], &b[j]) {
            (Some(u), Some(v)) => cossim(u, v),
            _ => 0.0,
        },
        (Prepared::Words(a), Prepared::Words(b)) => {
            let phi = PhiMatrix::new(&a[i], &b[j]);
            match measure {
                Measure::Average => phi.average(),
                Measure::Cwasa => phi.cwasa(),
                Measure::Maximum => phi.maximum(),
                Measure::Bipartite => phi.bipartite(),
                _ => unreachable!("not a word-list measure"),
            }
        }
        _ => unreachable!("both sides are prepared for the same measure"),
    }
}

/// Fills the n×m matrix for a pair whose sentences were preprocessed under
/// `measure.profile()`.
pub fn build_matrix(
    pair_id: &str,
    simple: &[Sentence],
    complex: &[Sentence],
    measure: Measure,
    resources: &Resources<'_>,
) -> Result<SimilarityMatrix> {
    if simple.is_empty() || complex.is_empty() {
        return Err(Error::EmptyMatrix(pair_id.to_string()));
    }
    let a = Prepared::new(simple, measure, resources)?;
    let b = Prepared::new(complex, measure, resources)?;
    let mut values = Vec::with_capacity(simple.len() * complex.len());
    for i in 0..simple.len() {
        for j in 0..complex.len() {
            values.push(score(measure, &a, i, &b, j));
        }
    }
    let mut matrix = SimilarityMatrix::from_values(pair_id, measure, simple.len(), complex.len(), values);
    matrix.degenerate_simple = a.degenerate();
    matrix.degenerate_complex = b.degenerate();
    Ok(matrix)
}

/// Score of a single sentence pair through the same route as [`build_matrix`].
pub fn similarity(simple: &Sentence, complex: &Sentence, measure: Measure, resources: &Resources<'_>) -> Result<f64> {
    let a = Prepared::new(core::slice::from_ref(simple), measure, resources)?;
    let b = Prepared::new(core::slice::from_ref(complex), measure, resources)?;
    Ok(score(measure, &a, 0, &b, 0))
}
