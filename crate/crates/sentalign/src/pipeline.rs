//! Corpus-wide alignment runs, histograms, evaluation and label sampling.

use std::collections::{BTreeMap, HashMap};
use std::time::Duration;

use rayon::prelude::*;
use sentalign_core::eval::{sample_for_labelling, Counts, GroundTruth, LabelSample, Scores};
use sentalign_core::histogram::{sample_pair_indices, Histogram};
use sentalign_core::matching::{align, MatchOptions, ThresholdPolicy};
use sentalign_core::model::Corpus;
use sentalign_core::preprocess::{normalize_sentence, PreprocessProfile};
use sentalign_core::similarity::{build_matrix, similarity, Resources};
use sentalign_core::tfidf::{TermKind, TfidfStats};
use sentalign_core::vectors::{SentenceVectors, WordVectorStore};
use sentalign_core::{AlignmentSet, Article, LanguageTier, Measure, Sentence, SimilarityMatrix, Variant};

use crate::config::{Config, Profiles};
use crate::labels::TaskRecord;
use crate::output::{MatchRecord, VariantOutput};
use crate::providers::{load_word_vectors, RemoteSentenceVectors, SentenceVectorTable};
use crate::{Error, Result};

pub enum SentenceProvider {
    Table(SentenceVectorTable),
    Remote(RemoteSentenceVectors),
}

impl SentenceProvider {
    fn as_dyn(&self) -> &(dyn SentenceVectors + Sync) {
        match self {
            SentenceProvider::Table(t) => t,
            SentenceProvider::Remote(r) => r,
        }
    }

    fn prefetch<'s>(&self, sentences: impl IntoIterator<Item = &'s Sentence>) -> Result<()> {
        match self {
            SentenceProvider::Table(_) => Ok(()),
            SentenceProvider::Remote(r) => {
                let texts: Vec<&str> = sentences.into_iter().map(|s| s.raw_text.as_str()).collect();
                r.prefetch(&texts)
            }
        }
    }
}

/// Vector resources of a run; each is optional until a measure needs it.
#[derive(Default)]
pub struct Providers {
    pub word_vectors: Option<WordVectorStore>,
    pub sentence_vectors: Option<SentenceProvider>,
}

impl Providers {
    pub fn from_config(config: &Config) -> Result<Self> {
        let word_vectors = match &config.word_vectors {
            Some(path) => Some(load_word_vectors(path)?.0),
            None => None,
        };
        let source = &config.sentence_vectors;
        let sentence_vectors = match (&source.table, &source.endpoint) {
            (Some(path), _) => Some(SentenceProvider::Table(SentenceVectorTable::load(path)?)),
            (None, Some(url)) => Some(SentenceProvider::Remote(RemoteSentenceVectors::new(
                url,
                source.cache_size,
                Duration::from_secs(source.timeout_secs.max(1)),
            ))),
            (None, None) => None,
        };
        Ok(Providers { word_vectors, sentence_vectors })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairFailure {
    pub pair_id: String,
    pub message: String,
}

/// The alignment sets of one variant, in corpus pair order.
#[derive(Debug, Clone)]
pub struct VariantRun {
    pub variant: Variant,
    /// `(pair index, set)` for every pair whose matrix could be built.
    pub sets: Vec<(usize, AlignmentSet)>,
    pub failures: Vec<PairFailure>,
}

impl VariantRun {
    pub fn match_count(&self) -> usize {
        self.sets.iter().map(|(_, s)| s.matches.len()).sum()
    }

    /// Mean similarity over all matches of the variant; 0 without matches.
    pub fn average_similarity(&self) -> f64 {
        let n = self.match_count();
        if n == 0 {
            return 0.0;
        }
        self.sets.iter().flat_map(|(_, s)| &s.matches).map(|m| m.similarity).sum::<f64>() / n as f64
    }

    pub fn output(&self, corpus: &Corpus) -> Result<VariantOutput> {
        VariantOutput::new(self.variant, self.sets.iter().map(|(i, s)| (s, corpus.pair(*i))))
    }
}

/// Normalized views of a corpus plus the resources every measure needs.
pub struct Aligner<'c> {
    corpus: &'c Corpus,
    providers: &'c Providers,
    tfidf_articles: Vec<Article>,
    embedding_articles: Vec<Article>,
    word_stats: Option<TfidfStats>,
    gram_stats: Option<TfidfStats>,
    pub options: MatchOptions,
}

fn normalized(corpus: &Corpus, profile: &PreprocessProfile) -> Vec<Article> {
    corpus
        .articles
        .par_iter()
        .map(|a| Article {
            sentences: a.sentences.iter().map(|s| normalize_sentence(s, profile)).collect(),
            ..a.clone()
        })
        .collect()
}

impl<'c> Aligner<'c> {
    pub fn new(
        corpus: &'c Corpus,
        providers: &'c Providers,
        profiles: &Profiles,
        options: MatchOptions,
    ) -> Result<Self> {
        let tfidf_articles = normalized(corpus, &profiles.tfidf);
        let embedding_articles = normalized(corpus, &profiles.embedding);
        let (word_stats, gram_stats) = if tfidf_articles.is_empty() {
            (None, None)
        } else {
            (
                Some(TfidfStats::build(&tfidf_articles, TermKind::Word)?),
                Some(TfidfStats::build(&tfidf_articles, TermKind::Char4Gram)?),
            )
        };
        Ok(Aligner { corpus, providers, tfidf_articles, embedding_articles, word_stats, gram_stats, options })
    }

    pub fn corpus(&self) -> &Corpus {
        self.corpus
    }

    fn resources(&self) -> Resources<'_> {
        Resources {
            word_stats: self.word_stats.as_ref(),
            gram_stats: self.gram_stats.as_ref(),
            word_vectors: self.providers.word_vectors.as_ref(),
            sentence_vectors: self.providers.sentence_vectors.as_ref().map(SentenceProvider::as_dyn),
        }
    }

    fn articles(&self, measure: Measure) -> &[Article] {
        if measure.is_tfidf() {
            &self.tfidf_articles
        } else {
            &self.embedding_articles
        }
    }

    /// Fails when `measure` needs a resource that is not configured.
    pub fn check_resources(&self, measure: Measure) -> Result<()> {
        let missing = match measure {
            Measure::Bow | Measure::Char4gram => None,
            Measure::SentenceEmbedding => self.providers.sentence_vectors.is_none().then_some("sentence vectors"),
            _ => self.providers.word_vectors.is_none().then_some("word vectors"),
        };
        match missing {
            Some(what) => Err(Error::Config(format!("measure {measure} needs {what}; none configured"))),
            None => Ok(()),
        }
    }

    pub fn matrix(&self, pair: usize, measure: Measure) -> Result<SimilarityMatrix> {
        let (s, c) = self.corpus.pairs[pair];
        let articles = self.articles(measure);
        let (simple, complex) = (&articles[s], &articles[c]);
        if measure == Measure::SentenceEmbedding {
            if let Some(p) = &self.providers.sentence_vectors {
                p.prefetch(simple.sentences.iter().chain(&complex.sentences))?;
            }
        }
        let id = self.corpus.pair(pair).id();
        Ok(build_matrix(&id, &simple.sentences, &complex.sentences, measure, &self.resources())?)
    }

    /// Builds each pair's matrix once and derives every requested variant of `measure` from it.
    pub fn run_measure(&self, measure: Measure, variants: &[Variant]) -> Result<Vec<VariantRun>> {
        self.check_resources(measure)?;
        let matrices: Vec<Result<SimilarityMatrix>> =
            (0..self.corpus.pairs.len()).into_par_iter().map(|p| self.matrix(p, measure)).collect();
        let mut runs = Vec::new();
        for &variant in variants.iter().filter(|v| v.measure == measure) {
            let policy = ThresholdPolicy::from_k(variant.k);
            let mut sets = Vec::new();
            let mut failures = Vec::new();
            for (p, m) in matrices.iter().enumerate() {
                match m {
                    Ok(m) => sets.push((p, align(m, variant.matcher, policy, self.options))),
                    Err(e) => failures.push(PairFailure { pair_id: self.corpus.pair(p).id(), message: e.to_string() }),
                }
            }
            runs.push(VariantRun { variant, sets, failures });
        }
        Ok(runs)
    }

    pub fn run_variant(&self, variant: Variant) -> Result<VariantRun> {
        Ok(self.run_measure(variant.measure, &[variant])?.remove(0))
    }

    /// All 32 variants: every measure × {MST, MST-LIS} × {no threshold, `k`}.
    pub fn run_all(&self, k: f64) -> Result<Vec<VariantRun>> {
        let grid = Variant::grid(k);
        let mut runs = Vec::with_capacity(grid.len());
        for measure in Measure::ALL {
            runs.extend(self.run_measure(measure, &grid)?);
        }
        Ok(runs)
    }

    /// Similarities of `samples` random (simple, complex) sentence pairs drawn
    /// from all simple and all complex articles.
    pub fn sample_similarities(&self, measure: Measure, samples: usize, seed: u64) -> Result<(Vec<f64>, bool)> {
        self.check_resources(measure)?;
        let pool = |simple: bool| -> Vec<&Sentence> {
            self.articles(measure)
                .iter()
                .filter(|a| a.language_tier.is_simple() == simple && (simple || a.language_tier == LanguageTier::AS))
                .flat_map(|a| &a.sentences)
                .collect()
        };
        let (simple, complex) = (pool(true), pool(false));
        let (picks, with_replacement) = sample_pair_indices(simple.len(), complex.len(), samples, seed);
        if measure == Measure::SentenceEmbedding {
            if let Some(p) = &self.providers.sentence_vectors {
                p.prefetch(picks.iter().flat_map(|&(i, j)| [simple[i], complex[j]]))?;
            }
        }
        let resources = self.resources();
        let values = picks
            .par_iter()
            .map(|&(i, j)| similarity(simple[i], complex[j], measure, &resources))
            .collect::<sentalign_core::Result<Vec<f64>>>()?;
        Ok((values, with_replacement))
    }

    pub fn histogram(&self, measure: Measure, samples: usize, bins: usize, seed: u64) -> Result<Histogram> {
        let (values, with_replacement) = self.sample_similarities(measure, samples, seed)?;
        let mut histogram = Histogram::from_values(&values, bins)?;
        histogram.with_replacement = with_replacement;
        Ok(histogram)
    }
}

/// One evaluation row: a variant restricted to one source, or `all`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub variant: String,
    pub source: String,
    pub pairs: usize,
    pub counts: Counts,
    pub scores: Scores,
}

pub const ALL_SOURCES: &str = "all";

/// Source part of a pair id (`<source>.<slug>__...`).
pub fn pair_source(pair_id: &str) -> &str {
    pair_id.split(['.', '_']).next().unwrap_or(pair_id)
}

/// Micro-averaged P/R/F1 of every variant over the ground-truth pairs, with a
/// per-source breakdown. A ground-truth pair without output counts as an
/// empty prediction.
pub fn evaluate(outputs: &[VariantOutput], truths: &[GroundTruth]) -> Result<Vec<EvalRow>> {
    let mut rows = Vec::new();
    for output in outputs {
        let sets: HashMap<String, AlignmentSet> =
            output.alignment_sets().into_iter().map(|s| (s.pair_id.clone(), s)).collect();
        let mut total = (0, Counts::default());
        let mut by_source: BTreeMap<&str, (usize, Counts)> = BTreeMap::new();
        for gt in truths {
            let empty;
            let predicted = match sets.get(&gt.pair_id) {
                Some(s) => s,
                None => {
                    empty = AlignmentSet {
                        pair_id: gt.pair_id.clone(),
                        measure: output.measure,
                        matcher: output.matcher,
                        threshold_k: output.threshold_k,
                        matches: Vec::new(),
                    };
                    &empty
                }
            };
            let counts = Counts::between(predicted, gt)?;
            for slot in [&mut total, by_source.entry(pair_source(&gt.pair_id)).or_default()] {
                slot.0 += 1;
                slot.1.add(counts);
            }
        }
        let row = |source: &str, (pairs, counts): (usize, Counts)| EvalRow {
            variant: output.variant.clone(),
            source: source.to_string(),
            pairs,
            counts,
            scores: counts.scores(),
        };
        rows.push(row(ALL_SOURCES, total));
        for (source, acc) in by_source {
            rows.push(row(source, acc));
        }
    }
    Ok(rows)
}

/// Samples matches across all variant outputs for blind classification.
pub fn label_tasks(outputs: &[VariantOutput], sample_size: usize, seed: u64) -> (Vec<TaskRecord>, LabelSample) {
    let sets: Vec<AlignmentSet> = outputs.iter().flat_map(VariantOutput::alignment_sets).collect();
    let sample = sample_for_labelling(&sets, sample_size, seed);
    let mut texts: HashMap<(String, &str, usize, usize), &MatchRecord> = HashMap::new();
    for output in outputs {
        for pair in &output.pairs {
            for m in &pair.matches {
                texts.insert((output.variant.clone(), &pair.pair_id, m.simple_index, m.complex_index), m);
            }
        }
    }
    let tasks = sample
        .tasks
        .iter()
        .map(|t| {
            let m = texts[&(t.variant.clone(), t.pair_id.as_str(), t.simple_index, t.complex_index)];
            TaskRecord {
                task: t.clone(),
                simple_sentence: m.simple_sentence.clone(),
                complex_sentence: m.complex_sentence.clone(),
            }
        })
        .collect();
    (tasks, sample)
}

/// Variants whose pair failures exceed `tolerance` as a fraction of all pairs.
pub fn over_tolerance(runs: &[VariantRun], pairs: usize, tolerance: f64) -> Vec<&VariantRun> {
    runs.iter().filter(|r| pairs > 0 && r.failures.len() as f64 / pairs as f64 > tolerance).collect()
}
