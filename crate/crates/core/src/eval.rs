//! Scoring against ground truth and annotator labels.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::AlignmentSet;
use crate::{Error, Result};

/// Human n:1 alignment of one article pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    pub pair_id: String,
    matches: BTreeSet<(usize, usize)>,
}

impl GroundTruth {
    pub fn new<I>(pair_id: impl Into<String>, matches: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut simple = BTreeSet::new();
        let mut set = BTreeSet::new();
        for (s, c) in matches {
            if !simple.insert(s) {
                return Err(Error::DuplicateSimpleIndex(s));
            }
            set.insert((s, c));
        }
        Ok(GroundTruth { pair_id: pair_id.into(), matches: set })
    }

    /// `(simple, complex)` pairs in ascending order.
    pub fn matches(&self) -> &BTreeSet<(usize, usize)> {
        &self.matches
    }

    pub fn len(&self) -> usize {
        self.matches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matches.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Pooled counts; add pairs together for micro-averaged corpus scores.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub true_positives: usize,
    pub predicted: usize,
    pub gold: usize,
}

impl Counts {
    pub fn between(predicted: &AlignmentSet, gold: &GroundTruth) -> Result<Self> {
        if predicted.pair_id != gold.pair_id {
            return Err(Error::PairMismatch(predicted.pair_id.clone(), gold.pair_id.clone()));
        }
        let predicted = predicted.pairs();
        Ok(Counts {
            true_positives: predicted.intersection(&gold.matches).count(),
            predicted: predicted.len(),
            gold: gold.matches.len(),
        })
    }

    pub fn add(&mut self, other: Counts) {
        self.true_positives += other.true_positives;
        self.predicted += other.predicted;
        self.gold += other.gold;
    }

    /// Empty predictions give precision 0, empty gold gives recall 0. F1 is
    /// computed as `2·tp / (predicted + gold)`, which equals `2PR / (P + R)`
    /// with a single rounding.
    pub fn scores(&self) -> Scores {
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let precision = ratio(self.true_positives, self.predicted);
        let recall = ratio(self.true_positives, self.gold);
        let f1 = ratio(2 * self.true_positives, self.predicted + self.gold);
        Scores { precision, recall, f1 }
    }
}

pub fn score_against_ground_truth(predicted: &AlignmentSet, gold: &GroundTruth) -> Result<Scores> {
    Ok(Counts::between(predicted, gold)?.scores())
}

/// Micro-averaged scores over several pairs.
pub fn score_corpus<'a, I>(pairs: I) -> Result<(Counts, Scores)>
where
    I: IntoIterator<Item = (&'a AlignmentSet, &'a GroundTruth)>,
{
    let mut total = Counts::default();
    for (p, g) in pairs {
        total.add(Counts::between(p, g)?);
    }
    Ok((total, total.scores()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Match,
    Partial,
    NoMatch,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::Partial => "partial",
            Verdict::NoMatch => "no_match",
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(self, Verdict::Match | Verdict::Partial)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "match" => Ok(Verdict::Match),
            "partial" => Ok(Verdict::Partial),
            "no_match" => Ok(Verdict::NoMatch),
            _ => Err(Error::Parse { kind: "verdict", value: s.to_string() }),
        }
    }
}

/// One annotator judgement of a sampled match.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub record_id: String,
    pub task_id: String,
    pub variant: String,
    pub pair_id: String,
    pub simple_index: usize,
    pub complex_index: usize,
    pub verdict: Verdict,
    pub annotator: String,
    pub timestamp: String,
}

/// Fraction of labels that are `match` or `partial`, optionally restricted to one variant.
pub fn classification_accuracy(labels: &[LabelRecord], variant: Option<&str>) -> Result<f64> {
    let selected: Vec<&LabelRecord> = labels.iter().filter(|l| variant.is_none_or(|v| l.variant == v)).collect();
    if selected.is_empty() {
        return Err(Error::NoLabels);
    }
    let positive = selected.iter().filter(|l| l.verdict.is_positive()).count();
    Ok(positive as f64 / selected.len() as f64)
}

/// A sampled match waiting for a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelTask {
    pub task_id: String,
    pub variant: String,
    pub pair_id: String,
    pub simple_index: usize,
    pub complex_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSample {
    /// In sample order.
    pub tasks: Vec<LabelTask>,
    pub population: usize,
    /// The requested size exceeded the population; every triple was returned.
    pub truncated: bool,
}

/// Uniform sample without replacement over all (variant, pair, match) triples.
pub fn sample_for_labelling(sets: &[AlignmentSet], sample_size: usize, seed: u64) -> LabelSample {
    let population: Vec<(usize, usize)> =
        sets.iter().enumerate().flat_map(|(s, set)| (0..set.matches.len()).map(move |m| (s, m))).collect();
    let truncated = sample_size > population.len();
    let amount = sample_size.min(population.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = rand::seq::index::sample(&mut rng, population.len(), amount);
    let tasks = picked
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let (s, m) = population[p];
            let set = &sets[s];
            let matched = set.matches[m];
            LabelTask {
                task_id: format!("task-{n:05}"),
                variant: set.variant().name(),
                pair_id: set.pair_id.clone(),
                simple_index: matched.simple_index,
                complex_index: matched.complex_index,
            }
        })
        .collect();
    LabelSample { tasks, population: population.len(), truncated }
}
