//! Reference formulas written directly from their textbook definitions,
//! sharing no code with the library.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeSet, HashMap};

pub type Vectors = HashMap<String, Vec<f64>>;

/// Parses a `count dim` header followed by `word v1 … vdim` lines.
pub fn parse_vectors(text: &str) -> Vectors {
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut parts = l.split_whitespace();
            let word = parts.next().unwrap().to_string();
            // Stored vectors are single precision.
            let v = parts.map(|x| f64::from(x.parse::<f32>().unwrap())).collect();
            (word, v)
        })
        .collect()
}

pub fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn norm(u: &[f64]) -> f64 {
    dot(u, u).sqrt()
}

/// `u·v / (‖u‖‖v‖)`; 0 for a zero vector.
pub fn cos(u: &[f64], v: &[f64]) -> f64 {
    let d = norm(u) * norm(v);
    if d == 0.0 {
        0.0
    } else {
        dot(u, v) / d
    }
}

fn embedded<'a>(words: &[&str], vectors: &'a Vectors) -> Vec<&'a Vec<f64>> {
    words.iter().filter_map(|w| vectors.get(*w)).collect()
}

/// φ over in-vocabulary words: rows are the first sentence.
fn phi(a: &[&str], b: &[&str], vectors: &Vectors) -> Vec<Vec<f64>> {
    let (ea, eb) = (embedded(a, vectors), embedded(b, vectors));
    ea.iter().map(|u| eb.iter().map(|v| cos(u, v)).collect()).collect()
}

/// cossim of the summed word embeddings.
pub fn cosine(a: &[&str], b: &[&str], vectors: &Vectors) -> f64 {
    let (ea, eb) = (embedded(a, vectors), embedded(b, vectors));
    if ea.is_empty() || eb.is_empty() {
        return 0.0;
    }
    let sum = |e: &[&Vec<f64>]| {
        let mut s = vec![0.0; e[0].len()];
        for v in e {
            for (x, y) in s.iter_mut().zip(v.iter()) {
                *x += y;
            }
        }
        s
    };
    cos(&sum(&ea), &sum(&eb))
}

/// `1/(|s|·|c|) Σ_s Σ_c φ`.
pub fn average(a: &[&str], b: &[&str], vectors: &Vectors) -> f64 {
    let p = phi(a, b, vectors);
    let n = p.len() * p.first().map_or(0, Vec::len);
    if n == 0 {
        return 0.0;
    }
    p.iter().flatten().sum::<f64>() / n as f64
}

/// Position of the first maximum.
fn first_argmax(values: impl Iterator<Item = f64>) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

/// Mean φ over `M^S ∪ M^C`, the best matches of every word on either side
/// with `φ ≥ 0`, identified by token positions.
pub fn cwasa(a: &[&str], b: &[&str], vectors: &Vectors) -> f64 {
    let p = phi(a, b, vectors);
    if p.is_empty() || p[0].is_empty() {
        return 0.0;
    }
    let (rows, cols) = (p.len(), p[0].len());
    let mut union = BTreeSet::new();
    for (i, row) in p.iter().enumerate() {
        let (j, v) = first_argmax(row.iter().copied());
        if v >= 0.0 {
            union.insert((i, j));
        }
    }
    for j in 0..cols {
        let (i, v) = first_argmax((0..rows).map(|i| p[i][j]));
        if v >= 0.0 {
            union.insert((i, j));
        }
    }
    if union.is_empty() {
        return 0.0;
    }
    union.iter().map(|&(i, j)| p[i][j]).sum::<f64>() / union.len() as f64
}

/// `½ (asym^S + asym^C)` with each asym the mean best-match φ of one side.
pub fn maximum(a: &[&str], b: &[&str], vectors: &Vectors) -> f64 {
    let p = phi(a, b, vectors);
    if p.is_empty() || p[0].is_empty() {
        return 0.0;
    }
    let (rows, cols) = (p.len(), p[0].len());
    let asym_s = p.iter().map(|r| r.iter().copied().fold(f64::NEG_INFINITY, f64::max)).sum::<f64>() / rows as f64;
    let asym_c =
        (0..cols).map(|j| (0..rows).map(|i| p[i][j]).fold(f64::NEG_INFINITY, f64::max)).sum::<f64>() / cols as f64;
    0.5 * (asym_s + asym_c)
}

/// Best total weight over every injection of the smaller side into the larger.
pub fn best_injection(weights: &[Vec<f64>]) -> f64 {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return 0.0;
    }
    let w: Vec<Vec<f64>> = if rows <= cols {
        weights.to_vec()
    } else {
        (0..cols).map(|j| (0..rows).map(|i| weights[i][j]).collect()).collect()
    };
    fn go(w: &[Vec<f64>], row: usize, used: &mut Vec<bool>) -> f64 {
        if row == w.len() {
            return 0.0;
        }
        let mut best = f64::NEG_INFINITY;
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                best = best.max(w[row][j] + go(w, row + 1, used));
                used[j] = false;
            }
        }
        best
    }
    let mut used = vec![false; w[0].len()];
    go(&w, 0, &mut used)
}

/// Mean edge weight of the best injection, over `min(n, m)` edges.
pub fn bipartite(a: &[&str], b: &[&str], vectors: &Vectors) -> f64 {
    let p = phi(a, b, vectors);
    if p.is_empty() || p[0].is_empty() {
        return 0.0;
    }
    best_injection(&p) / p.len().min(p[0].len()) as f64
}

/// Term statistics over documents, each a list of sentences of terms.
pub struct Idf {
    documents: usize,
    df: HashMap<String, usize>,
}

impl Idf {
    pub fn new(documents: &[Vec<Vec<String>>]) -> Idf {
        let mut df = HashMap::new();
        for doc in documents {
            let terms: BTreeSet<&String> = doc.iter().flatten().collect();
            for t in terms {
                *df.entry(t.clone()).or_insert(0) += 1;
            }
        }
        Idf { documents: documents.len(), df }
    }

    /// `ln(N / df)`.
    pub fn idf(&self, term: &str) -> f64 {
        (self.documents as f64 / self.df[term] as f64).ln()
    }

    /// Raw term frequency in the sentence times idf.
    pub fn tfidf(&self, term: &str, sentence: &[String]) -> f64 {
        sentence.iter().filter(|t| *t == term).count() as f64 * self.idf(term)
    }
}

/// Σ over shared terms of tfidf·tfidf, over the root of the product of the
/// squared weight sums of each sentence's distinct terms.
pub fn tfidf_cosine(a: &[String], b: &[String], idf: &Idf) -> f64 {
    let sa: BTreeSet<&String> = a.iter().collect();
    let sb: BTreeSet<&String> = b.iter().collect();
    let num: f64 = sa.intersection(&sb).map(|w| idf.tfidf(w, a) * idf.tfidf(w, b)).sum();
    let na: f64 = sa.iter().map(|w| idf.tfidf(w, a).powi(2)).sum();
    let nb: f64 = sb.iter().map(|w| idf.tfidf(w, b).powi(2)).sum();
    let d = (na * nb).sqrt();
    if d == 0.0 {
        0.0
    } else {
        num / d
    }
}

/// Every 4-character window of the words joined by single spaces.
pub fn four_grams(words: &[String]) -> Vec<String> {
    let chars: Vec<char> = words.join(" ").chars().collect();
    if chars.len() < 4 {
        return Vec::new();
    }
    (0..=chars.len() - 4).map(|i| chars[i..i + 4].iter().collect()).collect()
}

/// Length of the longest non-decreasing subsequence by the O(n²) recurrence.
pub fn lis_length(values: &[u32]) -> usize {
    let mut best: Vec<usize> = vec![1; values.len()];
    for i in 0..values.len() {
        for j in 0..i {
            if values[j] <= values[i] && best[j] + 1 > best[i] {
                best[i] = best[j] + 1;
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

/// Population mean and standard deviation.
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}
