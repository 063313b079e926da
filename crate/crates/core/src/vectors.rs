//! Word and sentence vector lookup.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::{Error, Result};

/// Token → vector table with one fixed dimension.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WordVectorStore {
    dimension: usize,
    vocabulary: BTreeMap<String, Vec<f32>>,
    /// Retry a missed lookup with the lowercased token. Off by default.
    pub lowercase_fallback: bool,
}

impl WordVectorStore {
    pub fn new(dimension: usize) -> Self {
        WordVectorStore { dimension, vocabulary: BTreeMap::new(), lowercase_fallback: false }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocabulary.is_empty()
    }

    /// Inserts a vector, returning the one it replaced.
    pub fn insert(&mut self, token: impl Into<String>, vector: Vec<f32>) -> Result<Option<Vec<f32>>> {
        let token = token.into();
        if vector.len() != self.dimension {
            return Err(Error::DimensionMismatch { token, expected: self.dimension, got: vector.len() });
        }
        if vector.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(token));
        }
        Ok(self.vocabulary.insert(token, vector))
    }

    pub fn lookup(&self, token: &str) -> Option<&[f32]> {
        match self.vocabulary.get(token) {
            Some(v) => Some(v),
            None if self.lowercase_fallback => self.vocabulary.get(&token.to_lowercase()).map(Vec::as_slice),
            None => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f32])> {
        self.vocabulary.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }
}

/// Source of whole-sentence embeddings, keyed by the raw sentence text.
pub trait SentenceVectors {
    /// The vector for `sentence`, or `None` on a miss.
    fn sentence_vector(&self, sentence: &str) -> Option<Vec<f32>>;
}

/// In-memory sentence table keyed by exact text.
#[derive(Debug, Clone, Default)]
pub struct SentenceVectorMap {
    vectors: BTreeMap<String, Vec<f32>>,
}

impl SentenceVectorMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, sentence: &str, vector: Vec<f32>) {
        self.vectors.insert(sentence.to_string(), vector);
    }
}

impl SentenceVectors for SentenceVectorMap {
    fn sentence_vector(&self, sentence: &str) -> Option<Vec<f32>> {
        self.vectors.get(sentence).cloned()
    }
}

impl<T: SentenceVectors + ?Sized> SentenceVectors for &T {
    fn sentence_vector(&self, sentence: &str) -> Option<Vec<f32>> {
        (**self).sentence_vector(sentence)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn lookup_is_case_sensitive() {
        let mut store = WordVectorStore::new(2);
        store.insert("Essen", vec![1.0, 0.0]).unwrap();
        store.insert("essen", vec![0.0, 1.0]).unwrap();
        assert_eq!(store.lookup("Essen"), Some(&[1.0f32, 0.0][..]));
        assert_eq!(store.lookup("essen"), Some(&[0.0f32, 1.0][..]));
        assert_eq!(store.lookup("ESSEN"), None);
    }

    #[test]
    fn lowercase_fallback_is_opt_in() {
        let mut store = WordVectorStore::new(1);
        store.insert("haus", vec![0.5]).unwrap();
        assert_eq!(store.lookup("Haus"), None);
        store.lowercase_fallback = true;
        assert_eq!(store.lookup("Haus"), Some(&[0.5f32][..]));
    }

    #[test]
    fn rejects_bad_vectors() {
        let mut store = WordVectorStore::new(3);
        assert!(matches!(store.insert("a", vec![1.0, 2.0]), Err(Error::DimensionMismatch { got: 2, .. })));
        assert!(matches!(store.insert("a", vec![1.0, f32::NAN, 0.0]), Err(Error::NonFinite(_))));
        assert_eq!(store.insert("a", vec![1.0, 2.0, 3.0]), Ok(None));
        assert_eq!(store.insert("a", vec![3.0, 2.0, 1.0]), Ok(Some(vec![1.0, 2.0, 3.0])));
        assert_eq!(store.len(), 1);
    }
}
