//! Word-vector files, stored sentence-vector tables and the remote embedding client.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::num::NonZeroUsize;
use std::path::Path;
use std::sync::Mutex;
use std::time::Duration;

use log::warn;
use lru::LruCache;
use sentalign_core::vectors::{SentenceVectors, WordVectorStore};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{Error, Result};

pub type SentenceKey = [u8; 32];

/// SHA-256 of the UTF-8 sentence text.
pub fn sentence_key(sentence: &str) -> SentenceKey {
    Sha256::digest(sentence.as_bytes()).into()
}

fn parse_components(parts: &[&str], path: &Path, line: usize) -> Result<Vec<f32>> {
    parts
        .iter()
        .map(|p| {
            let v: f32 = p.parse().map_err(|_| Error::format(path, line, format!("not a number: {p:?}")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::format(path, line, format!("non-finite component {p:?}")))
            }
        })
        .collect()
}

/// Loads a word2vec/fastText text file: a `count dim` header, then
/// `token v1 … vdim` per line.
///
/// A vector of the wrong dimension is fatal. A repeated token keeps its last
/// vector and is reported in the returned warnings.
pub fn load_word_vectors(path: &Path) -> Result<(WordVectorStore, Vec<String>)> {
    let file = File::open(path).map_err(Error::io(path))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines.next().transpose().map_err(Error::io(path))?.unwrap_or_default();
    let mut fields = header.split_whitespace().map(str::parse::<usize>);
    let (count, dim) = match (fields.next(), fields.next(), fields.next()) {
        (Some(Ok(c)), Some(Ok(d)), None) if d > 0 => (c, d),
        _ => return Err(Error::format(path, 1, format!("expected `count dim` header, got {header:?}"))),
    };
    let mut store = WordVectorStore::new(dim);
    let mut warnings = Vec::new();
    let mut read = 0;
    for (n, line) in lines.enumerate() {
        let line_no = n + 2;
        let line = line.map_err(Error::io(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let (token, values) = parts.split_first().expect("line is not blank");
        if values.len() != dim {
            return Err(Error::format(
                path,
                line_no,
                format!("{token}: expected {dim} components, got {}", values.len()),
            ));
        }
        let vector = parse_components(values, path, line_no)?;
        read += 1;
        if store.insert(*token, vector)?.is_some() {
            warnings.push(format!("{}:{line_no}: duplicate token {token}, last vector kept", path.display()));
        }
    }
    if read != count {
        return Err(Error::format(path, 1, format!("header announces {count} vectors, file has {read}")));
    }
    for w in &warnings {
        warn!("{w}");
    }
    Ok((store, warnings))
}

/// Stored sentence embeddings: `sha256-hex<TAB>v1 v2 … vdim` per line.
#[derive(Debug, Clone, Default)]
pub struct SentenceVectorTable {
    dimension: usize,
    vectors: HashMap<SentenceKey, Vec<f32>>,
}

impl SentenceVectorTable {
    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(Error::io(path))?;
        let mut table = SentenceVectorTable::default();
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(Error::io(path))?;
            if line.trim().is_empty() {
                continue;
            }
            let (key, rest) =
                line.split_once('\t').ok_or_else(|| Error::format(path, n + 1, "expected `hash<TAB>vector`"))?;
            let key: SentenceKey = hex::decode(key.trim())
                .ok()
                .and_then(|b| b.try_into().ok())
                .ok_or_else(|| Error::format(path, n + 1, "key is not a 64-digit hex sha256"))?;
            let parts: Vec<&str> = rest.split_whitespace().collect();
            let vector = parse_components(&parts, path, n + 1)?;
            if table.vectors.is_empty() {
                table.dimension = vector.len();
            } else if vector.len() != table.dimension {
                return Err(Error::format(
                    path,
                    n + 1,
                    format!("expected {} components, got {}", table.dimension, vector.len()),
                ));
            }
            table.vectors.insert(key, vector);
        }
        Ok(table)
    }

    pub fn insert(&mut self, sentence: &str, vector: Vec<f32>) {
        if self.vectors.is_empty() {
            self.dimension = vector.len();
        }
        self.vectors.insert(sentence_key(sentence), vector);
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Serializes in key order.
    pub fn to_text(&self) -> String {
        let mut keys: Vec<&SentenceKey> = self.vectors.keys().collect();
        keys.sort();
        let mut out = String::new();
        for key in keys {
            out.push_str(&hex::encode(key));
            out.push('\t');
            let parts: Vec<String> = self.vectors[key].iter().map(|v| v.to_string()).collect();
            out.push_str(&parts.join(" "));
            out.push('\n');
        }
        out
    }
}

impl SentenceVectors for SentenceVectorTable {
    fn sentence_vector(&self, sentence: &str) -> Option<Vec<f32>> {
        self.vectors.get(&sentence_key(sentence)).cloned()
    }
}

#[derive(Serialize)]
struct EmbedRequest<'a> {
    sentences: &'a [&'a str],
}

#[derive(Deserialize)]
struct EmbedResponse {
    vectors: Vec<Vec<f32>>,
}

/// Client for an embedding service answering `POST <base>/embed` with
/// `{"sentences": [...]}` → `{"vectors": [[...], ...]}`.
///
/// Vectors are cached by sentence hash. Lookups through [`SentenceVectors`]
/// treat provider failures as misses after logging them; call
/// [`RemoteSentenceVectors::prefetch`] to surface errors.
pub struct RemoteSentenceVectors {
    endpoint: String,
    agent: ureq::Agent,
    batch_size: usize,
    cache: Mutex<LruCache<SentenceKey, Vec<f32>>>,
}

impl RemoteSentenceVectors {
    pub fn new(base_url: &str, cache_size: usize, timeout: Duration) -> Self {
        let agent: ureq::Agent =
            ureq::Agent::config_builder().timeout_global(Some(timeout)).http_status_as_error(false).build().into();
        let size = NonZeroUsize::new(cache_size.max(1)).expect("non-zero");
        RemoteSentenceVectors {
            endpoint: format!("{}/embed", base_url.trim_end_matches('/')),
            agent,
            batch_size: 64,
            cache: Mutex::new(LruCache::new(size)),
        }
    }

    /// Requests embeddings for `sentences` in one call.
    pub fn embed(&self, sentences: &[&str]) -> Result<Vec<Vec<f32>>> {
        let mut response = self
            .agent
            .post(&self.endpoint)
            .send_json(&EmbedRequest { sentences })
            .map_err(|e| Error::Provider(format!("{}: {e}", self.endpoint)))?;
        let status = response.status();
        if status != 200 {
            return Err(Error::Provider(format!("{}: HTTP {}", self.endpoint, status.as_u16())));
        }
        let body: EmbedResponse = response
            .body_mut()
            .read_json()
            .map_err(|e| Error::Provider(format!("{}: bad response body: {e}", self.endpoint)))?;
        if body.vectors.len() != sentences.len() {
            return Err(Error::Provider(format!(
                "{}: {} vectors for {} sentences",
                self.endpoint,
                body.vectors.len(),
                sentences.len()
            )));
        }
        Ok(body.vectors)
    }

    /// Fetches every uncached sentence in batches.
    pub fn prefetch(&self, sentences: &[&str]) -> Result<()> {
        let missing: Vec<&str> = {
            let cache = self.cache.lock().expect("cache lock");
            let mut seen = std::collections::HashSet::new();
            sentences.iter().copied().filter(|s| !cache.contains(&sentence_key(s)) && seen.insert(*s)).collect()
        };
        for chunk in missing.chunks(self.batch_size) {
            let vectors = self.embed(chunk)?;
            let mut cache = self.cache.lock().expect("cache lock");
            for (s, v) in chunk.iter().zip(vectors) {
                cache.put(sentence_key(s), v);
            }
        }
        Ok(())
    }
}

impl SentenceVectors for RemoteSentenceVectors {
    fn sentence_vector(&self, sentence: &str) -> Option<Vec<f32>> {
        let key = sentence_key(sentence);
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return Some(v.clone());
        }
        match self.embed(&[sentence]) {
            Ok(mut v) => {
                let v = v.pop()?;
                self.cache.lock().expect("cache lock").put(key, v.clone());
                Some(v)
            }
            Err(e) => {
                warn!("{e}");
                None
            }
        }
    }
}
