//! TOML run configuration. Relative paths are resolved against the directory
//! of the config file.

use std::fs;
use std::path::{Path, PathBuf};

use sentalign_core::matching::DEFAULT_K;
use sentalign_core::preprocess::PreprocessProfile;
use sentalign_core::text::DEFAULT_ABBREVIATIONS;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub corpus_root: PathBuf,
    /// Defaults to `<corpus_root>/results`.
    pub results_dir: Option<PathBuf>,
    pub word_vectors: Option<PathBuf>,
    pub sentence_vectors: SentenceVectorSource,
    pub profiles: Profiles,
    pub splitter: SplitterConfig,
    pub matching: MatchingConfig,
    /// Worker threads; 0 uses every core.
    pub jobs: usize,
    /// Fraction of pairs that may fail before a run exits nonzero.
    pub failure_tolerance: f64,
    pub histogram_bins: usize,
    pub service: ServiceConfig,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SentenceVectorSource {
    /// Stored table of `sha256<TAB>vector` lines.
    pub table: Option<PathBuf>,
    /// Base URL of an embedding service.
    pub endpoint: Option<String>,
    pub cache_size: usize,
    pub timeout_secs: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Profiles {
    pub tfidf: PreprocessProfile,
    pub embedding: PreprocessProfile,
}

impl Default for Profiles {
    fn default() -> Self {
        Profiles { tfidf: PreprocessProfile::tfidf(), embedding: PreprocessProfile::embedding() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitterConfig {
    pub abbreviations: Vec<String>,
}

impl Default for SplitterConfig {
    fn default() -> Self {
        SplitterConfig { abbreviations: DEFAULT_ABBREVIATIONS.iter().map(|s| s.to_string()).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatchingConfig {
    pub k: f64,
    pub boundary_gaps: bool,
}

impl Default for MatchingConfig {
    fn default() -> Self {
        MatchingConfig { k: DEFAULT_K, boundary_gaps: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub addr: String,
    pub tasks: PathBuf,
    pub labels: PathBuf,
    pub ground_truth_dir: PathBuf,
    /// Directory with the built UI bundle, served at `/`.
    pub ui_dir: Option<PathBuf>,
    /// Shared token expected as `Authorization: Bearer <token>`.
    pub token: Option<String>,
    /// Leases expire only when several annotators share the service.
    pub multi_annotator: bool,
    pub lease_minutes: u64,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            addr: "127.0.0.1:8080".into(),
            tasks: "tasks.jsonl".into(),
            labels: "labels.jsonl".into(),
            ground_truth_dir: "ground-truth".into(),
            ui_dir: None,
            token: None,
            multi_annotator: false,
            lease_minutes: 15,
        }
    }
}

impl Default for Config {
    fn default() -> Self {
        Config {
            corpus_root: "corpus".into(),
            results_dir: None,
            word_vectors: None,
            sentence_vectors: SentenceVectorSource { cache_size: 100_000, timeout_secs: 30, ..Default::default() },
            profiles: Profiles::default(),
            splitter: SplitterConfig::default(),
            matching: MatchingConfig::default(),
            jobs: 0,
            failure_tolerance: 0.0,
            histogram_bins: 20,
            service: ServiceConfig::default(),
        }
    }
}

fn resolve(base: &Path, path: &mut PathBuf) {
    if path.is_relative() {
        *path = base.join(&*path);
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(Error::io(path))?;
        let mut config: Config =
            toml::from_str(&text).map_err(|e| Error::Toml { path: path.to_path_buf(), message: e.to_string() })?;
        config.resolve_paths(path.parent().unwrap_or(Path::new(".")));
        config.validate()?;
        Ok(config)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        resolve(base, &mut self.corpus_root);
        for p in
            [&mut self.results_dir, &mut self.word_vectors, &mut self.sentence_vectors.table, &mut self.service.ui_dir]
                .into_iter()
                .flatten()
        {
            resolve(base, p);
        }
        resolve(base, &mut self.service.tasks);
        resolve(base, &mut self.service.labels);
        resolve(base, &mut self.service.ground_truth_dir);
    }

    pub fn validate(&self) -> Result<()> {
        if self.sentence_vectors.table.is_some() && self.sentence_vectors.endpoint.is_some() {
            return Err(Error::Config("sentence_vectors: set either `table` or `endpoint`, not both".into()));
        }
        if !(0.0..=1.0).contains(&self.failure_tolerance) {
            return Err(Error::Config("failure_tolerance must lie in [0, 1]".into()));
        }
        if self.histogram_bins == 0 {
            return Err(Error::Config("histogram_bins must be positive".into()));
        }
        Ok(())
    }

    pub fn results_dir(&self) -> PathBuf {
        self.results_dir.clone().unwrap_or_else(|| self.corpus_root.join(crate::corpus_io::RESULTS_DIR))
    }
}
