//! Core algorithms for building sentence-aligned simple/standard German corpora.
//!
//! Everything in this crate is pure computation over in-memory data and builds
//! without `std` (only `alloc` is required). File formats, HTML extraction, the
//! CLI and the annotation service live in the `sentalign` crate.
//!
//! The pipeline is:
//!
//! 1. split article text into sentences ([`text`]),
//! 2. normalize sentences under a [`preprocess::PreprocessProfile`],
//! 3. score every simple/complex sentence combination with one of the eight
//!    [`similarity::Measure`]s, producing a [`similarity::SimilarityMatrix`],
//! 4. turn the matrix into an n:1 [`model::AlignmentSet`] with MST or MST-LIS
//!    ([`matching`]),
//! 5. score alignments against ground truth or annotator labels ([`eval`]).
#![no_std]

extern crate alloc;

pub mod assignment;
pub mod error;
pub mod eval;
pub mod histogram;
pub mod lis;
pub mod matching;
pub mod model;
pub mod preprocess;
pub mod similarity;
pub mod stats;
pub mod text;
pub mod tfidf;
pub mod vectors;

pub use error::Error;
pub use model::{AlignmentSet, Article, ArticlePair, LanguageTier, Match, Matcher, Sentence, Variant};
pub use similarity::{Measure, SimilarityMatrix};

pub type Result<T, E = Error> = core::result::Result<T, E>;
