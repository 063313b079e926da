//! File formats, ingestion, the alignment pipeline and the annotation service
//! built on `sentalign-core`.
//!
//! On-disk layout of a corpus root:
//!
//! ```text
//! <root>/<source>/manifest.json
//! <root>/<source>/parsed/<slug>.txt            one sentence per line
//! <root>/results/<variant>/<pair-id>.simple.txt
//! <root>/results/<variant>/<pair-id>.complex.txt
//! <root>/results/<variant>/matches.json
//! ```

pub mod config;
pub mod corpus_io;
pub mod error;
pub mod extract;
pub mod ground_truth;
pub mod ingest;
pub mod labels;
pub mod output;
pub mod pipeline;
pub mod providers;
pub mod report;
pub mod service;

pub use error::{Error, Result};

/// Fixed six-decimal rendering used in every output file.
pub fn fmt6(value: f64) -> String {
    let s = format!("{value:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

/// `value` rounded (half to even) to six decimals.
pub fn round6(value: f64) -> f64 {
    fmt6(value).parse().expect("formatted float parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_decimals() {
        assert_eq!(fmt6(0.1234565), "0.123456");
        assert_eq!(fmt6(2.0), "2.000000");
        assert_eq!(fmt6(-1e-9), "0.000000");
        assert_eq!(round6(1.0 / 3.0), 0.333333);
        // Exact binary ties at the seventh decimal round to the even digit.
        assert_eq!(fmt6(0.0078125), "0.007812");
        assert_eq!(fmt6(0.0234375), "0.023438");
    }
}
