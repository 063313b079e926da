//! Normalization applied before similarity computation.
//!
//! Only [`Sentence::tokens`] and [`Sentence::char_stream`] are written; the raw
//! corpus text is never modified.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use unicode_general_category::{get_general_category, GeneralCategory};

use crate::model::Sentence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PreprocessProfile {
    pub lowercase: bool,
    pub strip_gender_suffixes: bool,
    pub remove_punctuation: bool,
    pub join_compound_hyphens: bool,
}

impl Default for PreprocessProfile {
    fn default() -> Self {
        PreprocessProfile::embedding()
    }
}

impl PreprocessProfile {
    /// Profile for the TF-IDF based measures (lowercased).
    pub const fn tfidf() -> Self {
        PreprocessProfile {
            lowercase: true,
            strip_gender_suffixes: true,
            remove_punctuation: true,
            join_compound_hyphens: true,
        }
    }

    /// Profile for the embedding based measures (case preserved).
    pub const fn embedding() -> Self {
        PreprocessProfile { lowercase: false, ..Self::tfidf() }
    }
}

const HYPHENS: [char; 3] = ['-', '\u{2010}', '\u{2011}'];
const APOSTROPHES: [char; 2] = ['\'', '\u{2019}'];
const GENDER_MARKERS: [char; 3] = [':', '*', '_'];
const GENDER_ENDINGS: [&str; 4] = ["innen", "Innen", "in", "In"];

pub fn is_punctuation(c: char) -> bool {
    matches!(
        get_general_category(c),
        GeneralCategory::ConnectorPunctuation
            | GeneralCategory::DashPunctuation
            | GeneralCategory::OpenPunctuation
            | GeneralCategory::ClosePunctuation
            | GeneralCategory::InitialPunctuation
            | GeneralCategory::FinalPunctuation
            | GeneralCategory::OtherPunctuation
    ) || matches!(c, '„' | '“' | '»' | '«' | '–' | '—')
}

/// Removes the inclusive-language endings `:in`, `*in`, `_in`, `In` and their
/// plural forms. Plain female forms such as "Pilotin" or "Berlin" are kept.
pub fn strip_gender_suffix(word: &str) -> String {
    let mut current = word;
    loop {
        let next = strip_marker_suffix(current).or_else(|| strip_capital_i_suffix(current));
        match next {
            Some(base) if !base.is_empty() => current = base,
            _ => return String::from(current),
        }
    }
}

fn strip_marker_suffix(word: &str) -> Option<&str> {
    for ending in GENDER_ENDINGS {
        if let Some(rest) = word.strip_suffix(ending) {
            if let Some(base) = rest.strip_suffix(GENDER_MARKERS) {
                return Some(base);
            }
        }
    }
    None
}

// "PilotIn", "PilotInnen": the capital I must follow a lowercase letter.
fn strip_capital_i_suffix(word: &str) -> Option<&str> {
    for ending in ["Innen", "In"] {
        if let Some(base) = word.strip_suffix(ending) {
            if base.chars().next_back().is_some_and(char::is_lowercase) {
                return Some(base);
            }
        }
    }
    None
}

fn strip_capital_i_fixpoint(word: &mut String) {
    while let Some(base) = strip_capital_i_suffix(word) {
        let len = base.len();
        word.truncate(len);
    }
}

/// Normalizes one whitespace-delimited word into zero or more tokens.
fn normalize_word(word: &str, profile: &PreprocessProfile, out: &mut Vec<String>) {
    let core = if profile.remove_punctuation { word.trim_matches(is_punctuation) } else { word };
    if core.is_empty() {
        return;
    }
    let stripped = if profile.strip_gender_suffixes { strip_gender_suffix(core) } else { String::from(core) };

    let mut pieces: Vec<String> = Vec::new();
    let mut current = String::new();
    let mut chars = stripped.chars().peekable();
    let mut prev: Option<char> = None;
    while let Some(c) = chars.next() {
        if HYPHENS.contains(&c) && (profile.remove_punctuation || profile.join_compound_hyphens) {
            let between_letters =
                prev.is_some_and(char::is_alphanumeric) && chars.peek().is_some_and(|n| n.is_alphanumeric());
            if profile.join_compound_hyphens && between_letters {
                if let Some(next) = chars.next() {
                    current.extend(next.to_lowercase());
                    prev = Some(next);
                }
                continue;
            }
            if profile.remove_punctuation {
                if !current.is_empty() {
                    pieces.push(core::mem::take(&mut current));
                }
                prev = None;
                continue;
            }
        }
        if profile.remove_punctuation && is_punctuation(c) && !APOSTROPHES.contains(&c) {
            prev = Some(c);
            continue;
        }
        current.push(c);
        prev = Some(c);
    }
    if !current.is_empty() {
        pieces.push(current);
    }

    for mut piece in pieces {
        if profile.remove_punctuation {
            // Trim apostrophes that ended up at the edges.
            let trimmed = piece.trim_matches(APOSTROPHES);
            if trimmed.len() != piece.len() {
                piece = String::from(trimmed);
            }
        }
        if profile.strip_gender_suffixes {
            strip_capital_i_fixpoint(&mut piece);
        }
        if profile.lowercase {
            piece = piece.to_lowercase();
        }
        if !piece.is_empty() {
            out.push(piece);
        }
    }
}

/// Token list for a piece of raw text.
pub fn normalize_text(text: &str, profile: &PreprocessProfile) -> Vec<String> {
    let mut tokens = Vec::new();
    for word in text.split_whitespace() {
        normalize_word(word, profile, &mut tokens);
    }
    tokens
}

/// Returns a copy of `sentence` with `tokens` and `char_stream` filled.
pub fn normalize_sentence(sentence: &Sentence, profile: &PreprocessProfile) -> Sentence {
    Sentence::with_tokens(sentence.index, sentence.raw_text.clone(), normalize_text(&sentence.raw_text, profile))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn gender_suffixes() {
        assert_eq!(strip_gender_suffix("Pilot*in"), "Pilot");
        assert_eq!(strip_gender_suffix("PilotInnen"), "Pilot");
        assert_eq!(strip_gender_suffix("PilotIn"), "Pilot");
        assert_eq!(strip_gender_suffix("Pilot:in"), "Pilot");
        assert_eq!(strip_gender_suffix("Pilot_innen"), "Pilot");
        assert_eq!(strip_gender_suffix("Pilot*Innen"), "Pilot");
        assert_eq!(strip_gender_suffix("Berlin"), "Berlin");
        assert_eq!(strip_gender_suffix("Pilotin"), "Pilotin");
        assert_eq!(strip_gender_suffix("Pilotinnen"), "Pilotinnen");
        assert_eq!(strip_gender_suffix("GmbHIn"), "GmbHIn");
        assert_eq!(strip_gender_suffix("In"), "In");
        assert_eq!(strip_gender_suffix(":in"), ":in");
    }

    #[test]
    fn sentence_normalization() {
        let tf = PreprocessProfile::tfidf();
        let emb = PreprocessProfile::embedding();
        assert_eq!(normalize_text("Das ist gut!", &tf), vec!["das", "ist", "gut"]);
        assert_eq!(normalize_text("Bundes-Kanzler", &emb), vec!["Bundeskanzler"]);
        assert_eq!(normalize_text("Pilot:innen essen.", &emb), vec!["Pilot", "essen"]);
        assert_eq!(normalize_text("„Wir“ sagen – gibt's das?", &emb), vec!["Wir", "sagen", "gibt's", "das"]);
        assert_eq!(normalize_text("Haupt- und Neben-Satz", &emb), vec!["Haupt", "und", "Nebensatz"]);
        assert_eq!(normalize_text("— ... !", &emb), Vec::<String>::new());
    }

    #[test]
    fn hyphens_split_when_not_joining() {
        let profile = PreprocessProfile { join_compound_hyphens: false, ..PreprocessProfile::embedding() };
        assert_eq!(normalize_text("Bundes-Kanzler", &profile), vec!["Bundes", "Kanzler"]);
    }

    #[test]
    fn raw_text_is_untouched() {
        let s = Sentence::new(3, "Die Pilot*innen fliegen.");
        let n = normalize_sentence(&s, &PreprocessProfile::tfidf());
        assert_eq!(n.raw_text, s.raw_text);
        assert_eq!(n.index, 3);
        assert_eq!(n.tokens, vec!["die", "pilot", "fliegen"]);
        assert_eq!(n.char_stream, "die pilot fliegen");
    }

    fn profiles() -> impl Strategy<Value = PreprocessProfile> {
        (any::<bool>(), any::<bool>(), any::<bool>(), any::<bool>()).prop_map(|(a, b, c, d)| PreprocessProfile {
            lowercase: a,
            strip_gender_suffixes: b,
            remove_punctuation: c,
            join_compound_hyphens: d,
        })
    }

    proptest! {
        #[test]
        fn normalization_is_idempotent(text in "[A-Za-zÄÖÜäöüß:*_.,!?„“' -]{0,40}", profile in profiles()) {
            prop_assume!(profile.remove_punctuation);
            let once = normalize_text(&text, &profile);
            let twice = normalize_text(&once.join(" "), &profile);
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn lowercase_profile_has_no_uppercase(text in "[A-Za-zÄÖÜäöüßẞ0-9 .,:*_-]{0,40}") {
            let tokens = normalize_text(&text, &PreprocessProfile::tfidf());
            prop_assert!(tokens.iter().all(|t| !t.chars().any(char::is_uppercase)));
        }
    }
}
