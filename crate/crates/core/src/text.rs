//! Enumeration flattening and sentence splitting.

use alloc::borrow::ToOwned;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

const TERMINAL: [char; 4] = ['.', '!', '?', '…'];
const SEPARATING: [char; 3] = [',', ';', ':'];

/// Joins list items into one comma-separated sentence.
///
/// Trailing punctuation (`. ! ? … , ; :`) is removed from every item but the
/// last. The last item keeps a terminal `. ! ? …`; a trailing `, ; :` is
/// replaced by `.` and an item without punctuation gets a `.` appended.
/// Blank items are dropped.
pub fn flatten_enumerations<S: AsRef<str>>(items: &[S]) -> String {
    let items: Vec<&str> = items.iter().map(|s| s.as_ref().trim()).filter(|s| !s.is_empty()).collect();
    let Some((last, init)) = items.split_last() else {
        return String::new();
    };
    let mut out = String::new();
    for item in init {
        let stripped = item.trim_end_matches(|c: char| TERMINAL.contains(&c) || SEPARATING.contains(&c));
        let stripped = stripped.trim_end();
        if stripped.is_empty() {
            continue;
        }
        out.push_str(stripped);
        out.push_str(", ");
    }
    let last = last.trim_end_matches(|c: char| SEPARATING.contains(&c)).trim_end();
    out.push_str(last);
    if !last.ends_with(TERMINAL) {
        out.push('.');
    }
    out
}

/// Splits raw article text into sentences.
pub trait SentenceSplitter {
    fn split(&self, text: &str) -> Vec<String>;
}

/// Splits after `.`, `?` or `!` when followed by whitespace and an uppercase
/// letter or digit, and at every line break.
///
/// A period does not end a sentence when the word it closes is a known
/// abbreviation, or a one- or two-digit number (German ordinals such as
/// "3. Oktober").
#[derive(Debug, Clone)]
pub struct RuleSplitter {
    abbreviations: Vec<String>,
}

impl Default for RuleSplitter {
    fn default() -> Self {
        RuleSplitter::new(DEFAULT_ABBREVIATIONS.iter().copied())
    }
}

pub const DEFAULT_ABBREVIATIONS: &[&str] = &[
    "z.B.", "Dr.", "bzw.", "ca.", "Nr.", "usw.", "etc.", "d.h.", "u.a.", "evtl.", "ggf.", "Prof.", "Str.", "Tel.",
    "vgl.", "z.T.", "inkl.", "bspw.", "Mio.", "Mrd.", "St.", "Hr.", "Fr.", "Abs.", "Art.",
];

// Characters that may sit between a sentence-final mark and the following space.
const CLOSERS: [char; 8] = ['"', '\'', ')', ']', '“', '”', '«', '»'];
const OPENERS: [char; 7] = ['"', '\'', '(', '„', '“', '»', '«'];

impl RuleSplitter {
    pub fn new<I, S>(abbreviations: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        RuleSplitter { abbreviations: abbreviations.into_iter().map(Into::into).collect() }
    }

    pub fn abbreviations(&self) -> &[String] {
        &self.abbreviations
    }

    fn is_abbreviation(&self, word: &str) -> bool {
        let word = word.trim_start_matches(OPENERS);
        if self.abbreviations.iter().any(|a| a == word) {
            return true;
        }
        let digits = word.trim_end_matches('.');
        !digits.is_empty() && digits.len() <= 2 && digits.bytes().all(|b| b.is_ascii_digit())
    }

    fn split_line(&self, line: &str, out: &mut Vec<String>) {
        let chars: Vec<(usize, char)> = line.char_indices().collect();
        let mut start = 0;
        let mut i = 0;
        while i < chars.len() {
            let (_, c) = chars[i];
            if !matches!(c, '.' | '?' | '!') {
                i += 1;
                continue;
            }
            let mut end = i + 1;
            while end < chars.len()
                && (matches!(chars[end].1, '.' | '?' | '!' | '…') || CLOSERS.contains(&chars[end].1))
            {
                end += 1;
            }
            let mut next = end;
            while next < chars.len() && chars[next].1.is_whitespace() {
                next += 1;
            }
            let boundary = next > end
                && next < chars.len()
                && {
                    let mut k = next;
                    while k < chars.len() && OPENERS.contains(&chars[k].1) {
                        k += 1;
                    }
                    k < chars.len() && (chars[k].1.is_uppercase() || chars[k].1.is_ascii_digit())
                }
                && !(c == '.' && i + 1 == end && self.is_abbreviation(word_before(line, &chars, i)));
            if boundary {
                let byte_end = chars.get(end).map_or(line.len(), |&(b, _)| b);
                push_trimmed(&line[start..byte_end], out);
                start = chars[next].0;
                i = next;
            } else {
                i = end;
            }
        }
        push_trimmed(&line[start..], out);
    }
}

/// The whitespace-delimited word ending with the character at `pos` (inclusive).
fn word_before<'a>(line: &'a str, chars: &[(usize, char)], pos: usize) -> &'a str {
    let mut k = pos;
    while k > 0 && !chars[k - 1].1.is_whitespace() {
        k -= 1;
    }
    let end = chars[pos].0 + chars[pos].1.len_utf8();
    &line[chars[k].0..end]
}

fn push_trimmed(s: &str, out: &mut Vec<String>) {
    let s = s.trim();
    if !s.is_empty() {
        out.push(s.to_owned());
    }
}

impl SentenceSplitter for RuleSplitter {
    fn split(&self, text: &str) -> Vec<String> {
        let mut out = Vec::new();
        for line in text.lines() {
            self.split_line(line, &mut out);
        }
        out
    }
}

/// Sentences read verbatim from an external tool's output, one per line.
#[derive(Debug, Clone, Copy, Default)]
pub struct LineSplitter;

impl SentenceSplitter for LineSplitter {
    fn split(&self, text: &str) -> Vec<String> {
        text.lines().map(str::trim).filter(|l| !l.is_empty()).map(ToString::to_string).collect()
    }
}

/// Splits with the default rule-based splitter.
pub fn split_sentences(text: &str) -> Vec<String> {
    RuleSplitter::default().split(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn enumeration_items_are_joined() {
        assert_eq!(flatten_enumerations(&["Äpfel", "Birnen", "Nüsse"]), "Äpfel, Birnen, Nüsse.");
        assert_eq!(flatten_enumerations(&["Ruhe bewahren."]), "Ruhe bewahren.");
        assert_eq!(flatten_enumerations(&["Erstens.", "Zweitens."]), "Erstens, Zweitens.");
        assert_eq!(flatten_enumerations::<&str>(&[]), "");
        assert_eq!(flatten_enumerations(&["Wichtig:", "  ", "Wasser;", "Brot;"]), "Wichtig, Wasser, Brot.");
        assert_eq!(flatten_enumerations(&["Kommen Sie?", "Wann?"]), "Kommen Sie, Wann?");
    }

    #[test]
    fn splits_on_sentence_marks() {
        assert_eq!(split_sentences("Das ist gut. Das ist schlecht."), vec!["Das ist gut.", "Das ist schlecht."]);
        assert_eq!(split_sentences("Dr. Müller kommt heute."), vec!["Dr. Müller kommt heute."]);
        assert!(split_sentences("").is_empty());
        assert_eq!(split_sentences("Wer? Ich! 2020 war gut."), vec!["Wer?", "Ich!", "2020 war gut."]);
        assert_eq!(split_sentences("Am 3. Oktober ist frei."), vec!["Am 3. Oktober ist frei."]);
        assert_eq!(split_sentences("Er sagt: „Nein.“ Dann geht er."), vec!["Er sagt: „Nein.“", "Dann geht er."]);
        assert_eq!(split_sentences("Titel\nErster Satz. zweiter Satz."), vec!["Titel", "Erster Satz. zweiter Satz."]);
        assert_eq!(split_sentences("Obst z.B. Äpfel. Gut."), vec!["Obst z.B. Äpfel.", "Gut."]);
    }

    #[test]
    fn custom_abbreviations() {
        let splitter = RuleSplitter::new(["Abk."]);
        assert_eq!(splitter.split("Die Abk. Steht hier."), vec!["Die Abk. Steht hier."]);
        assert_eq!(splitter.split("Dr. Müller."), vec!["Dr.", "Müller."]);
    }

    fn squash(s: &str) -> String {
        s.chars().filter(|c| !c.is_whitespace()).collect()
    }

    proptest! {
        #[test]
        fn split_covers_all_text(text in "[A-Za-zÄä0-9 .!?\n„“]{0,80}") {
            let joined: String = split_sentences(&text).concat();
            prop_assert_eq!(squash(&joined), squash(&text));
        }

        #[test]
        fn split_is_deterministic(text in "[A-Za-z .!?]{0,60}") {
            prop_assert_eq!(split_sentences(&text), split_sentences(&text));
        }
    }
}
