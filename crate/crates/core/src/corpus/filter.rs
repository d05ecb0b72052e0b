use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{CorpusError, SentenceRecord};
use crate::morpho::MisspellingLexicon;
use crate::tokenizer::{tokenize, TokenKind};

const ICELANDIC_LETTERS: &str =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZáéíóúýþæöðÁÉÍÓÚÝÞÆÖÐ";
const DIGITS_AND_PUNCT: &str = "0123456789 .,;:!?\"'()[]-–—/%&+=*§°$€£#@„“”‘’«»…";

/// Sentence-quality rules.
///
/// Alphabetic characters outside `allowed_charset` count as foreign; any other
/// character outside it is illegal. A sentence is kept when it has no illegal
/// characters, at least `min_allowed_ratio` of its letters are in the charset,
/// its token count is within `[min_len, max_len]` and none of its words is a
/// known misspelling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterRules {
    #[serde(with = "charset_string")]
    pub allowed_charset: HashSet<char>,
    pub min_allowed_ratio: f64,
    pub min_len: usize,
    pub max_len: usize,
}

impl Default for FilterRules {
    fn default() -> Self {
        FilterRules {
            allowed_charset: ICELANDIC_LETTERS.chars().chain(DIGITS_AND_PUNCT.chars()).collect(),
            min_allowed_ratio: 0.9,
            min_len: 3,
            max_len: 100,
        }
    }
}

impl FilterRules {
    pub fn validate(&self) -> Result<(), CorpusError> {
        if !(0.0..=1.0).contains(&self.min_allowed_ratio) {
            return Err(CorpusError::InvalidRules(format!(
                "min_allowed_ratio {} outside [0, 1]",
                self.min_allowed_ratio
            )));
        }
        if self.min_len > self.max_len {
            return Err(CorpusError::InvalidRules(format!(
                "min_len {} exceeds max_len {}",
                self.min_len, self.max_len
            )));
        }
        Ok(())
    }

    /// Share of alphabetic characters that are in the charset; 1 when the
    /// text has no letters.
    pub fn allowed_ratio(&self, text: &str) -> f64 {
        let (mut letters, mut allowed) = (0usize, 0usize);
        for c in text.chars().filter(|c| c.is_alphabetic()) {
            letters += 1;
            allowed += usize::from(self.allowed_charset.contains(&c));
        }
        if letters == 0 {
            1.0
        } else {
            allowed as f64 / letters as f64
        }
    }
}

mod charset_string {
    use std::collections::HashSet;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(set: &HashSet<char>, s: S) -> Result<S::Ok, S::Error> {
        let mut chars: Vec<char> = set.iter().copied().collect();
        chars.sort_unstable();
        s.collect_str(&chars.into_iter().collect::<String>())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<HashSet<char>, D::Error> {
        Ok(String::deserialize(d)?.chars().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    ForeignRatio,
    IllegalChar,
    KnownMisspelling,
    Length,
}

impl RejectReason {
    pub const ALL: [RejectReason; 4] = [
        RejectReason::ForeignRatio,
        RejectReason::IllegalChar,
        RejectReason::KnownMisspelling,
        RejectReason::Length,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RejectReason::ForeignRatio => "foreign_ratio",
            RejectReason::IllegalChar => "illegal_char",
            RejectReason::KnownMisspelling => "known_misspelling",
            RejectReason::Length => "length",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterDecision {
    Keep,
    Reject(RejectReason),
}

/// Checks run in order: illegal characters, foreign ratio, length, known
/// misspellings. The first failing check is reported.
pub fn filter_sentence(
    record: &SentenceRecord,
    rules: &FilterRules,
    lex: &MisspellingLexicon,
) -> FilterDecision {
    let text = &record.text;
    let illegal = text
        .chars()
        .any(|c| !c.is_alphabetic() && !rules.allowed_charset.contains(&c));
    if illegal {
        return FilterDecision::Reject(RejectReason::IllegalChar);
    }
    if rules.allowed_ratio(text) < rules.min_allowed_ratio {
        return FilterDecision::Reject(RejectReason::ForeignRatio);
    }
    let tokens = tokenize(text);
    let n = tokens.tokens.len();
    if n < rules.min_len || n > rules.max_len {
        return FilterDecision::Reject(RejectReason::Length);
    }
    let misspelled = tokens
        .tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Word)
        .any(|t| lex.is_known_misspelling(&t.surface));
    if misspelled {
        return FilterDecision::Reject(RejectReason::KnownMisspelling);
    }
    FilterDecision::Keep
}
