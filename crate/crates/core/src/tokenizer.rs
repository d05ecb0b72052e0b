//! Gap-preserving tokenizer.
//!
//! Every token records its character offsets into the original text, and the
//! whitespace between tokens is kept verbatim, so [`detokenize`] reproduces the
//! input exactly. Words are maximal alphanumeric runs (with at least one
//! letter), numbers are digit runs with internal decimal separators, each
//! punctuation mark is its own token and any other non-space characters are
//! grouped into symbol runs.

use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const DEFAULT_ABBREVIATIONS: &str = include_str!("../data/abbreviations.txt");

#[derive(Debug, Error)]
pub enum TokenizeError {
    #[error("detokenize needs {expected} gaps for {tokens} tokens, got {got}")]
    ArityMismatch {
        tokens: usize,
        expected: usize,
        got: usize,
    },
    #[error("gap {index} contains non-whitespace text {gap:?}")]
    NonWhitespaceGap { index: usize, gap: String },
    #[error("failed to read abbreviation list {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Word,
    Number,
    Punct,
    Symbol,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    /// Char offset of the first character.
    pub start: usize,
    /// Char offset one past the last character.
    pub end: usize,
    pub kind: TokenKind,
}

/// Tokens plus the whitespace around them: `gaps[i]` precedes `tokens[i]` and
/// the last gap trails the final token, so `gaps.len() == tokens.len() + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tokenized {
    pub tokens: Vec<Token>,
    pub gaps: Vec<String>,
}

impl Tokenized {
    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.surface.as_str()).collect()
    }

    pub fn owned_surfaces(&self) -> Vec<String> {
        self.tokens.iter().map(|t| t.surface.clone()).collect()
    }

    pub fn detokenize(&self) -> String {
        let mut out = String::new();
        for (gap, tok) in self.gaps.iter().zip(&self.tokens) {
            out.push_str(gap);
            out.push_str(&tok.surface);
        }
        if let Some(last) = self.gaps.last() {
            out.push_str(last);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Tokenizer {
    /// Sorted longest first so the longest abbreviation wins.
    abbreviations: Vec<Vec<char>>,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Self::with_abbreviations(parse_abbreviations(DEFAULT_ABBREVIATIONS))
    }
}

fn parse_abbreviations(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with("# "))
        .map(str::to_owned)
        .collect()
}

impl Tokenizer {
    pub fn with_abbreviations<I, S>(abbreviations: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut abbreviations: Vec<Vec<char>> = abbreviations
            .into_iter()
            .map(|a| a.as_ref().chars().collect::<Vec<_>>())
            .filter(|a| !a.is_empty() && !a.iter().any(|c| c.is_whitespace()))
            .collect();
        abbreviations.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        abbreviations.dedup();
        Tokenizer { abbreviations }
    }

    /// Loads an abbreviation list (one entry per line, UTF-8).
    pub fn from_abbreviation_file(path: impl AsRef<Path>) -> Result<Self, TokenizeError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| TokenizeError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(Self::with_abbreviations(parse_abbreviations(&text)))
    }

    pub fn abbreviations(&self) -> impl Iterator<Item = String> + '_ {
        self.abbreviations.iter().map(|a| a.iter().collect())
    }

    pub fn tokenize(&self, text: &str) -> Tokenized {
        let chars: Vec<char> = text.chars().collect();
        let mut tokens = Vec::new();
        let mut gaps = Vec::new();
        let mut i = 0;
        loop {
            let gap_start = i;
            while i < chars.len() && chars[i].is_whitespace() {
                i += 1;
            }
            gaps.push(chars[gap_start..i].iter().collect());
            if i == chars.len() {
                break;
            }
            let start = i;
            let (end, kind) = if let Some(len) = self.abbreviation_at(&chars, i) {
                (i + len, TokenKind::Word)
            } else if is_word_char(chars[i]) {
                scan_alnum(&chars, i)
            } else if is_punct(chars[i]) {
                (i + 1, TokenKind::Punct)
            } else {
                let mut j = i + 1;
                while j < chars.len() && is_symbol(chars[j]) {
                    j += 1;
                }
                (j, TokenKind::Symbol)
            };
            tokens.push(Token {
                surface: chars[start..end].iter().collect(),
                start,
                end,
                kind,
            });
            i = end;
        }
        Tokenized { tokens, gaps }
    }

    fn abbreviation_at(&self, chars: &[char], i: usize) -> Option<usize> {
        let first = chars[i];
        for abbr in &self.abbreviations {
            let len = abbr.len();
            if i + len > chars.len() {
                continue;
            }
            let head_matches = abbr[0] == first
                || (first.is_uppercase() && abbr[0].is_lowercase() && first.to_lowercase().eq(abbr[0].to_lowercase()));
            if !head_matches || chars[i + 1..i + len] != abbr[1..] {
                continue;
            }
            let boundary = chars.get(i + len).is_none_or(|&c| !is_word_char(c));
            if boundary {
                return Some(len);
            }
        }
        None
    }
}

fn shared() -> &'static Tokenizer {
    static TOKENIZER: OnceLock<Tokenizer> = OnceLock::new();
    TOKENIZER.get_or_init(Tokenizer::default)
}

/// Tokenizes with the built-in abbreviation list.
pub fn tokenize(text: &str) -> Tokenized {
    shared().tokenize(text)
}

/// Joins tokens with their recorded gaps. `gaps` must hold one more entry
/// than `tokens` (leading gap, inter-token gaps, trailing gap).
pub fn detokenize<T: AsRef<str>, G: AsRef<str>>(
    tokens: &[T],
    gaps: &[G],
) -> Result<String, TokenizeError> {
    if gaps.len() != tokens.len() + 1 {
        return Err(TokenizeError::ArityMismatch {
            tokens: tokens.len(),
            expected: tokens.len() + 1,
            got: gaps.len(),
        });
    }
    if let Some((index, gap)) = gaps
        .iter()
        .enumerate()
        .find(|(_, g)| !g.as_ref().chars().all(char::is_whitespace))
    {
        return Err(TokenizeError::NonWhitespaceGap {
            index,
            gap: gap.as_ref().to_owned(),
        });
    }
    let mut out = String::new();
    for (gap, tok) in gaps.iter().zip(tokens) {
        out.push_str(gap.as_ref());
        out.push_str(tok.as_ref());
    }
    out.push_str(gaps[tokens.len()].as_ref());
    Ok(out)
}

/// Gaps for a token list that came without its original text: single spaces,
/// except none before closing punctuation or after opening brackets.
pub fn default_gaps<T: AsRef<str>>(tokens: &[T]) -> Vec<String> {
    let mut gaps = Vec::with_capacity(tokens.len() + 1);
    gaps.push(String::new());
    for pair in tokens.windows(2) {
        let (prev, next) = (pair[0].as_ref(), pair[1].as_ref());
        let attach = matches!(next, "." | "," | ";" | ":" | "!" | "?" | ")" | "]" | "}" | "…" | "“")
            || matches!(prev, "(" | "[" | "{" | "„");
        gaps.push(if attach { String::new() } else { " ".to_owned() });
    }
    if !tokens.is_empty() {
        gaps.push(String::new());
    }
    gaps
}

pub fn classify(surface: &str) -> TokenKind {
    let mut chars = surface.chars();
    match chars.next() {
        None => TokenKind::Symbol,
        Some(c) if surface.chars().count() == 1 && is_punct(c) => TokenKind::Punct,
        _ if surface.chars().any(char::is_alphabetic) => TokenKind::Word,
        _ if surface.chars().all(|c| c.is_numeric() || c == '.' || c == ',') => TokenKind::Number,
        _ if surface.chars().all(is_punct) => TokenKind::Punct,
        _ => TokenKind::Symbol,
    }
}

fn is_combining(c: char) -> bool {
    matches!(c, '\u{0300}'..='\u{036F}')
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || is_combining(c)
}

pub(crate) fn is_punct(c: char) -> bool {
    matches!(
        c,
        '.' | ',' | ';' | ':' | '!' | '?' | '"' | '\'' | '(' | ')' | '[' | ']' | '{' | '}'
            | '-' | '–' | '—' | '…' | '„' | '“' | '”' | '‘' | '’' | '‚' | '«' | '»' | '‹'
            | '›' | '/' | '·' | '¿' | '¡'
    )
}

fn is_symbol(c: char) -> bool {
    !c.is_whitespace() && !is_word_char(c) && !is_punct(c)
}

fn scan_alnum(chars: &[char], start: usize) -> (usize, TokenKind) {
    let mut j = start;
    let mut has_letter = false;
    while j < chars.len() {
        let c = chars[j];
        if is_word_char(c) {
            has_letter |= !c.is_numeric();
            j += 1;
        } else if (c == '.' || c == ',')
            && !has_letter
            && j > start
            && chars[j - 1].is_numeric()
            && chars.get(j + 1).is_some_and(|n| n.is_numeric())
        {
            j += 1;
        } else {
            break;
        }
    }
    let kind = if has_letter {
        TokenKind::Word
    } else {
        TokenKind::Number
    };
    (j, kind)
}
