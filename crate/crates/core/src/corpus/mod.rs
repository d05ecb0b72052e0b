//! Corpus formats: plain sentence files, tagged token-per-line corpora and
//! tab-separated parallel files, plus the sentence filter and the
//! train/valid/test splitter.

mod feats;
pub mod filter;
pub mod parallel;
pub mod plain;
pub mod split;
pub mod tagged;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use feats::Feats;
pub use filter::{filter_sentence, FilterDecision, FilterRules, RejectReason};
pub use parallel::{read_parallel, write_parallel, ParallelPair, ParallelWriter, TextPair};
pub use plain::{read_plain_corpus, DecodePolicy, PlainCorpusReader};
pub use split::{split_corpus, SplitPlan, DEFAULT_N_TEST, DEFAULT_N_VALID};
pub use tagged::{read_tagged_corpus, write_tagged_corpus, TaggedCorpusReader};

use crate::tokenizer::default_gaps;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Stream(#[from] std::io::Error),
    #[error("line {line}: invalid UTF-8")]
    InvalidUtf8 { line: usize },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("sentence block ending at line {line} has no tokens")]
    EmptySentence { line: usize },
    #[error("invalid filter rules: {0}")]
    InvalidRules(String),
    #[error("corpus of {available} items cannot supply {requested} validation/test items")]
    CorpusTooSmall { available: usize, requested: usize },
    #[error("sidecar: {0}")]
    Sidecar(#[from] serde_json::Error),
}

impl CorpusError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CorpusError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(line: usize, message: impl Into<String>) -> Self {
        CorpusError::Format {
            line,
            message: message.into(),
        }
    }
}

/// One raw clean-corpus sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub id: String,
    pub text: String,
    pub provenance: Option<String>,
}

impl SentenceRecord {
    /// Returns `None` when the text is blank or spans several lines.
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Option<Self> {
        let text = text.into();
        if text.trim().is_empty() || text.contains(['\n', '\r']) {
            return None;
        }
        Some(SentenceRecord {
            id: id.into(),
            text,
            provenance: None,
        })
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = Some(provenance.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TaggedToken {
    pub surface: String,
    pub lemma: String,
    pub pos: String,
    pub feats: Feats,
}

impl TaggedToken {
    pub fn new(
        surface: impl Into<String>,
        lemma: impl Into<String>,
        pos: impl Into<String>,
        feats: Feats,
    ) -> Self {
        TaggedToken {
            surface: surface.into(),
            lemma: lemma.into(),
            pos: pos.into(),
            feats,
        }
    }

    /// A token with no analysis: lemma equals surface, empty tag and feats.
    pub fn bare(surface: impl Into<String>) -> Self {
        let surface = surface.into();
        TaggedToken {
            lemma: surface.clone(),
            surface,
            pos: String::new(),
            feats: Feats::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedSentence {
    pub id: String,
    pub tokens: Vec<TaggedToken>,
    pub raw_text: Option<String>,
}

impl TaggedSentence {
    /// Returns `None` for an empty token list or a token with an empty surface.
    pub fn new(id: impl Into<String>, tokens: Vec<TaggedToken>) -> Option<Self> {
        if tokens.is_empty() || tokens.iter().any(|t| t.surface.is_empty()) {
            return None;
        }
        Some(TaggedSentence {
            id: id.into(),
            tokens,
            raw_text: None,
        })
    }

    pub fn with_raw_text(mut self, raw: impl Into<String>) -> Self {
        self.raw_text = Some(raw.into());
        self
    }

    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.surface.as_str()).collect()
    }

    /// Inter-token whitespace. Recovered from `raw_text` when the tokens can be
    /// located in it separated only by whitespace, otherwise the default
    /// spacing rules apply.
    pub fn gaps(&self) -> Vec<String> {
        self.raw_text
            .as_deref()
            .and_then(|raw| locate_gaps(raw, &self.surfaces()))
            .unwrap_or_else(|| default_gaps(&self.surfaces()))
    }

    /// The sentence text: `raw_text` when consistent with the tokens,
    /// otherwise the tokens joined with default spacing.
    pub fn text(&self) -> String {
        let gaps = self.gaps();
        let mut out = String::new();
        for (gap, tok) in gaps.iter().zip(&self.tokens) {
            out.push_str(gap);
            out.push_str(&tok.surface);
        }
        out.push_str(&gaps[self.tokens.len()]);
        out
    }
}

fn locate_gaps(raw: &str, surfaces: &[&str]) -> Option<Vec<String>> {
    let mut gaps = Vec::with_capacity(surfaces.len() + 1);
    let mut rest = raw;
    for surface in surfaces {
        let trimmed = rest.trim_start();
        let gap_len = rest.len() - trimmed.len();
        if !trimmed.starts_with(surface) {
            return None;
        }
        gaps.push(rest[..gap_len].to_owned());
        rest = &trimmed[surface.len()..];
    }
    if !rest.chars().all(char::is_whitespace) {
        return None;
    }
    gaps.push(rest.to_owned());
    Some(gaps)
}
