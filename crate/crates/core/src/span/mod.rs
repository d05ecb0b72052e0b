//! Span-based edit extraction and scoring: token alignment, edit spans,
//! precision/recall/F0.5 and M2 reading and writing.

mod align;
mod m2;
mod score;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use align::{align, align_with, alignment_cost, apply_edits, extract_edits, extract_edits_with, AlignCosts, AlignOp, AlignStep};
pub use m2::{from_m2, to_m2, write_m2, M2Entry};
pub use score::{score_corpus_spans, score_spans, SpanCounts, SpanEntry, SpanScore};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpanError {
    #[error("edit {index} ({start}..{end}) is out of range for {len} source tokens")]
    OutOfRange {
        index: usize,
        start: usize,
        end: usize,
        len: usize,
    },
    #[error("edit {index} overlaps or precedes the edit before it")]
    Overlap { index: usize },
    #[error("M2 line {line}: {message}")]
    M2Format { line: usize, message: String },
    #[error("token {0:?} cannot be written to M2 (empty or contains whitespace)")]
    BadToken(String),
    #[error("{what}: expected {expected} entries, got {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
}

/// Replace source tokens `start..end` with `replacement`. `start == end` is an
/// insertion and an empty replacement is a deletion.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EditSpan {
    pub start: usize,
    pub end: usize,
    pub replacement: Vec<String>,
}

impl EditSpan {
    pub fn new<S: Into<String>>(start: usize, end: usize, replacement: impl IntoIterator<Item = S>) -> Self {
        EditSpan {
            start,
            end,
            replacement: replacement.into_iter().map(Into::into).collect(),
        }
    }
}

/// Checks that `edits` are in range for `len` source tokens, sorted and
/// non-overlapping. Two insertions at the same point overlap; an insertion
/// may touch a neighbouring replacement.
pub fn validate_edits(edits: &[EditSpan], len: usize) -> Result<(), SpanError> {
    let mut prev: Option<&EditSpan> = None;
    for (index, e) in edits.iter().enumerate() {
        if e.start > e.end || e.end > len {
            return Err(SpanError::OutOfRange {
                index,
                start: e.start,
                end: e.end,
                len,
            });
        }
        if let Some(p) = prev {
            let same_point_insert = p.start == p.end && e.start == e.end && p.start == e.start;
            if e.start < p.end || same_point_insert || e.start < p.start {
                return Err(SpanError::Overlap { index });
            }
        }
        prev = Some(e);
    }
    Ok(())
}
