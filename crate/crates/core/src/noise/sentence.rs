use std::borrow::Cow;
use std::sync::Arc;

use super::{EditLog, EditRecord, NoiseOp};
use crate::corpus::{TaggedSentence, TaggedToken};

/// Noised text must stay within these multiples of the clean length.
pub const LENGTH_BOUNDS: (f64, f64) = (0.3, 3.0);

/// Whitespace between tokens; the common empty and single-space gaps are
/// borrowed.
pub type Gap = Cow<'static, str>;

pub fn gap(text: &str) -> Gap {
    match text {
        "" => Cow::Borrowed(""),
        " " => Cow::Borrowed(" "),
        other => Cow::Owned(other.to_owned()),
    }
}

/// A tagged sentence being corrupted: tokens, the whitespace around them and
/// the char length of the clean text it started from. Tokens are shared, so
/// cloning a sentence copies only the two vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoisySentence {
    pub tokens: Vec<Arc<TaggedToken>>,
    /// `gaps[i]` precedes `tokens[i]`; the last entry trails the sentence.
    pub gaps: Vec<Gap>,
    pub clean_chars: usize,
}

impl NoisySentence {
    pub fn from_tagged(sentence: &TaggedSentence) -> Self {
        let gaps = sentence.gaps().iter().map(|g| gap(g)).collect();
        let mut s = NoisySentence {
            tokens: sentence.tokens.iter().cloned().map(Arc::new).collect(),
            gaps,
            clean_chars: 0,
        };
        s.clean_chars = s.render().chars().count();
        s
    }

    pub fn render(&self) -> String {
        let len = self.gaps.iter().map(|g| g.len()).sum::<usize>()
            + self.tokens.iter().map(|t| t.surface.len()).sum::<usize>();
        let mut out = String::with_capacity(len);
        for (gap, tok) in self.gaps.iter().zip(&self.tokens) {
            out.push_str(gap);
            out.push_str(&tok.surface);
        }
        if let Some(last) = self.gaps.get(self.tokens.len()) {
            out.push_str(last);
        }
        out
    }

    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.surface.as_str()).collect()
    }

    /// Mutable access to one token, copying it first if it is shared.
    pub(crate) fn token_mut(&mut self, index: usize) -> &mut TaggedToken {
        Arc::make_mut(&mut self.tokens[index])
    }

    pub(crate) fn insert_token(&mut self, index: usize, token: Arc<TaggedToken>, gap_before: &str) {
        self.tokens.insert(index, token);
        self.gaps.insert(index, gap(gap_before));
    }

    /// Removes token `index` and replaces the gaps on either side with `gap`.
    pub(crate) fn remove_token(&mut self, index: usize, joined: &str) {
        self.tokens.remove(index);
        self.gaps.remove(index + 1);
        self.gaps[index] = gap(joined);
    }
}

/// Result of one noise op.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoiseOutcome {
    pub sentence: NoisySentence,
    pub log: EditLog,
    pub changed: bool,
    /// Whether the op found at least one site it could act on.
    pub applicable: bool,
}

/// Applies changes to a sentence one step at a time, logging each step as a
/// single localized text rewrite. The sentence is copied on the first
/// committed step.
pub(crate) struct Editor<'a> {
    op: NoiseOp,
    original: &'a NoisySentence,
    edited: Option<NoisySentence>,
    text: Vec<char>,
    log: EditLog,
    applicable: bool,
}

impl<'a> Editor<'a> {
    pub fn new(op: NoiseOp, sentence: &'a NoisySentence) -> Self {
        Editor {
            op,
            original: sentence,
            edited: None,
            text: Vec::new(),
            log: EditLog::default(),
            applicable: false,
        }
    }

    pub fn sentence(&self) -> &NoisySentence {
        self.edited.as_ref().unwrap_or(self.original)
    }

    pub fn mark_applicable(&mut self) {
        self.applicable = true;
    }

    /// Runs `change` on a copy of the sentence and commits it unless it leaves
    /// the text unchanged or breaks the length bounds. Returns whether it was
    /// committed.
    pub fn step(&mut self, token: usize, change: impl FnOnce(&mut NoisySentence)) -> bool {
        if self.edited.is_none() {
            self.text = self.original.render().chars().collect();
        }
        let mut next = self.sentence().clone();
        change(&mut next);
        let new_text: Vec<char> = next.render().chars().collect();
        if new_text == self.text {
            return false;
        }
        let clean = self.original.clean_chars as f64;
        let len = new_text.len() as f64;
        if len < LENGTH_BOUNDS.0 * clean || len > LENGTH_BOUNDS.1 * clean {
            return false;
        }
        let prefix = self
            .text
            .iter()
            .zip(&new_text)
            .take_while(|(a, b)| a == b)
            .count();
        let max_suffix = self.text.len().min(new_text.len()) - prefix;
        let suffix = self
            .text
            .iter()
            .rev()
            .zip(new_text.iter().rev())
            .take(max_suffix)
            .take_while(|(a, b)| a == b)
            .count();
        self.log.push(EditRecord {
            op: self.op,
            token,
            offset: prefix,
            before: self.text[prefix..self.text.len() - suffix].iter().collect(),
            after: new_text[prefix..new_text.len() - suffix].iter().collect(),
        });
        self.edited = Some(next);
        self.text = new_text;
        true
    }

    /// Steps that cancel out (y→i then i→y) leave the input untouched and
    /// the log empty.
    pub fn finish(self) -> NoiseOutcome {
        let unchanged = NoiseOutcome {
            sentence: self.original.clone(),
            log: EditLog::default(),
            changed: false,
            applicable: self.applicable,
        };
        match self.edited {
            Some(sentence) if !self.text.iter().copied().eq(self.original.render().chars()) => NoiseOutcome {
                sentence,
                log: self.log,
                changed: true,
                applicable: self.applicable,
            },
            _ => unchanged,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sentence(words: &[&str]) -> NoisySentence {
        let tagged = TaggedSentence::new("t", words.iter().map(|w| TaggedToken::bare(*w)).collect())
            .unwrap();
        NoisySentence::from_tagged(&tagged)
    }

    #[test]
    fn step_records_minimal_region() {
        let s = sentence(&["ein", "af", "."]);
        let mut ed = Editor::new(NoiseOp::DuplicateChar, &s);
        assert!(ed.step(0, |s| s.token_mut(0).surface = "eein".into()));
        assert!(!ed.step(0, |_| {}));
        let out = ed.finish();
        assert_eq!(out.sentence.render(), "eein af.");
        let r = &out.log.records()[0];
        assert_eq!((r.offset, r.before.as_str(), r.after.as_str()), (1, "", "e"));
        assert_eq!(out.log.undo("eein af.").unwrap(), "ein af.");
    }

    #[test]
    fn cancelling_steps_leave_input_verbatim() {
        let s = sentence(&["vinnu"]);
        let mut ed = Editor::new(NoiseOp::RuleCharSwap, &s);
        assert!(ed.step(0, |s| s.token_mut(0).surface = "vynnu".into()));
        assert!(ed.step(0, |s| s.token_mut(0).surface = "vinnu".into()));
        let out = ed.finish();
        assert!(!out.changed && out.log.is_empty());
        assert_eq!(out.sentence, s);
    }

    #[test]
    fn length_guard_blocks_runaway_growth() {
        let s = sentence(&["á"]);
        let mut ed = Editor::new(NoiseOp::DuplicateWord, &s);
        assert!(ed.step(0, |s| s.token_mut(0).surface = "ááá".into()));
        assert!(!ed.step(0, |s| s.token_mut(0).surface = "áááá".into()));
    }
}
