//! Sentence corruption: the fourteen noise ops, their composition into
//! parallel pairs, typed test-set generation and edit-log inversion.

mod compose;
mod config;
mod log;
pub mod ops;
mod sentence;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use compose::{
    compose_corpus, compose_noise, generate_typed_testset, invert, op_rng, verify_isolation,
    Composed, OpTrace,
};
pub use config::{
    Intensity, LexiconPaths, Lexicons, MoodDirection, NoiseConfig, NoiseContext, NoiseOptions,
    OpSettings, PosClasses, RuleBasedPolicy, DEFAULT_NAIVE_OP_PROBABILITY,
};
pub use log::{EditLog, EditRecord};
pub use ops::apply_op;
pub use sentence::{gap, Gap, NoiseOutcome, NoisySentence, LENGTH_BOUNDS};

use crate::morpho::LexiconError;

#[derive(Debug, Error)]
pub enum NoiseError {
    #[error("edit record {record}: expected {expected:?} in the text, found {found:?}")]
    Integrity {
        record: usize,
        expected: String,
        found: String,
    },
    #[error("inverted source {restored:?} does not match target {target:?}")]
    InversionMismatch { restored: String, target: String },
    #[error("invalid noise config: {0}")]
    Config(String),
    #[error("corpus exhausted: found {found} of {requested} sentences admitting {op}")]
    Exhausted {
        op: NoiseOp,
        found: usize,
        requested: usize,
    },
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error("unknown noise op {0:?}")]
    UnknownOp(String),
    #[error("pair {id} is not isolated to {op}: {reason}")]
    NotIsolated {
        id: String,
        op: NoiseOp,
        reason: String,
    },
}

/// The corruption operations, declared in application order: grammatical
/// first, then word-level, then character-level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseOp {
    Dativitis,
    SwapMood,
    SwapNounCase,
    Misspelling,
    SplitCompound,
    DeleteCommas,
    SwapWordOrder,
    DuplicateWord,
    DeleteSpace,
    DuplicateChar,
    DropChar,
    RuleCharSwap,
    ToggleAccent,
    ReplaceRandomChar,
}

impl NoiseOp {
    pub const ALL: [NoiseOp; 14] = [
        NoiseOp::Dativitis,
        NoiseOp::SwapMood,
        NoiseOp::SwapNounCase,
        NoiseOp::Misspelling,
        NoiseOp::SplitCompound,
        NoiseOp::DeleteCommas,
        NoiseOp::SwapWordOrder,
        NoiseOp::DuplicateWord,
        NoiseOp::DeleteSpace,
        NoiseOp::DuplicateChar,
        NoiseOp::DropChar,
        NoiseOp::RuleCharSwap,
        NoiseOp::ToggleAccent,
        NoiseOp::ReplaceRandomChar,
    ];

    /// The seven typed test sets and the op each one exercises.
    pub const TEST_SETS: [(&'static str, NoiseOp); 7] = [
        ("dativitis", NoiseOp::Dativitis),
        ("spaces", NoiseOp::DeleteSpace),
        ("commas", NoiseOp::DeleteCommas),
        ("dupl-words", NoiseOp::DuplicateWord),
        ("mood", NoiseOp::SwapMood),
        ("rand-noise", NoiseOp::ReplaceRandomChar),
        ("noun-case", NoiseOp::SwapNounCase),
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NoiseOp::Dativitis => "dativitis",
            NoiseOp::SwapMood => "swap_mood",
            NoiseOp::SwapNounCase => "swap_noun_case",
            NoiseOp::Misspelling => "misspelling",
            NoiseOp::SplitCompound => "split_compound",
            NoiseOp::DeleteCommas => "delete_commas",
            NoiseOp::SwapWordOrder => "swap_word_order",
            NoiseOp::DuplicateWord => "duplicate_word",
            NoiseOp::DeleteSpace => "delete_space",
            NoiseOp::DuplicateChar => "duplicate_char",
            NoiseOp::DropChar => "drop_char",
            NoiseOp::RuleCharSwap => "rule_char_swap",
            NoiseOp::ToggleAccent => "toggle_accent",
            NoiseOp::ReplaceRandomChar => "replace_random_char",
        }
    }

    /// Lexicon-driven ops, applied wherever possible by default.
    pub fn is_rule_based(self) -> bool {
        matches!(
            self,
            NoiseOp::Dativitis
                | NoiseOp::SwapMood
                | NoiseOp::SwapNounCase
                | NoiseOp::Misspelling
                | NoiseOp::SplitCompound
        )
    }

    /// Resolves a test-set name ("dupl-words") or an op id ("duplicate_word").
    pub fn from_test_set_name(name: &str) -> Option<NoiseOp> {
        NoiseOp::TEST_SETS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|&(_, op)| op)
            .or_else(|| name.parse().ok())
    }

    pub fn test_set_name(self) -> &'static str {
        NoiseOp::TEST_SETS
            .iter()
            .find(|(_, op)| *op == self)
            .map_or(self.as_str(), |&(n, _)| n)
    }
}

impl fmt::Display for NoiseOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NoiseOp {
    type Err = NoiseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NoiseOp::ALL
            .into_iter()
            .find(|op| op.as_str() == s)
            .ok_or_else(|| NoiseError::UnknownOp(s.to_owned()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for op in NoiseOp::ALL {
            assert_eq!(op.as_str().parse::<NoiseOp>().unwrap(), op);
            let json = serde_json::to_string(&op).unwrap();
            assert_eq!(json, format!("\"{op}\""));
        }
        assert!("nope".parse::<NoiseOp>().is_err());
    }

    #[test]
    fn test_set_names() {
        assert_eq!(NoiseOp::from_test_set_name("dupl-words"), Some(NoiseOp::DuplicateWord));
        assert_eq!(NoiseOp::from_test_set_name("spaces"), Some(NoiseOp::DeleteSpace));
        assert_eq!(NoiseOp::from_test_set_name("drop_char"), Some(NoiseOp::DropChar));
        assert_eq!(NoiseOp::DeleteCommas.test_set_name(), "commas");
        assert_eq!(NoiseOp::DropChar.test_set_name(), "drop_char");
    }

    #[test]
    fn order_is_grammatical_then_word_then_char() {
        let rule: Vec<bool> = NoiseOp::ALL.iter().map(|op| op.is_rule_based()).collect();
        assert_eq!(rule, [true, true, true, true, true, false, false, false, false, false, false, false, false, false]);
        let mut sorted = NoiseOp::ALL;
        sorted.sort();
        assert_eq!(sorted, NoiseOp::ALL);
    }
}
