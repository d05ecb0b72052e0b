//! Noise configuration (a JSON document) and the lexicons it points to.
//!
//! ```json
//! {
//!   "seed": 1,
//!   "naive_op_probability": 0.8,
//!   "rule_based_policy": "wherever_possible",
//!   "ops": { "toggle_accent": { "enabled": true, "probability": 0.5,
//!                               "intensity": { "chars_per_word": 2 } } },
//!   "options": { "mood_direction": "ind_to_subj" },
//!   "lexicons": { "inflection": "inflection.tsv" }
//! }
//! ```
//!
//! Every key is optional; unknown keys are rejected. Lexicon paths are
//! resolved relative to the config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{NoiseError, NoiseOp};
use crate::morpho::{
    CharRuleTable, InflectionLexicon, LexiconError, MisspellingLexicon, ObliqueVerbLexicon,
};
use crate::tokenizer::Tokenizer;

pub const DEFAULT_NAIVE_OP_PROBABILITY: f64 = 0.8;
const DEFAULT_REPLACEMENT_ALPHABET: &str = "aábdðeéfghiíjklmnoóprstuúvxyýþæö0123456789";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleBasedPolicy {
    /// Apply each rule-based op whenever the sentence has a site for it.
    WhereverPossible,
    Probabilistic(f64),
}

impl Default for RuleBasedPolicy {
    fn default() -> Self {
        RuleBasedPolicy::WhereverPossible
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Intensity {
    pub chars_per_word: usize,
    pub words_per_sentence: usize,
}

impl Default for Intensity {
    fn default() -> Self {
        Intensity {
            chars_per_word: 1,
            words_per_sentence: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OpSettings {
    pub enabled: bool,
    /// Overrides the per-sentence firing probability for this op.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probability: Option<f64>,
    pub intensity: Intensity,
}

impl Default for OpSettings {
    fn default() -> Self {
        OpSettings {
            enabled: true,
            probability: None,
            intensity: Intensity::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoodDirection {
    #[default]
    IndToSubj,
    SubjToInd,
}

impl MoodDirection {
    /// `(from, to)` values of the `mood` feature.
    pub fn values(self) -> (&'static str, &'static str) {
        match self {
            MoodDirection::IndToSubj => ("ind", "subj"),
            MoodDirection::SubjToInd => ("subj", "ind"),
        }
    }
}

/// PoS tag sets for the word classes the grammatical ops care about.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PosClasses {
    pub noun: Vec<String>,
    pub pronoun: Vec<String>,
    pub verb: Vec<String>,
    /// Determiners and adjectives that agree with a noun in case.
    pub modifier: Vec<String>,
}

impl Default for PosClasses {
    fn default() -> Self {
        let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        PosClasses {
            noun: v(&["no", "noun", "n"]),
            pronoun: v(&["fn", "pfn", "pron"]),
            verb: v(&["so", "verb", "v"]),
            modifier: v(&["lo", "gr", "adj", "det"]),
        }
    }
}

impl PosClasses {
    pub fn is_noun(&self, pos: &str) -> bool {
        self.noun.iter().any(|p| p == pos)
    }

    pub fn is_nominal(&self, pos: &str) -> bool {
        self.is_noun(pos) || self.pronoun.iter().any(|p| p == pos)
    }

    pub fn is_verb(&self, pos: &str) -> bool {
        self.verb.iter().any(|p| p == pos)
    }

    pub fn is_modifier(&self, pos: &str) -> bool {
        self.modifier.iter().any(|p| p == pos)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseOptions {
    pub mood_direction: MoodDirection,
    /// Also re-inflect agreeing modifiers before a case-swapped noun.
    pub np_wide_case_swap: bool,
    pub min_compound_part_len: usize,
    /// Chance that each comma is dropped once comma deletion fires.
    pub comma_probability: f64,
    pub replacement_alphabet: String,
    pub pos: PosClasses,
}

impl Default for NoiseOptions {
    fn default() -> Self {
        NoiseOptions {
            mood_direction: MoodDirection::default(),
            np_wide_case_swap: false,
            min_compound_part_len: 3,
            comma_probability: 1.0,
            replacement_alphabet: DEFAULT_REPLACEMENT_ALPHABET.to_owned(),
            pos: PosClasses::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LexiconPaths {
    pub inflection: Option<PathBuf>,
    pub misspellings: Option<PathBuf>,
    pub oblique_verbs: Option<PathBuf>,
    pub char_rules: Option<PathBuf>,
    pub accents: Option<PathBuf>,
    pub abbreviations: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub seed: u64,
    pub naive_op_probability: f64,
    pub rule_based_policy: RuleBasedPolicy,
    pub ops: BTreeMap<NoiseOp, OpSettings>,
    pub options: NoiseOptions,
    pub lexicons: LexiconPaths,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            seed: 0,
            naive_op_probability: DEFAULT_NAIVE_OP_PROBABILITY,
            rule_based_policy: RuleBasedPolicy::default(),
            ops: BTreeMap::new(),
            options: NoiseOptions::default(),
            lexicons: LexiconPaths::default(),
        }
    }
}

fn check_probability(name: &str, p: f64) -> Result<(), NoiseError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(NoiseError::Config(format!("{name} = {p} is outside [0, 1]")))
    }
}

impl NoiseConfig {
    pub fn from_json(text: &str) -> Result<Self, NoiseError> {
        let config: NoiseConfig =
            serde_json::from_str(text).map_err(|e| NoiseError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a config file and resolves its lexicon paths against the file's
    /// directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, NoiseError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| NoiseError::Config(format!("{}: {e}", path.display())))?;
        let mut config = Self::from_json(&text)?;
        if let Some(dir) = path.parent() {
            config.lexicons.resolve_relative_to(dir);
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), NoiseError> {
        check_probability("naive_op_probability", self.naive_op_probability)?;
        if let RuleBasedPolicy::Probabilistic(p) = self.rule_based_policy {
            check_probability("rule_based_policy.probabilistic", p)?;
        }
        for (op, s) in &self.ops {
            if let Some(p) = s.probability {
                check_probability(&format!("ops.{op}.probability"), p)?;
            }
            if s.intensity.chars_per_word == 0 || s.intensity.words_per_sentence == 0 {
                return Err(NoiseError::Config(format!("ops.{op}.intensity values must be >= 1")));
            }
        }
        check_probability("options.comma_probability", self.options.comma_probability)?;
        if self.options.min_compound_part_len == 0 {
            return Err(NoiseError::Config("options.min_compound_part_len must be >= 1".into()));
        }
        if self.options.replacement_alphabet.chars().count() < 2 {
            return Err(NoiseError::Config(
                "options.replacement_alphabet needs at least two characters".into(),
            ));
        }
        Ok(())
    }

    pub fn op(&self, op: NoiseOp) -> OpSettings {
        self.ops.get(&op).copied().unwrap_or_default()
    }

    pub fn set_op(&mut self, op: NoiseOp, settings: OpSettings) {
        self.ops.insert(op, settings);
    }

    /// Turns every op off except `keep`.
    pub fn only(mut self, keep: &[NoiseOp]) -> Self {
        for op in NoiseOp::ALL {
            let mut s = self.op(op);
            s.enabled = keep.contains(&op);
            self.set_op(op, s);
        }
        self
    }

    /// Probability that `op` fires on a sentence.
    pub fn firing_probability(&self, op: NoiseOp) -> f64 {
        if let Some(p) = self.op(op).probability {
            return p;
        }
        if op.is_rule_based() {
            match self.rule_based_policy {
                RuleBasedPolicy::WhereverPossible => 1.0,
                RuleBasedPolicy::Probabilistic(p) => p,
            }
        } else {
            self.naive_op_probability
        }
    }

    /// SHA-256 over the canonical JSON form, hex-encoded.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&json)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

impl LexiconPaths {
    pub fn resolve_relative_to(&mut self, dir: &Path) {
        for p in [
            &mut self.inflection,
            &mut self.misspellings,
            &mut self.oblique_verbs,
            &mut self.char_rules,
            &mut self.accents,
            &mut self.abbreviations,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
    }
}

/// Loaded resources for the noise ops. Missing morphological lexicons are
/// empty; char rules, accents and abbreviations fall back to built-ins.
#[derive(Debug, Clone)]
pub struct Lexicons {
    pub inflection: InflectionLexicon,
    pub misspellings: MisspellingLexicon,
    pub oblique_verbs: ObliqueVerbLexicon,
    pub char_rules: CharRuleTable,
    pub accents: CharRuleTable,
    pub tokenizer: Tokenizer,
}

impl Default for Lexicons {
    fn default() -> Self {
        Lexicons {
            inflection: InflectionLexicon::default(),
            misspellings: MisspellingLexicon::default(),
            oblique_verbs: ObliqueVerbLexicon::default(),
            char_rules: CharRuleTable::default_swaps(),
            accents: CharRuleTable::default_accents(),
            tokenizer: Tokenizer::default(),
        }
    }
}

impl Lexicons {
    pub fn load(paths: &LexiconPaths) -> Result<Self, LexiconError> {
        let mut lex = Lexicons::default();
        if let Some(p) = &paths.inflection {
            lex.inflection = InflectionLexicon::load(p)?;
        }
        if let Some(p) = &paths.misspellings {
            lex.misspellings = MisspellingLexicon::load(p)?;
        }
        if let Some(p) = &paths.oblique_verbs {
            lex.oblique_verbs = ObliqueVerbLexicon::load(p)?;
        }
        if let Some(p) = &paths.char_rules {
            lex.char_rules = CharRuleTable::load(p)?;
        }
        if let Some(p) = &paths.accents {
            lex.accents = CharRuleTable::load(p)?;
        }
        if let Some(p) = &paths.abbreviations {
            lex.tokenizer = Tokenizer::from_abbreviation_file(p).map_err(|e| LexiconError::Invalid(e.to_string()))?;
        }
        Ok(lex)
    }
}

/// Everything an op needs besides the sentence and its RNG.
#[derive(Debug, Clone, Copy)]
pub struct NoiseContext<'a> {
    pub config: &'a NoiseConfig,
    pub lexicons: &'a Lexicons,
}

impl<'a> NoiseContext<'a> {
    pub fn new(config: &'a NoiseConfig, lexicons: &'a Lexicons) -> Self {
        NoiseContext { config, lexicons }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_density_regime() {
        let c = NoiseConfig::default();
        assert_eq!(c.naive_op_probability, 0.8);
        assert_eq!(c.firing_probability(NoiseOp::DuplicateChar), 0.8);
        assert_eq!(c.firing_probability(NoiseOp::Dativitis), 1.0);
    }

    #[test]
    fn parses_full_document() {
        let c = NoiseConfig::from_json(
            r#"{"seed": 9, "naive_op_probability": 0.5,
                "rule_based_policy": {"probabilistic": 0.25},
                "ops": {"toggle_accent": {"enabled": false, "intensity": {"chars_per_word": 2}},
                        "delete_commas": {"probability": 1.0}},
                "options": {"mood_direction": "subj_to_ind"},
                "lexicons": {"inflection": "x.tsv"}}"#,
        )
        .unwrap();
        assert_eq!(c.seed, 9);
        assert!(!c.op(NoiseOp::ToggleAccent).enabled);
        assert_eq!(c.op(NoiseOp::ToggleAccent).intensity.chars_per_word, 2);
        assert_eq!(c.firing_probability(NoiseOp::SwapMood), 0.25);
        assert_eq!(c.firing_probability(NoiseOp::DeleteCommas), 1.0);
        assert_eq!(c.options.mood_direction, MoodDirection::SubjToInd);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(NoiseConfig::from_json(r#"{"sed": 1}"#).is_err());
        assert!(NoiseConfig::from_json(r#"{"ops": {"no_such_op": {}}}"#).is_err());
        assert!(NoiseConfig::from_json(r#"{"ops": {"drop_char": {"weight": 1}}}"#).is_err());
        assert!(NoiseConfig::from_json(r#"{"naive_op_probability": 1.5}"#).is_err());
        assert!(NoiseConfig::from_json(r#"{"lexicons": {"thesaurus": "x"}}"#).is_err());
    }

    #[test]
    fn fingerprint_is_stable() {
        let a = NoiseConfig::default();
        let mut b = NoiseConfig::default();
        assert_eq!(a.fingerprint(), b.fingerprint());
        b.seed = 1;
        assert_ne!(a.fingerprint(), b.fingerprint());
    }
}
