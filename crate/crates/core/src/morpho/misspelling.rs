use std::collections::{HashMap, HashSet};
use std::path::Path;

use super::{lower_first, read_lexicon_file, tsv_rows, LexiconError};

/// Correct word → misspelled variants, from `correct<TAB>variant` rows.
/// Variant order follows the file.
#[derive(Debug, Clone, Default)]
pub struct MisspellingLexicon {
    variants: HashMap<String, Vec<String>>,
    misspelled: HashSet<String>,
}

impl MisspellingLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, correct: &str, variant: &str) -> Result<(), LexiconError> {
        if correct.is_empty() || variant.is_empty() {
            return Err(LexiconError::Invalid("empty misspelling entry".into()));
        }
        if correct == variant {
            return Err(LexiconError::Invalid(format!(
                "variant of {correct:?} equals the correct form"
            )));
        }
        let list = self.variants.entry(correct.to_owned()).or_default();
        if !list.iter().any(|v| v == variant) {
            list.push(variant.to_owned());
        }
        self.misspelled.insert(variant.to_owned());
        Ok(())
    }

    pub fn from_pairs<'a>(
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, LexiconError> {
        let mut lex = Self::new();
        for (c, v) in pairs {
            lex.insert(c, v)?;
        }
        Ok(lex)
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, LexiconError> {
        let mut lex = Self::new();
        for row in tsv_rows(text, origin, 2..=2) {
            let (line, cols) = row?;
            lex.insert(cols[0], cols[1]).map_err(|e| LexiconError::Format {
                origin: origin.to_owned(),
                line,
                message: e.to_string(),
            })?;
        }
        Ok(lex)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        Self::parse(&read_lexicon_file(path)?, &path.display().to_string())
    }

    pub fn is_empty(&self) -> bool {
        self.variants.is_empty()
    }

    pub fn len(&self) -> usize {
        self.variants.len()
    }

    /// Variants of `surface` in file order; empty for unknown words.
    pub fn misspellings_of(&self, surface: &str) -> &[String] {
        self.variants.get(surface).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Variants for `surface` or, failing that, for its lowercased-initial form.
    pub fn misspellings_any_case(&self, surface: &str) -> &[String] {
        let exact = self.misspellings_of(surface);
        if !exact.is_empty() {
            return exact;
        }
        lower_first(surface)
            .map(|l| self.misspellings_of(&l))
            .unwrap_or(&[])
    }

    /// True when `surface` (or its lowercased-initial form) is a listed variant.
    pub fn is_known_misspelling(&self, surface: &str) -> bool {
        self.misspelled.contains(surface)
            || lower_first(surface).is_some_and(|l| self.misspelled.contains(&l))
    }
}
