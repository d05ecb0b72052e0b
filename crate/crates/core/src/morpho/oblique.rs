use std::collections::HashMap;
use std::path::Path;

use super::{read_lexicon_file, tsv_rows, Case, LexiconError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObliqueVerb {
    /// Subject case in the standard language.
    pub standard_case: Case,
    /// Third-person singular present indicative, if listed.
    pub third_singular: Option<String>,
}

impl ObliqueVerb {
    /// Case the subject takes in the dativitis variant.
    pub const TARGET_CASE: Case = Case::Dat;
}

/// Verbs whose subject drifts to the dative, from
/// `lemma<TAB>standard_case<TAB>3sg_form` rows (`_` for an unknown form).
#[derive(Debug, Clone, Default)]
pub struct ObliqueVerbLexicon {
    verbs: HashMap<String, ObliqueVerb>,
}

impl ObliqueVerbLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, lemma: &str, verb: ObliqueVerb) -> Result<(), LexiconError> {
        if verb.standard_case == ObliqueVerb::TARGET_CASE {
            return Err(LexiconError::Invalid(format!(
                "{lemma}: standard case must differ from the dative target"
            )));
        }
        self.verbs.insert(lemma.to_owned(), verb);
        Ok(())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, LexiconError> {
        let mut lex = Self::new();
        for row in tsv_rows(text, origin, 2..=3) {
            let (line, cols) = row?;
            let fail = |message: String| LexiconError::Format {
                origin: origin.to_owned(),
                line,
                message,
            };
            let standard_case: Case = cols[1].parse().map_err(fail)?;
            let third_singular = match cols.get(2).copied() {
                None | Some("_") | Some("") => None,
                Some(f) => Some(f.to_owned()),
            };
            lex.insert(
                cols[0],
                ObliqueVerb {
                    standard_case,
                    third_singular,
                },
            )
            .map_err(|e| fail(e.to_string()))?;
        }
        Ok(lex)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        Self::parse(&read_lexicon_file(path)?, &path.display().to_string())
    }

    pub fn get(&self, lemma: &str) -> Option<&ObliqueVerb> {
        self.verbs.get(lemma)
    }

    pub fn is_empty(&self) -> bool {
        self.verbs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.verbs.len()
    }
}
