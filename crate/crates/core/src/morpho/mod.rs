//! Lexicon-backed morphology: inflection lookup, misspelling lists,
//! oblique-subject verbs and character rewrite rules.
//!
//! All lexicons are flat TSV files. Blank lines and lines starting with `# `
//! are ignored.

mod char_rules;
mod inflection;
mod misspelling;
mod oblique;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use char_rules::{CharRule, CharRuleTable};
pub use inflection::{Analysis, InflectionLexicon, Inflection};
pub use misspelling::MisspellingLexicon;
pub use oblique::{ObliqueVerb, ObliqueVerbLexicon};

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin} line {line}: {message}")]
    Format {
        origin: String,
        line: usize,
        message: String,
    },
    #[error("invalid lexicon entry: {0}")]
    Invalid(String),
}

pub(crate) fn read_lexicon_file(path: &Path) -> Result<String, LexiconError> {
    std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Yields `(line_number, columns)` for the data lines of a TSV text, checking
/// the column count.
pub(crate) fn tsv_rows<'a>(
    text: &'a str,
    origin: &'a str,
    columns: std::ops::RangeInclusive<usize>,
) -> impl Iterator<Item = Result<(usize, Vec<&'a str>), LexiconError>> + 'a {
    text.lines().enumerate().filter_map(move |(i, line)| {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() || line.starts_with("# ") {
            return None;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if !columns.contains(&cols.len()) {
            return Some(Err(LexiconError::Format {
                origin: origin.to_owned(),
                line: i + 1,
                message: format!(
                    "expected {}..={} columns, found {}",
                    columns.start(),
                    columns.end(),
                    cols.len()
                ),
            }));
        }
        Some(Ok((i + 1, cols)))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Nom,
    Acc,
    Dat,
    Gen,
}

impl Case {
    pub const ALL: [Case; 4] = [Case::Nom, Case::Acc, Case::Dat, Case::Gen];

    pub fn as_str(self) -> &'static str {
        match self {
            Case::Nom => "nom",
            Case::Acc => "acc",
            Case::Dat => "dat",
            Case::Gen => "gen",
        }
    }
}

impl FromStr for Case {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nom" => Ok(Case::Nom),
            "acc" => Ok(Case::Acc),
            "dat" => Ok(Case::Dat),
            "gen" => Ok(Case::Gen),
            other => Err(format!("unknown case {other:?}")),
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Carries the capitalization of `template` over to `form`: all-caps words
/// stay all-caps, an initial capital stays an initial capital.
pub fn match_case(template: &str, form: &str) -> String {
    let mut t = template.chars();
    let Some(first) = t.next() else {
        return form.to_owned();
    };
    let letters: Vec<char> = template.chars().filter(|c| c.is_alphabetic()).collect();
    if letters.len() > 1 && letters.iter().all(|c| c.is_uppercase()) {
        return form.to_uppercase();
    }
    if first.is_uppercase() {
        let mut f = form.chars();
        return match f.next() {
            Some(c) if c.is_lowercase() => c.to_uppercase().chain(f).collect(),
            _ => form.to_owned(),
        };
    }
    form.to_owned()
}

/// `s` with its first character lowercased, if it was uppercase.
pub(crate) fn lower_first(s: &str) -> Option<String> {
    let mut chars = s.chars();
    let first = chars.next()?;
    if !first.is_uppercase() {
        return None;
    }
    Some(first.to_lowercase().chain(chars).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn match_case_keeps_capitalization() {
        assert_eq!(match_case("Ég", "mér"), "Mér");
        assert_eq!(match_case("ég", "mér"), "mér");
        assert_eq!(match_case("ÉG", "mér"), "MÉR");
        assert_eq!(match_case("Páll", "Páli"), "Páli");
    }
}
