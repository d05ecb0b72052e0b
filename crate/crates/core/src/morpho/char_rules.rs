use std::collections::HashMap;
use std::path::Path;

use super::{read_lexicon_file, tsv_rows, LexiconError};

const DEFAULT_CHAR_RULES: &str = include_str!("../../data/char_rules.tsv");
const DEFAULT_ACCENTS: &str = include_str!("../../data/accents.tsv");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharRule {
    pub pattern: Vec<char>,
    pub replacement: Vec<char>,
    pub bidirectional: bool,
}

/// Character rewrite rules from `pattern<TAB>replacement<TAB>{bi|uni}` rows.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CharRuleTable {
    rules: Vec<CharRule>,
    /// Rules expanded into one entry per direction.
    directed: Vec<(Vec<char>, Vec<char>)>,
    /// Indices into `directed` by the first char of the pattern.
    by_first: HashMap<char, Vec<usize>>,
}

impl CharRuleTable {
    pub fn new(rules: Vec<CharRule>) -> Result<Self, LexiconError> {
        let mut directed = Vec::new();
        for r in &rules {
            if r.pattern.is_empty() || r.replacement.is_empty() {
                return Err(LexiconError::Invalid("empty char rule side".into()));
            }
            if r.pattern == r.replacement {
                return Err(LexiconError::Invalid(format!(
                    "char rule {:?} maps to itself",
                    r.pattern.iter().collect::<String>()
                )));
            }
            directed.push((r.pattern.clone(), r.replacement.clone()));
            if r.bidirectional {
                directed.push((r.replacement.clone(), r.pattern.clone()));
            }
        }
        let mut by_first: HashMap<char, Vec<usize>> = HashMap::new();
        for (k, (from, _)) in directed.iter().enumerate() {
            by_first.entry(from[0]).or_default().push(k);
        }
        Ok(CharRuleTable { rules, directed, by_first })
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, LexiconError> {
        let mut rules = Vec::new();
        for row in tsv_rows(text, origin, 3..=3) {
            let (line, cols) = row?;
            let bidirectional = match cols[2] {
                "bi" => true,
                "uni" => false,
                other => {
                    return Err(LexiconError::Format {
                        origin: origin.to_owned(),
                        line,
                        message: format!("direction must be bi or uni, got {other:?}"),
                    })
                }
            };
            rules.push(CharRule {
                pattern: cols[0].chars().collect(),
                replacement: cols[1].chars().collect(),
                bidirectional,
            });
        }
        Self::new(rules).map_err(|e| LexiconError::Format {
            origin: origin.to_owned(),
            line: 0,
            message: e.to_string(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        Self::parse(&read_lexicon_file(path)?, &path.display().to_string())
    }

    /// Spelling swaps: y↔i, ý↔í, ýi→ýji and uppercase counterparts.
    pub fn default_swaps() -> Self {
        Self::parse(DEFAULT_CHAR_RULES, "built-in char rules").expect("built-in rules are valid")
    }

    /// Accent pairs a↔á, e↔é, i↔í, o↔ó, u↔ú, y↔ý and uppercase counterparts.
    pub fn default_accents() -> Self {
        Self::parse(DEFAULT_ACCENTS, "built-in accents").expect("built-in accents are valid")
    }

    pub fn rules(&self) -> &[CharRule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Every `(position, from, to)` rewrite applicable to `word`, ordered by
    /// position.
    pub fn sites<'a>(&'a self, word: &[char]) -> Vec<(usize, &'a [char], &'a [char])> {
        let mut out = Vec::new();
        for (pos, c) in word.iter().enumerate() {
            for &k in self.by_first.get(c).map_or(&[][..], Vec::as_slice) {
                let (from, to) = &self.directed[k];
                if word[pos..].starts_with(from) {
                    out.push((pos, from.as_slice(), to.as_slice()));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn defaults_cover_listed_pairs() {
        let swaps = CharRuleTable::default_swaps();
        let sites = swaps.sites(&chars("Atvinnuleysi"));
        let rewrites: Vec<(usize, String)> = sites
            .iter()
            .map(|(p, _, to)| (*p, to.iter().collect()))
            .collect();
        assert!(rewrites.contains(&(9, "i".to_owned())));
        assert!(rewrites.contains(&(3, "y".to_owned())));
        let s = swaps.sites(&chars("nýi"));
        assert!(s.iter().any(|(p, f, t)| *p == 1 && f.len() == 2 && t.iter().collect::<String>() == "ýji"));

        let accents = CharRuleTable::default_accents();
        assert_eq!(accents.sites(&chars("á")).len(), 1);
        assert_eq!(accents.sites(&chars("I")).len(), 1);
        assert!(accents.sites(&chars("þð")).is_empty());
    }

    #[test]
    fn rejects_bad_rules() {
        assert!(CharRuleTable::parse("a\ta\tbi\n", "t").is_err());
        assert!(CharRuleTable::parse("a\tb\tboth\n", "t").is_err());
    }
}
