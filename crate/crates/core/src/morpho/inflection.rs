use std::collections::{HashMap, HashSet};
use std::path::Path;

use super::{lower_first, read_lexicon_file, tsv_rows, LexiconError};
use crate::corpus::Feats;

/// A morphological analysis: the key of the forward index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Analysis {
    pub lemma: String,
    pub pos: String,
    pub feats: Feats,
}

impl Analysis {
    pub fn new(lemma: impl Into<String>, pos: impl Into<String>, feats: Feats) -> Self {
        Analysis {
            lemma: lemma.into(),
            pos: pos.into(),
            feats,
        }
    }
}

/// Result of a forward lookup. Ambiguous keys return every attested surface
/// in lexicon order; the caller chooses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inflection<'a> {
    Absent,
    Unique(&'a str),
    Ambiguous(&'a [String]),
}

impl<'a> Inflection<'a> {
    pub fn forms(self) -> Vec<&'a str> {
        match self {
            Inflection::Absent => Vec::new(),
            Inflection::Unique(s) => vec![s],
            Inflection::Ambiguous(all) => all.iter().map(String::as_str).collect(),
        }
    }

    pub fn is_absent(self) -> bool {
        matches!(self, Inflection::Absent)
    }
}

/// Bidirectional index between analyses and surface forms, loaded from
/// `surface<TAB>lemma<TAB>pos<TAB>feats` rows.
#[derive(Debug, Clone, Default)]
pub struct InflectionLexicon {
    forward: HashMap<Analysis, Vec<String>>,
    reverse: HashMap<String, Vec<Analysis>>,
}

impl InflectionLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, surface: impl Into<String>, analysis: Analysis) {
        let surface = surface.into();
        let forms = self.forward.entry(analysis.clone()).or_default();
        if !forms.contains(&surface) {
            forms.push(surface.clone());
        }
        let analyses = self.reverse.entry(surface).or_default();
        if !analyses.contains(&analysis) {
            analyses.push(analysis);
        }
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, LexiconError> {
        let mut lex = InflectionLexicon::new();
        for row in tsv_rows(text, origin, 3..=4) {
            let (line, cols) = row?;
            let feats: Feats = cols
                .get(3)
                .copied()
                .unwrap_or("_")
                .parse()
                .map_err(|message| LexiconError::Format {
                    origin: origin.to_owned(),
                    line,
                    message,
                })?;
            if cols[0].is_empty() {
                return Err(LexiconError::Format {
                    origin: origin.to_owned(),
                    line,
                    message: "empty surface".into(),
                });
            }
            let lemma = if cols[1] == "_" || cols[1].is_empty() { cols[0] } else { cols[1] };
            lex.insert(cols[0], Analysis::new(lemma, cols[2], feats));
        }
        Ok(lex)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        Self::parse(&read_lexicon_file(path)?, &path.display().to_string())
    }

    pub fn len(&self) -> usize {
        self.forward.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Every `(analysis, surface)` entry; order unspecified.
    pub fn entries(&self) -> impl Iterator<Item = (&Analysis, &str)> {
        self.forward
            .iter()
            .flat_map(|(a, forms)| forms.iter().map(move |f| (a, f.as_str())))
    }

    pub fn inflect(&self, lemma: &str, pos: &str, feats: &Feats) -> Inflection<'_> {
        self.inflect_analysis(&Analysis::new(lemma, pos, feats.clone()))
    }

    pub fn inflect_analysis(&self, key: &Analysis) -> Inflection<'_> {
        match self.forward.get(key).map(Vec::as_slice) {
            None | Some([]) => Inflection::Absent,
            Some([one]) => Inflection::Unique(one),
            Some(all) => Inflection::Ambiguous(all),
        }
    }

    /// Exact reverse lookup; empty for unknown surfaces.
    pub fn analyze(&self, surface: &str) -> &[Analysis] {
        self.reverse.get(surface).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Reverse lookup that falls back to the lowercased-initial form of a
    /// capitalized word.
    pub fn analyze_any_case(&self, surface: &str) -> &[Analysis] {
        let exact = self.analyze(surface);
        if !exact.is_empty() {
            return exact;
        }
        lower_first(surface)
            .map(|l| self.analyze(&l))
            .unwrap_or(&[])
    }

    pub fn is_attested(&self, surface: &str) -> bool {
        !self.analyze_any_case(surface).is_empty()
    }

    /// Every way to cut `surface` into two attested surfaces, each at least
    /// `min_part_len` characters long, ordered by split position.
    pub fn valid_compound_splits(&self, surface: &str, min_part_len: usize) -> Vec<(String, String)> {
        let min_part_len = min_part_len.max(1);
        let chars: Vec<char> = surface.chars().collect();
        if chars.len() < 2 * min_part_len {
            return Vec::new();
        }
        (min_part_len..=chars.len() - min_part_len)
            .filter_map(|cut| {
                let left: String = chars[..cut].iter().collect();
                let right: String = chars[cut..].iter().collect();
                (self.is_attested(&left) && self.is_attested(&right)).then_some((left, right))
            })
            .collect()
    }

    /// Distinct surfaces; used for attestation checks in tests and tools.
    pub fn surfaces(&self) -> HashSet<&str> {
        self.reverse.keys().map(String::as_str).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "\
hlakka\thlakka\tverb\tmood=ind|num=sg|person=1
hlakkar\thlakka\tverb\tmood=ind|num=sg|person=3
hlakki\thlakka\tverb\tmood=subj|num=sg|person=1
Páll\tPáll\tnoun\tcase=nom|num=sg
Pál\tPáll\tnoun\tcase=acc|num=sg
Páli\tPáll\tnoun\tcase=dat|num=sg
Páls\tPáll\tnoun\tcase=gen|num=sg
af\taf\tprep\t_
bragð\tbragð\tnoun\tcase=nom|num=sg
afbragð\tafbragð\tnoun\tcase=nom|num=sg
bragðs\tbragð\tnoun\tcase=gen|num=sg
bragðs\tbragð\tnoun\tcase=gen|num=sg
hest\thestur\tnoun\tcase=acc|num=sg
hesta\thestur\tnoun\tcase=acc|num=pl
hesta\thestur\tnoun\tcase=gen|num=pl
maður\tmaður\tnoun\tcase=nom|num=sg
";

    fn lex() -> InflectionLexicon {
        InflectionLexicon::parse(FIXTURE, "fixture").unwrap()
    }

    fn feats(s: &str) -> Feats {
        s.parse().unwrap()
    }

    #[test]
    fn inflect_known_key() {
        assert_eq!(
            lex().inflect("hlakka", "verb", &feats("person=3|num=sg|mood=ind")),
            Inflection::Unique("hlakkar")
        );
    }

    #[test]
    fn inflect_absent_lemma() {
        assert!(lex().inflect("nothing", "verb", &Feats::new()).is_absent());
    }

    #[test]
    fn ambiguous_key_returns_all_forms() {
        let mut l = lex();
        l.insert("hlakkir", Analysis::new("hlakka", "verb", feats("mood=subj|num=sg|person=1")));
        assert_eq!(
            l.inflect("hlakka", "verb", &feats("mood=subj|num=sg|person=1")).forms(),
            ["hlakki", "hlakkir"]
        );
    }

    #[test]
    fn analyze_reverse_lookup() {
        let l = lex();
        assert_eq!(l.analyze("Páli"), [Analysis::new("Páll", "noun", feats("case=dat|num=sg"))]);
        assert!(l.analyze("unknown").is_empty());
        assert_eq!(l.analyze("hesta").len(), 2);
        // duplicate rows collapse
        assert_eq!(l.analyze("bragðs").len(), 1);
    }

    #[test]
    fn index_consistency() {
        let l = lex();
        for (analysis, surface) in l.entries() {
            assert!(l.analyze(surface).contains(analysis));
            for a in l.analyze(surface) {
                assert!(l.inflect_analysis(a).forms().contains(&surface));
            }
        }
    }

    fn brute_force_splits(l: &InflectionLexicon, word: &str, min: usize) -> Vec<(String, String)> {
        let surfaces = l.surfaces();
        let attested = |s: &str| {
            surfaces.contains(s) || lower_first(s).is_some_and(|x| surfaces.contains(x.as_str()))
        };
        let chars: Vec<char> = word.chars().collect();
        let mut out = Vec::new();
        for cut in 0..=chars.len() {
            let left: String = chars[..cut].iter().collect();
            let right: String = chars[cut..].iter().collect();
            if cut >= min && chars.len() - cut >= min && attested(&left) && attested(&right) {
                out.push((left, right));
            }
        }
        out
    }

    #[test]
    fn compound_splits_match_brute_force() {
        let l = lex();
        assert_eq!(
            l.valid_compound_splits("afbragð", 2),
            [("af".to_owned(), "bragð".to_owned())]
        );
        assert!(l.valid_compound_splits("afbragð", 3).is_empty());
        assert!(l.valid_compound_splits("Páll", 1).is_empty());
        assert!(l.valid_compound_splits("afbragð", 8).is_empty());
        assert_eq!(l.valid_compound_splits("Hestamaður", 3).len(), 1);
        let mut words: Vec<&str> = l.surfaces().into_iter().collect();
        words.extend(["hestamaður", "Afbragð", "hestbragð", "afaf", "bragðafbragð"]);
        for w in words {
            for min in 1..5 {
                assert_eq!(l.valid_compound_splits(w, min), brute_force_splits(&l, w, min), "{w} {min}");
            }
        }
    }

    #[test]
    fn malformed_rows() {
        assert!(InflectionLexicon::parse("a\tb\n", "x").is_err());
        assert!(InflectionLexicon::parse("a\tb\tc\tcase\n", "x").is_err());
    }
}
