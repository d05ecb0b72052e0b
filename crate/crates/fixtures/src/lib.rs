//! Test fixtures: a small Icelandic lexicon set, a handwritten tagged corpus
//! and a deterministic generator of tagged multi-clause sentences built from
//! the fixture lexicon.

use std::path::PathBuf;
use std::sync::OnceLock;

use gecsynth::corpus::{read_tagged_corpus, Feats, TaggedSentence, TaggedToken};
use gecsynth::morpho::InflectionLexicon;
use gecsynth::noise::{Lexicons, NoiseConfig};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn config_path() -> PathBuf {
    data_dir().join("config.json")
}

/// The fixture noise config with lexicon paths resolved.
pub fn config() -> NoiseConfig {
    NoiseConfig::load(config_path()).expect("fixture config loads")
}

/// Fixture lexicons, loaded once per process.
pub fn lexicons() -> &'static Lexicons {
    static LEXICONS: OnceLock<Lexicons> = OnceLock::new();
    LEXICONS.get_or_init(|| Lexicons::load(&config().lexicons).expect("fixture lexicons load"))
}

pub fn handwritten_corpus() -> Vec<TaggedSentence> {
    read_tagged_corpus(data_dir().join("corpus.tagged"))
        .expect("fixture corpus opens")
        .collect::<Result<_, _>>()
        .expect("fixture corpus parses")
}

#[derive(Clone, Copy)]
enum Subject {
    Pronoun(&'static str),
    Name(&'static str),
    Noun(&'static str),
}

const SUBJECTS: &[Subject] = &[
    Subject::Pronoun("ég"),
    Subject::Pronoun("þú"),
    Subject::Pronoun("hann"),
    Subject::Pronoun("hún"),
    Subject::Pronoun("við"),
    Subject::Pronoun("þeir"),
    Subject::Name("Páll"),
    Subject::Name("Jón"),
    Subject::Name("Anna"),
    Subject::Noun("kona"),
    Subject::Noun("maður"),
    Subject::Noun("barn"),
    Subject::Noun("fjölskylda"),
    Subject::Noun("hestamaður"),
    Subject::Noun("borgarbarn"),
];

/// Oblique-subject verbs: lemma, standard subject case, complement pattern.
const OBLIQUE: &[(&str, &str, Complement)] = &[
    ("hlakka", "nom", Complement::Pp("til", "gen", &["sumar", "ferð", "sumarferð", "fjallaferð", "dagur"])),
    ("kvíða", "nom", Complement::Pp("fyrir", "dat", &["ferð", "veður", "dagur", "skóli", "vinna"])),
    ("langa", "acc", Complement::Infinitive),
    ("vanta", "acc", Complement::Object(&["vinna", "bíll", "hestur", "bók", "atvinna", "skólabók"])),
    ("dreyma", "acc", Complement::Object(&["hestur", "bíll", "sumarferð", "hús", "fjall"])),
];

/// Regular verbs with a nominative subject.
const REGULAR: &[(&str, Complement)] = &[
    ("lesa", Complement::Object(&["bók", "skólabók", "lýsing"])),
    ("skrifa", Complement::Object(&["bók", "lýsing"])),
    ("skoða", Complement::Object(&["hús", "safn", "bókasafn", "fjall", "bíll"])),
    ("finna", Complement::Object(&["hestur", "bók", "vinna", "atvinna"])),
    ("sjá", Complement::Object(&["fjall", "hestur", "borg", "land"])),
    ("hafa", Complement::Object(&["bíll", "hestur", "ástæða", "bragð"])),
    ("búa", Complement::Pp("í", "dat", &["borg", "sveit", "hús", "land"])),
    ("leita", Complement::Pp("að", "dat", &["vinna", "hestur", "bók", "atvinna"])),
    ("fara", Complement::Pp("á", "acc", &["Norðurland", "fjall", "safn", "bókasafn"])),
];

const INFINITIVES: &[(&str, &[&str])] = &[
    ("lesa", &["bók", "skólabók"]),
    ("skoða", &["hús", "bókasafn", "fjall"]),
    ("finna", &["vinna", "hestur"]),
    ("fá", &["bíll", "vinna", "bók"]),
    ("sjá", &["fjall", "borg"]),
];

const ADVERBS: &[&str] = &["ekki", "oft", "alltaf", "einnig", "mjög"];
const PP_TAIL: &[(&str, &str, &[&str])] = &[
    ("með", "dat", &["fjölskylda", "barn", "kona", "hestur"]),
    ("frá", "dat", &["borg", "Norðurland", "skóli", "land"]),
    ("yfir", "acc", &["sumar", "dagur"]),
    ("um", "acc", &["atvinnuleysi", "fólksfækkun", "ástæða"]),
];
const CONNECTIVES: &[&str] = &["en", "og", "þegar"];

#[derive(Clone, Copy)]
enum Complement {
    Pp(&'static str, &'static str, &'static [&'static str]),
    Object(&'static [&'static str]),
    Infinitive,
}

struct Generator<'a> {
    lex: &'a InflectionLexicon,
    rng: ChaCha8Rng,
}

fn feats(pairs: &[(&str, &str)]) -> Feats {
    pairs.iter().map(|&(k, v)| (k.to_owned(), v.to_owned())).collect()
}

impl Generator<'_> {
    fn form(&self, lemma: &str, pos: &str, feats: &Feats) -> TaggedToken {
        let forms = self.lex.inflect(lemma, pos, feats).forms();
        let surface = forms
            .first()
            .unwrap_or_else(|| panic!("fixture lexicon lacks {lemma} {pos} {feats}"));
        TaggedToken::new(*surface, lemma, pos, feats.clone())
    }

    fn word(&self, w: &str, pos: &str) -> TaggedToken {
        TaggedToken::new(w, w, pos, Feats::new())
    }

    fn noun(&mut self, lemma: &str, case: &str) -> TaggedToken {
        let num = if self.rng.random_bool(0.25) { "pl" } else { "sg" };
        let pl = feats(&[("case", case), ("num", "pl")]);
        let num = if num == "pl" && !self.lex.inflect(lemma, "no", &pl).is_absent() { "pl" } else { "sg" };
        self.form(lemma, "no", &feats(&[("case", case), ("num", num)]))
    }

    fn pick<T: Copy>(&mut self, items: &[T]) -> T {
        *items.choose(&mut self.rng).expect("non-empty")
    }

    /// Subject token in `case` and the person/number it agrees with.
    fn subject(&mut self, case: &str) -> (TaggedToken, &'static str, &'static str) {
        match self.pick(SUBJECTS) {
            Subject::Pronoun(p) => {
                let (num, person) = match p {
                    "ég" => ("sg", "1"),
                    "þú" => ("sg", "2"),
                    "við" => ("pl", "1"),
                    "þeir" => ("pl", "3"),
                    _ => ("sg", "3"),
                };
                (self.form(p, "fn", &feats(&[("case", case), ("num", num)])), num, person)
            }
            Subject::Name(n) => (self.form(n, "no", &feats(&[("case", case), ("num", "sg")])), "sg", "3"),
            Subject::Noun(n) => {
                let t = self.noun(n, case);
                let num = if t.feats.get("num") == Some("pl") { "pl" } else { "sg" };
                (t, num, "3")
            }
        }
    }

    fn verb(&self, lemma: &str, num: &str, person: &str) -> TaggedToken {
        self.form(lemma, "so", &feats(&[("mood", "ind"), ("num", num), ("person", person)]))
    }

    fn complement(&mut self, c: Complement, out: &mut Vec<TaggedToken>) {
        match c {
            Complement::Pp(prep, case, nouns) => {
                out.push(self.word(prep, "fs"));
                let n = self.pick(nouns);
                out.push(self.noun(n, case));
            }
            Complement::Object(nouns) => {
                let n = self.pick(nouns);
                out.push(self.noun(n, "acc"));
            }
            Complement::Infinitive => {
                let (verb, objects) = self.pick(INFINITIVES);
                out.push(self.word("að", "nhm"));
                out.push(self.form(verb, "so", &feats(&[("mood", "inf")])));
                let n = self.pick(objects);
                out.push(self.noun(n, "acc"));
            }
        }
    }

    fn clause(&mut self, first: bool) -> Vec<TaggedToken> {
        let mut out = Vec::new();
        if self.rng.random_bool(0.45) {
            let (lemma, case, complement) = self.pick(OBLIQUE);
            let (subj, num, person) = self.subject(case);
            let (num, person) = if case == "nom" { (num, person) } else { ("sg", "3") };
            let verb = self.verb(lemma, num, person);
            if !first && self.rng.random_bool(0.25) {
                out.push(self.word("nú", "aa"));
                out.extend([verb, subj]);
            } else {
                out.extend([subj, verb]);
            }
            if self.rng.random_bool(0.3) {
                let adv = self.pick(ADVERBS);
                out.push(self.word(adv, "aa"));
            }
            self.complement(complement, &mut out);
        } else {
            let (lemma, complement) = self.pick(REGULAR);
            let (subj, num, person) = self.subject("nom");
            out.push(subj);
            out.push(self.verb(lemma, num, person));
            if self.rng.random_bool(0.4) {
                let adv = self.pick(ADVERBS);
                out.push(self.word(adv, "aa"));
            }
            self.complement(complement, &mut out);
        }
        if self.rng.random_bool(0.5) {
            let (prep, case, nouns) = self.pick(PP_TAIL);
            out.push(self.word(prep, "fs"));
            let n = self.pick(nouns);
            out.push(self.noun(n, case));
        }
        out
    }

    fn sentence(&mut self, id: String) -> TaggedSentence {
        let clauses = self.rng.random_range(2..=4);
        let mut tokens = Vec::new();
        for k in 0..clauses {
            if k > 0 {
                tokens.push(self.word(",", "pg"));
                let conj = self.pick(CONNECTIVES);
                tokens.push(self.word(conj, "st"));
            }
            tokens.extend(self.clause(k == 0));
        }
        tokens.push(self.word(".", "pg"));
        let first = &mut tokens[0].surface;
        let mut chars = first.chars();
        if let Some(c) = chars.next() {
            *first = c.to_uppercase().chain(chars).collect();
        }
        TaggedSentence::new(id, tokens).expect("generated sentence is non-empty")
    }
}

/// `n` tagged sentences of two to four clauses each, ids `g0`, `g1`, ….
/// Every sentence has commas, nouns with case features, indicative verbs and
/// lexicon-listed misspelling sites; about half carry an oblique-subject
/// clause.
pub fn generate_corpus(n: usize, seed: u64) -> Vec<TaggedSentence> {
    let mut g = Generator {
        lex: &lexicons().inflection,
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    (0..n).map(|i| g.sentence(format!("g{i}"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn handwritten_corpus_loads() {
        let corpus = handwritten_corpus();
        assert_eq!(corpus.len(), 10);
        assert_eq!(
            corpus[0].text(),
            "Atvinnuleysi er ekki ein af ástæðum fólksfækkunar á Norðurlandi vestra."
        );
    }

    #[test]
    fn generator_is_deterministic_and_well_formed() {
        let a = generate_corpus(200, 7);
        assert_eq!(a, generate_corpus(200, 7));
        assert_ne!(a, generate_corpus(200, 8));
        let mean = a.iter().map(|s| s.tokens.len()).sum::<usize>() as f64 / a.len() as f64;
        assert!((12.0..=30.0).contains(&mean), "mean length {mean}");
        assert!(a.iter().all(|s| s.tokens.iter().any(|t| t.surface == ",")));
        assert!(a.iter().all(|s| s.text().ends_with('.')));
    }
}
