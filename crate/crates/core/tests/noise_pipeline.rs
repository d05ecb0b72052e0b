use std::collections::BTreeSet;

use gecsynth::corpus::TaggedSentence;
use gecsynth::noise::{
    apply_op, compose_corpus, compose_noise, generate_typed_testset, invert, verify_isolation, EditRecord,
    NoiseConfig, NoiseContext, NoiseOp, NoisySentence, OpSettings,
};
use gecsynth_fixtures::{config, generate_corpus, handwritten_corpus, lexicons};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn find(id: &str) -> TaggedSentence {
    handwritten_corpus().into_iter().find(|s| s.id == id).unwrap()
}

fn renderings(op: NoiseOp, sentence: &TaggedSentence, config: &NoiseConfig) -> BTreeSet<String> {
    let ctx = NoiseContext::new(config, lexicons());
    let s = NoisySentence::from_tagged(sentence);
    (0..400u64)
        .map(|seed| apply_op(op, &s, &ctx, &mut ChaCha8Rng::seed_from_u64(seed)).sentence.render())
        .collect()
}

#[test]
fn grammatical_examples_on_fixture_sentences() {
    let c = config();
    let s1 = find("s1");
    let cases = renderings(NoiseOp::SwapNounCase, &s1, &c);
    assert!(cases.contains("Atvinnuleysi er ekki ein af ástæðna fólksfækkunar á Norðurlandi vestra."));
    assert!(cases.contains("Atvinnuleysi er ekki ein af ástæðum fólksfækkun á Norðurlandi vestra."));

    let s2 = find("s2");
    let dat = renderings(NoiseOp::Dativitis, &s2, &c);
    assert_eq!(
        dat,
        BTreeSet::from(["Ég er að leita að vinnu og mér langar að fá að skoða atvinnuauglýsingarnar.".to_owned()])
    );
    let miss = renderings(NoiseOp::Misspelling, &s2, &c);
    assert!(miss.contains("Ég er að 4eita að vinnu og mig langar að fá að skoða atvinnuauglýsingarnar."));
    assert!(miss.contains("Ég er að leita að vynnu og mig langar að fá að skoða atvinnuauglýsingarnar."));

    let s3 = find("s3");
    assert_eq!(
        renderings(NoiseOp::Dativitis, &s3, &c),
        BTreeSet::from(["Mér hlakkar til sumars.".to_owned()])
    );
    let s4 = find("s4");
    assert_eq!(
        renderings(NoiseOp::Dativitis, &s4, &c),
        BTreeSet::from(["Páli langar að fara á Norðurland.".to_owned()])
    );
    let moods = renderings(NoiseOp::SwapMood, &s3, &c);
    assert_eq!(moods, BTreeSet::from(["Ég hlakki til sumars.".to_owned()]));
}

#[test]
fn compound_split_on_fixture_sentence() {
    let outs = renderings(NoiseOp::SplitCompound, &find("s7"), &config());
    assert!(outs.contains("Við lesum bók í bóka safni, og Anna skrifar lýsingu."));
}

#[test]
fn composed_corpus_is_noisy_and_invertible() {
    let c = config();
    let ctx = NoiseContext::new(&c, lexicons());
    let corpus = generate_corpus(10_000, 11);
    let composed = compose_corpus(&corpus, &ctx, 1).unwrap();
    let mut changed = 0;
    for item in &composed {
        let pair = &item.pair;
        assert_eq!(invert(pair).unwrap(), pair.target, "{}", pair.id);
        assert_eq!(pair.edits.replay(&pair.target).unwrap(), pair.source);
        let ratio = pair.source.chars().count() as f64 / pair.target.chars().count() as f64;
        assert!((0.3..=3.0).contains(&ratio));
        changed += usize::from(!pair.is_identity());
    }
    assert!(changed as f64 / composed.len() as f64 > 0.95, "{changed}");
}

#[test]
fn composition_is_deterministic() {
    let c = config();
    let ctx = NoiseContext::new(&c, lexicons());
    let corpus = generate_corpus(300, 5);
    let a = compose_corpus(&corpus, &ctx, 1).unwrap();
    let b = compose_corpus(&corpus, &ctx, 3).unwrap();
    assert_eq!(a, b);
    let shuffled: Vec<TaggedSentence> = corpus.iter().rev().cloned().collect();
    let mut c2 = compose_corpus(&shuffled, &ctx, 2).unwrap();
    c2.reverse();
    assert_eq!(a, c2);
}

/// Records `op` contributed to a composition.
fn records_of(op: NoiseOp, records: &[EditRecord]) -> Vec<EditRecord> {
    records.iter().filter(|r| r.op == op).cloned().collect()
}

#[test]
fn disabling_an_op_leaves_other_streams_alone() {
    let base = config();
    let corpus = generate_corpus(200, 9);
    for (k, disabled) in NoiseOp::ALL.into_iter().enumerate() {
        let mut off = base.clone();
        off.set_op(disabled, OpSettings { enabled: false, ..base.op(disabled) });
        let on_ctx = NoiseContext::new(&base, lexicons());
        let off_ctx = NoiseContext::new(&off, lexicons());
        for s in &corpus {
            let with = compose_noise(s, &on_ctx);
            let without = compose_noise(s, &off_ctx);
            for (j, op) in NoiseOp::ALL.into_iter().enumerate() {
                if op == disabled {
                    assert!(records_of(op, without.pair.edits.records()).is_empty());
                    continue;
                }
                assert_eq!(with.trace[j].fired, without.trace[j].fired, "{disabled} changed {op} firing");
                if j < k {
                    assert_eq!(
                        records_of(op, with.pair.edits.records()),
                        records_of(op, without.pair.edits.records()),
                        "{disabled} changed {op} edits"
                    );
                }
            }
        }
    }
}

#[test]
fn typed_test_sets_are_isolated() {
    let c = config();
    let ctx = NoiseContext::new(&c, lexicons());
    let corpus = generate_corpus(3000, 3);
    for (name, op) in NoiseOp::TEST_SETS {
        let pairs = generate_typed_testset(&corpus, op, 100, &ctx).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(pairs.len(), 100);
        for p in &pairs {
            verify_isolation(p, op, &ctx).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}

#[test]
fn typed_comma_set_differs_only_in_commas() {
    let c = config();
    let ctx = NoiseContext::new(&c, lexicons());
    let pairs = generate_typed_testset(&generate_corpus(200, 4), NoiseOp::DeleteCommas, 100, &ctx).unwrap();
    for p in pairs {
        let strip = |s: &str| s.replace(',', "").split_whitespace().collect::<Vec<_>>().join(" ");
        assert_eq!(strip(&p.source), strip(&p.target));
        assert!(p.source.matches(',').count() < p.target.matches(',').count());
    }
}

#[test]
fn dativitis_exhausts_without_oblique_verbs() {
    let c = config();
    let ctx = NoiseContext::new(&c, lexicons());
    let plain: Vec<TaggedSentence> = handwritten_corpus()
        .into_iter()
        .filter(|s| !s.tokens.iter().any(|t| lexicons().oblique_verbs.get(&t.lemma).is_some()))
        .collect();
    assert!(!plain.is_empty());
    assert!(generate_typed_testset(&plain, NoiseOp::Dativitis, 1, &ctx).is_err());
}
