use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{apply_op, EditLog, NoiseConfig, NoiseContext, NoiseError, NoiseOp, NoisySentence};
use crate::corpus::{ParallelPair, TaggedSentence};
use crate::span::extract_edits;

/// RNG stream for one op on one sentence. Streams depend only on the master
/// seed, the op and the sentence id, so results do not change with sharding,
/// worker count or which other ops are enabled.
pub fn op_rng(seed: u64, op: NoiseOp, sentence_id: &str) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(b"gecsynth-noise\0");
    h.update(seed.to_le_bytes());
    h.update(op.as_str().as_bytes());
    h.update(b"\0");
    h.update(sentence_id.as_bytes());
    let digest = h.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(key)
}

/// What one op did during composition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpTrace {
    pub op: NoiseOp,
    pub enabled: bool,
    /// Whether the op's firing draw succeeded.
    pub fired: bool,
    /// Whether the op found a site to act on.
    pub applicable: bool,
    /// Whether its edits were kept.
    pub applied: bool,
    pub edits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composed {
    pub pair: ParallelPair,
    pub trace: Vec<OpTrace>,
}

/// Runs every enabled op over the sentence in [`NoiseOp::ALL`] order, each
/// seeing the output of the ones before it. An op's edits are kept only if
/// its firing draw succeeds. Sentences nothing applies to come back as
/// identity pairs.
pub fn compose_noise(sentence: &TaggedSentence, ctx: &NoiseContext) -> Composed {
    let mut current = NoisySentence::from_tagged(sentence);
    let target = current.render();
    let mut edits = EditLog::default();
    let mut applied_ops = Vec::new();
    let mut trace = Vec::with_capacity(NoiseOp::ALL.len());
    for op in NoiseOp::ALL {
        if !ctx.config.op(op).enabled {
            trace.push(OpTrace {
                op,
                enabled: false,
                fired: false,
                applicable: false,
                applied: false,
                edits: 0,
            });
            continue;
        }
        let mut rng = op_rng(ctx.config.seed, op, &sentence.id);
        let fired = rng.random_bool(ctx.config.firing_probability(op));
        let outcome = apply_op(op, &current, ctx, &mut rng);
        let applied = fired && outcome.changed;
        trace.push(OpTrace {
            op,
            enabled: true,
            fired,
            applicable: outcome.applicable,
            applied,
            edits: if applied { outcome.log.len() } else { 0 },
        });
        if applied {
            current = outcome.sentence;
            edits.extend(outcome.log);
            applied_ops.push(op);
        }
    }
    let pair = ParallelPair {
        id: sentence.id.clone(),
        source: current.render(),
        target,
        edits,
        applied_ops,
    };
    Composed { pair, trace }
}

/// [`compose_noise`] over a corpus on `workers` threads. Output order
/// follows input order.
pub fn compose_corpus(
    sentences: &[TaggedSentence],
    ctx: &NoiseContext,
    workers: usize,
) -> Result<Vec<Composed>, NoiseError> {
    if workers <= 1 {
        return Ok(sentences.iter().map(|s| compose_noise(s, ctx)).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| NoiseError::Config(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(|| sentences.par_iter().map(|s| compose_noise(s, ctx)).collect()))
}

/// Builds `n` pairs that each carry only `op`'s errors, walking the corpus in
/// order and skipping sentences the op cannot change.
pub fn generate_typed_testset(
    corpus: &[TaggedSentence],
    op: NoiseOp,
    n: usize,
    ctx: &NoiseContext,
) -> Result<Vec<ParallelPair>, NoiseError> {
    let config: NoiseConfig = ctx.config.clone().only(&[op]);
    let typed = NoiseContext::new(&config, ctx.lexicons);
    let mut out = Vec::with_capacity(n);
    for sentence in corpus {
        if out.len() == n {
            break;
        }
        let clean = NoisySentence::from_tagged(sentence);
        let mut rng = op_rng(config.seed, op, &sentence.id);
        let outcome = apply_op(op, &clean, &typed, &mut rng);
        if !outcome.changed {
            continue;
        }
        out.push(ParallelPair {
            id: sentence.id.clone(),
            source: outcome.sentence.render(),
            target: clean.render(),
            edits: outcome.log,
            applied_ops: vec![op],
        });
    }
    if out.len() < n {
        return Err(NoiseError::Exhausted {
            op,
            found: out.len(),
            requested: n,
        });
    }
    Ok(out)
}

/// Undoes the pair's edit log on its source and checks the result is the
/// target.
pub fn invert(pair: &ParallelPair) -> Result<String, NoiseError> {
    let restored = pair.edits.undo(&pair.source)?;
    if restored != pair.target {
        return Err(NoiseError::InversionMismatch {
            restored,
            target: pair.target.clone(),
        });
    }
    Ok(restored)
}

/// Char region `[start, end)` of a record mapped back to clean-text
/// coordinates through the records before it.
fn clean_regions(log: &EditLog) -> Vec<(usize, usize)> {
    let records = log.records();
    let mut out = Vec::with_capacity(records.len());
    for (k, r) in records.iter().enumerate() {
        let (mut start, mut end) = (r.offset, r.offset + r.before.chars().count());
        for prev in records[..k].iter().rev() {
            let o = prev.offset;
            let a = prev.after.chars().count();
            let b = prev.before.chars().count();
            start = if start >= o + a {
                start - a + b
            } else {
                start.min(o)
            };
            end = if end <= o {
                end
            } else if end < o + a {
                o + b
            } else {
                end - a + b
            };
        }
        out.push((start, end));
    }
    out
}

fn touches(a: (usize, usize), b: (usize, usize)) -> bool {
    a.0 <= b.1 && b.0 <= a.1
}

/// Checks that a typed pair is explained by `op` alone: every record belongs
/// to `op`, there is at least one, the log inverts to the target, and the
/// token-level edits between target and source line up with the records.
pub fn verify_isolation(pair: &ParallelPair, op: NoiseOp, ctx: &NoiseContext) -> Result<(), NoiseError> {
    let fail = |reason: String| NoiseError::NotIsolated {
        id: pair.id.clone(),
        op,
        reason,
    };
    if pair.edits.is_empty() {
        return Err(fail("no edit records".into()));
    }
    if let Some(r) = pair.edits.records().iter().find(|r| r.op != op) {
        return Err(fail(format!("record from {}", r.op)));
    }
    invert(pair)?;

    let tokenizer = &ctx.lexicons.tokenizer;
    let clean = tokenizer.tokenize(&pair.target);
    let noised = tokenizer.tokenize(&pair.source);
    let spans = extract_edits(&clean.surfaces(), &noised.surfaces());
    if spans.is_empty() {
        return Err(fail("source and target tokenize identically".into()));
    }
    let text_len = pair.target.chars().count();
    let span_regions: Vec<(usize, usize)> = spans
        .iter()
        .map(|s| {
            let start = clean.tokens.get(s.start).map_or(text_len, |t| t.start);
            let end = if s.end > s.start {
                clean.tokens[s.end - 1].end
            } else {
                start
            };
            (start, end)
        })
        .collect();
    // Char diffs may start mid-word ("ferð" -> "f|yrir f|erð"), so records
    // are widened to the tokens they cut into before comparing.
    let widen = |pos: usize, to_start: bool| {
        clean
            .tokens
            .iter()
            .find(|t| t.start < pos && pos < t.end)
            .map_or(pos, |t| if to_start { t.start } else { t.end })
    };
    let records: Vec<(usize, usize)> = clean_regions(&pair.edits)
        .into_iter()
        .map(|(s, e)| (widen(s, true), widen(e, false)))
        .collect();
    if let Some(s) = span_regions.iter().find(|s| !records.iter().any(|r| touches(**s, *r))) {
        return Err(fail(format!("token edit at chars {}..{} has no record", s.0, s.1)));
    }
    if let Some(r) = records.iter().find(|r| !span_regions.iter().any(|s| touches(*s, **r))) {
        return Err(fail(format!("record at chars {}..{} has no token edit", r.0, r.1)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TaggedToken;
    use crate::noise::{EditRecord, Lexicons, OpSettings};

    fn sentence(id: &str, words: &[&str]) -> TaggedSentence {
        TaggedSentence::new(id, words.iter().map(|w| TaggedToken::bare(*w)).collect()).unwrap()
    }

    fn rec(offset: usize, before: &str, after: &str) -> EditRecord {
        EditRecord {
            op: NoiseOp::DuplicateChar,
            token: 0,
            offset,
            before: before.into(),
            after: after.into(),
        }
    }

    #[test]
    fn op_streams_are_distinct_and_stable() {
        let a: u64 = op_rng(1, NoiseOp::DropChar, "s1").random();
        let b: u64 = op_rng(1, NoiseOp::DropChar, "s1").random();
        let c: u64 = op_rng(1, NoiseOp::DuplicateChar, "s1").random();
        let d: u64 = op_rng(1, NoiseOp::DropChar, "s2").random();
        let e: u64 = op_rng(2, NoiseOp::DropChar, "s1").random();
        assert_eq!(a, b);
        assert!(a != c && a != d && a != e);
    }

    #[test]
    fn all_zero_probabilities_give_identity() {
        let mut config = NoiseConfig::default();
        for op in NoiseOp::ALL {
            config.set_op(op, OpSettings { probability: Some(0.0), ..OpSettings::default() });
        }
        let lex = Lexicons::default();
        let ctx = NoiseContext::new(&config, &lex);
        let c = compose_noise(&sentence("s1", &["vinna", "og", "hús", "."]), &ctx);
        assert!(c.pair.is_identity());
        assert!(c.pair.edits.is_empty());
        assert!(c.trace.iter().all(|t| !t.applied));
    }

    #[test]
    fn composition_inverts() {
        let config = NoiseConfig::default();
        let lex = Lexicons::default();
        let ctx = NoiseContext::new(&config, &lex);
        for i in 0..50 {
            let s = sentence(&format!("s{i}"), &["Atvinnuleysi", "er", "mikið", ",", "segir", "hann", "."]);
            let c = compose_noise(&s, &ctx);
            assert_eq!(invert(&c.pair).unwrap(), c.pair.target);
            assert_eq!(c.pair.edits.replay(&c.pair.target).unwrap(), c.pair.source);
        }
    }

    #[test]
    fn tampered_log_fails_inversion() {
        let mut pair = ParallelPair::identity("x", "ein af");
        pair.source = "eein af".into();
        pair.edits = EditLog(vec![rec(1, "", "e")]);
        assert_eq!(invert(&pair).unwrap(), "ein af");
        pair.edits = EditLog(vec![rec(1, "", "x")]);
        assert!(matches!(invert(&pair), Err(NoiseError::Integrity { .. })));
        pair.edits = EditLog(vec![rec(0, "", "")]);
        assert!(matches!(invert(&pair), Err(NoiseError::InversionMismatch { .. })));
    }

    #[test]
    fn regions_map_back_through_earlier_edits() {
        // "abcdef" -> "aXXbcdef" (insert at 1) -> "aXXbcdYef" (insert at 6)
        let log = EditLog(vec![rec(1, "", "XX"), rec(6, "", "Y")]);
        assert_eq!(log.replay("abcdef").unwrap(), "aXXbcdYef");
        assert_eq!(clean_regions(&log), vec![(1, 1), (4, 4)]);
        // second edit inside the first one's output collapses onto it
        let log = EditLog(vec![rec(1, "b", "XYZ"), rec(2, "Y", "")]);
        assert_eq!(clean_regions(&log), vec![(1, 2), (1, 2)]);
    }

    #[test]
    fn typed_set_exhaustion() {
        let config = NoiseConfig::default();
        let lex = Lexicons::default();
        let ctx = NoiseContext::new(&config, &lex);
        let corpus = vec![sentence("a", &["hús", "."]), sentence("b", &["x", ",", "y", "."])];
        let pairs = generate_typed_testset(&corpus, NoiseOp::DeleteCommas, 1, &ctx).unwrap();
        assert_eq!(pairs[0].source, "x y.");
        verify_isolation(&pairs[0], NoiseOp::DeleteCommas, &ctx).unwrap();
        assert!(matches!(
            generate_typed_testset(&corpus, NoiseOp::DeleteCommas, 2, &ctx),
            Err(NoiseError::Exhausted { found: 1, requested: 2, .. })
        ));
        assert!(generate_typed_testset(&corpus, NoiseOp::Dativitis, 1, &ctx).is_err());
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let config = NoiseConfig::default();
        let lex = Lexicons::default();
        let ctx = NoiseContext::new(&config, &lex);
        let corpus: Vec<TaggedSentence> = (0..40)
            .map(|i| sentence(&format!("s{i}"), &["vinnu", "og", "vestra", ",", "ein", "af", "."]))
            .collect();
        let one = compose_corpus(&corpus, &ctx, 1).unwrap();
        let four = compose_corpus(&corpus, &ctx, 4).unwrap();
        assert_eq!(one, four);
    }
}
