//! GLEU for grammatical error correction: n-gram precision of the hypothesis
//! against the reference, minus credit for source n-grams the hypothesis kept
//! but the reference changed, times a BLEU brevity penalty.
//!
//! For each order n, with `H`, `R`, `S` the n-gram multisets of hypothesis,
//! reference and source:
//!
//! ```text
//! matched = Σ min(H(g), R(g))
//! penalty = Σ max(0, min(H(g), S(g)) − R(g))
//! p_n     = max(0, matched − penalty) / |H|
//! ```
//!
//! `p_n` is floored at [`EPSILON`] when its numerator or `|H|` is zero, and is
//! 1 when neither hypothesis nor reference has any n-gram of that order.

use std::collections::HashMap;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const EPSILON: f64 = 1e-9;
pub const DEFAULT_MAX_N: usize = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GleuError {
    #[error("sentence {index}: empty reference")]
    EmptyReference { index: usize },
    #[error("sentence {index}: no references")]
    NoReferences { index: usize },
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("max_n must be at least 1")]
    ZeroOrder,
}

/// How sentence counts combine into a corpus score.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GleuMode {
    /// Sum counts and lengths over all sentences, then score once.
    #[default]
    Corpus,
    /// Score each sentence and average the scores.
    SentenceMean,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NgramCount {
    pub matched: u64,
    pub penalized: u64,
    pub total: u64,
    /// Reference n-grams of this order; only used to tell a sentence too short
    /// for the order apart from a miss.
    pub reference_total: u64,
}

/// Additive GLEU statistics for one or more sentences.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GleuStats {
    pub counts: Vec<NgramCount>,
    pub hypothesis_len: u64,
    pub reference_len: u64,
    pub empty_hypotheses: u64,
    pub sentences: u64,
}

impl GleuStats {
    pub fn new(max_n: usize) -> Self {
        GleuStats {
            counts: vec![NgramCount::default(); max_n],
            ..GleuStats::default()
        }
    }

    pub fn add(&mut self, other: &GleuStats) {
        if self.counts.len() < other.counts.len() {
            self.counts.resize(other.counts.len(), NgramCount::default());
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            a.matched += b.matched;
            a.penalized += b.penalized;
            a.total += b.total;
            a.reference_total += b.reference_total;
        }
        self.hypothesis_len += other.hypothesis_len;
        self.reference_len += other.reference_len;
        self.empty_hypotheses += other.empty_hypotheses;
        self.sentences += other.sentences;
    }

    pub fn report(&self) -> GleuReport {
        let per_n_precision: Vec<f64> = self.counts.iter().map(precision).collect();
        let brevity_penalty = brevity_penalty(self.hypothesis_len, self.reference_len);
        let score = if self.hypothesis_len == 0 {
            0.0
        } else {
            let mean_log =
                per_n_precision.iter().map(|p| p.ln()).sum::<f64>() / per_n_precision.len() as f64;
            100.0 * brevity_penalty * mean_log.exp()
        };
        GleuReport {
            score,
            per_n_precision,
            brevity_penalty,
            counts: self.counts.clone(),
            hypothesis_len: self.hypothesis_len,
            reference_len: self.reference_len,
            sentences: self.sentences,
            empty_hypotheses: self.empty_hypotheses,
        }
    }
}

fn precision(c: &NgramCount) -> f64 {
    if c.total == 0 && c.reference_total == 0 {
        return 1.0;
    }
    let numerator = c.matched.saturating_sub(c.penalized);
    if c.total == 0 || numerator == 0 {
        return EPSILON;
    }
    numerator as f64 / c.total as f64
}

/// BLEU brevity penalty for hypothesis length `c` and reference length `r`.
pub fn brevity_penalty(c: u64, r: u64) -> f64 {
    if c >= r {
        1.0
    } else if c == 0 {
        0.0
    } else {
        (1.0 - r as f64 / c as f64).exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GleuReport {
    /// In [0, 100].
    pub score: f64,
    pub per_n_precision: Vec<f64>,
    pub brevity_penalty: f64,
    pub counts: Vec<NgramCount>,
    pub hypothesis_len: u64,
    pub reference_len: u64,
    pub sentences: u64,
    /// Sentences whose hypothesis was empty; each scores 0.
    pub empty_hypotheses: u64,
}

/// Multiset of the contiguous `n`-grams of `tokens`.
pub fn ngram_counts<S: AsRef<str>>(tokens: &[S], n: usize) -> HashMap<Vec<&str>, u64> {
    let mut counts = HashMap::new();
    if n == 0 {
        return counts;
    }
    let words: Vec<&str> = tokens.iter().map(AsRef::as_ref).collect();
    for gram in words.windows(n) {
        *counts.entry(gram.to_vec()).or_insert(0) += 1;
    }
    counts
}

/// Counts for one (source, reference, hypothesis) triple.
pub fn sentence_stats<S: AsRef<str>>(
    source: &[S],
    reference: &[S],
    hypothesis: &[S],
    max_n: usize,
) -> Result<GleuStats, GleuError> {
    if max_n == 0 {
        return Err(GleuError::ZeroOrder);
    }
    if reference.is_empty() {
        return Err(GleuError::EmptyReference { index: 0 });
    }
    let mut stats = GleuStats::new(max_n);
    for n in 1..=max_n {
        let h = ngram_counts(hypothesis, n);
        let r = ngram_counts(reference, n);
        let s = ngram_counts(source, n);
        let c = &mut stats.counts[n - 1];
        for (gram, &hc) in &h {
            let rc = r.get(gram).copied().unwrap_or(0);
            let sc = s.get(gram).copied().unwrap_or(0);
            c.matched += hc.min(rc);
            c.penalized += hc.min(sc).saturating_sub(rc);
        }
        c.total = hypothesis.len().saturating_sub(n - 1) as u64;
        c.reference_total = reference.len().saturating_sub(n - 1) as u64;
    }
    stats.hypothesis_len = hypothesis.len() as u64;
    stats.reference_len = reference.len() as u64;
    stats.empty_hypotheses = u64::from(hypothesis.is_empty());
    stats.sentences = 1;
    Ok(stats)
}

pub fn gleu_sentence<S: AsRef<str>>(
    source: &[S],
    reference: &[S],
    hypothesis: &[S],
    max_n: usize,
) -> Result<GleuReport, GleuError> {
    Ok(sentence_stats(source, reference, hypothesis, max_n)?.report())
}

/// Corpus GLEU over (source, reference, hypothesis) triples.
pub fn gleu_corpus<'a, S, I>(triples: I, max_n: usize, mode: GleuMode) -> Result<GleuReport, GleuError>
where
    S: AsRef<str> + 'a,
    I: IntoIterator<Item = (&'a [S], &'a [S], &'a [S])>,
{
    let mut total = GleuStats::new(max_n);
    let mut score_sum = 0.0;
    for (index, (s, r, h)) in triples.into_iter().enumerate() {
        let stats = sentence_stats(s, r, h, max_n).map_err(|e| match e {
            GleuError::EmptyReference { .. } => GleuError::EmptyReference { index },
            other => other,
        })?;
        if mode == GleuMode::SentenceMean {
            score_sum += stats.report().score;
        }
        total.add(&stats);
    }
    if total.sentences == 0 {
        return Err(GleuError::EmptyCorpus);
    }
    let mut report = total.report();
    if mode == GleuMode::SentenceMean {
        report.score = score_sum / total.sentences as f64;
    }
    Ok(report)
}

/// One sentence with every reference available for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiRefEntry<S> {
    pub source: Vec<S>,
    pub references: Vec<Vec<S>>,
    pub hypothesis: Vec<S>,
}

/// Mean corpus GLEU over `iterations` draws of one reference per sentence.
/// Duplicate references are merged first; when every sentence is left with a
/// single reference the result is exactly [`gleu_corpus`] and `iterations`
/// is ignored.
pub fn gleu_multiref<S: AsRef<str> + PartialEq>(
    entries: &[MultiRefEntry<S>],
    iterations: usize,
    seed: u64,
    max_n: usize,
    mode: GleuMode,
) -> Result<f64, GleuError> {
    let mut distinct: Vec<Vec<&[S]>> = Vec::with_capacity(entries.len());
    for (index, e) in entries.iter().enumerate() {
        let mut refs: Vec<&[S]> = Vec::new();
        for r in &e.references {
            if !refs.iter().any(|x| *x == r.as_slice()) {
                refs.push(r);
            }
        }
        if refs.is_empty() {
            return Err(GleuError::NoReferences { index });
        }
        distinct.push(refs);
    }
    let triples = |pick: &dyn Fn(usize) -> usize| {
        entries
            .iter()
            .zip(&distinct)
            .enumerate()
            .map(|(i, (e, refs))| (e.source.as_slice(), refs[pick(i)], e.hypothesis.as_slice()))
            .collect::<Vec<_>>()
    };
    if distinct.iter().all(|refs| refs.len() == 1) {
        return Ok(gleu_corpus(triples(&|_| 0), max_n, mode)?.score);
    }
    let iterations = iterations.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    for _ in 0..iterations {
        let picks: Vec<usize> = distinct
            .iter()
            .map(|refs| *(0..refs.len()).collect::<Vec<_>>().choose(&mut rng).expect("non-empty"))
            .collect();
        sum += gleu_corpus(triples(&|i| picks[i]), max_n, mode)?.score;
    }
    Ok(sum / iterations as f64)
}
